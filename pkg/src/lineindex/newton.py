"""Newton polyhedron, its compact faces, and the 2-cones of the dual Newton
diagram whose interiors are strictly positive.

All geometry runs on exact integers. Faces of the Newton polyhedron
Gamma_+(f) = conv(supp f) + R^3_{>=0} are found through their minimizing
covectors; the unbounded part never has to be built explicitly.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, UnsupportedInput, ValidationError
from .lattice import UNIT, Covector, cross, det2, primitive

Exp = tuple[int, int, int]
VARS = ("x", "y", "z")


# -- polynomials ---------------------------------------------------------------


@dataclass(frozen=True)
class LatticePolynomial:
    """Sparse polynomial in x, y, z with exact rational coefficients."""

    terms: tuple[tuple[Exp, Fraction], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("polynomial has no terms")
        exps = [e for e, _ in self.terms]
        if len(set(exps)) != len(exps):
            raise ValueError("duplicate exponents")

    @classmethod
    def from_mapping(cls, mapping: Mapping[Sequence[int], object]) -> "LatticePolynomial":
        merged: dict[Exp, Fraction] = {}
        for exp, coef in mapping.items():
            e = tuple(int(a) for a in exp)
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent {exp!r}")
            merged[e] = merged.get(e, Fraction(0)) + Fraction(coef)
        items = sorted(((e, c) for e, c in merged.items() if c != 0), reverse=True)
        return cls(tuple(items))

    @property
    def support(self) -> tuple[Exp, ...]:
        return tuple(e for e, _ in self.terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return dict(self.terms).get(tuple(exp), Fraction(0))

    def restrict(self, points: Iterable[Sequence[int]]) -> "LatticePolynomial":
        """Sub-polynomial on the given exponents (a face function)."""
        keep = {tuple(p) for p in points}
        return LatticePolynomial(tuple((e, c) for e, c in self.terms if e in keep))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        out = []
        for exp, coef in self.terms:
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(VARS, exp) if a
            )
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def to_records(self) -> list[dict]:
        return [{"exp": list(e), "coef": str(c)} for e, c in self.terms]


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\*\*|\^)|([+\-*]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, power, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("var", name))
        elif power is not None:
            out.append(("pow", power))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


def parse_polynomial(text: str) -> LatticePolynomial:
    """Read ``"x^2 + y^3 - 3/2*x*y*z"``-style text.

    Terms are separated by ``+``/``-``; a term is an optional rational
    coefficient followed by ``*``-separated powers of x, y, z.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    terms: dict[Exp, Fraction] = {}
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        if i > 0 or tokens[0] == ("op", "-") or tokens[0] == ("op", "+"):
            if tokens[i] not in (("op", "+"), ("op", "-")):
                raise ParseError(f"expected '+' or '-' before {tokens[i][1]!r}")
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        coef, exp, i = _parse_term(tokens, i)
        e = tuple(exp)
        terms[e] = terms.get(e, Fraction(0)) + sign * coef
    return _finish(terms)


def _parse_term(tokens, i):
    coef = Fraction(1)
    exp = [0, 0, 0]
    if i >= len(tokens):
        raise ParseError("trailing operator")
    first = True
    while True:
        if i >= len(tokens):
            raise ParseError("dangling '*'")
        kind, val = tokens[i]
        if kind == "num" and first:
            try:
                coef = Fraction(val)
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {val!r}") from None
            i += 1
        elif kind == "var":
            if val not in VARS:
                raise ParseError(f"unknown variable {val!r}; only x, y, z are allowed")
            i += 1
            power = 1
            if i < len(tokens) and tokens[i][0] == "pow":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                    raise ParseError(f"expected a non-negative integer exponent after {val}^")
                power = int(tokens[i + 1][1])
                i += 2
            exp[VARS.index(val)] += power
        else:
            raise ParseError(f"unexpected token {val!r}")
        first = False
        if i < len(tokens) and tokens[i] == ("op", "*"):
            i += 1
            continue
        if i < len(tokens) and tokens[i][0] == "var":
            continue  # juxtaposition, e.g. "2x" or "x y"
        return coef, exp, i


def parse_records(records: Sequence[Mapping]) -> LatticePolynomial:
    """Structured form: ``[{"exp": [a, b, c], "coef": "num/den"}, ...]``.

    ``coef`` may be omitted (support-only input, coefficient 1).
    """
    if not isinstance(records, (list, tuple)):
        raise ParseError("structured input must be a list of term records")
    terms: dict[Exp, Fraction] = {}
    for rec in records:
        try:
            exp = tuple(int(a) for a in rec["exp"])
            coef = Fraction(str(rec.get("coef", 1)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad term record {rec!r}: {exc}") from None
        if len(exp) != 3 or min(exp) < 0:
            raise ParseError(f"exponent must be three non-negative integers: {rec!r}")
        terms[exp] = terms.get(exp, Fraction(0)) + coef
    return _finish(terms)


def load_polynomial(source) -> LatticePolynomial:
    """Accept text, a record list, a mapping, or a JSON string of records."""
    if isinstance(source, LatticePolynomial):
        return source
    if isinstance(source, str):
        stripped = source.strip()
        if stripped.startswith("["):
            try:
                return parse_records(json.loads(stripped))
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from None
        return parse_polynomial(source)
    if isinstance(source, Mapping):
        return _finish({tuple(k): Fraction(v) for k, v in source.items()})
    return parse_records(source)


def _finish(terms: dict[Exp, Fraction]) -> LatticePolynomial:
    poly = {e: c for e, c in terms.items() if c != 0}
    if not poly:
        raise ParseError("polynomial is zero after merging terms")
    if len(poly) < 2:
        raise ParseError("a single monomial does not define a singularity of interest")
    return LatticePolynomial.from_mapping(poly)


# -- faces ---------------------------------------------------------------------


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    if not points:
        raise ValueError("no points")
    base = points[0]
    diffs = [tuple(p[j] - base[j] for j in range(3)) for p in points[1:]]
    diffs = [v for v in diffs if any(v)]
    if not diffs:
        return 0
    planar = [cross(diffs[0], v) for v in diffs[1:]]
    planar = [w for w in planar if any(w)]
    if not planar:
        return 1
    n = planar[0]
    if any(sum(n[j] * v[j] for j in range(3)) for v in diffs):
        return 3
    return 2


def _convex_polygon(points: Sequence[Exp]) -> tuple[Exp, ...]:
    """Vertices of a planar lattice polygon in cyclic order, collinear points dropped.

    Points lie in a plane with strictly positive normal, so projecting away
    the z coordinate is injective.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Exp] = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Exp] = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


@dataclass(frozen=True)
class Face:
    """Delta(P; f): the support points minimizing P, with d(P; f) = value."""

    normal: Covector
    value: int
    points: tuple[Exp, ...]
    dim: int
    vertices: tuple[Exp, ...] = field(default=(), compare=False)

    def edges(self) -> list[tuple[Exp, Exp]]:
        """Boundary edges of a 2-dimensional face, as vertex pairs."""
        if self.dim != 2:
            raise ValueError("only 2-dimensional faces have boundary edges")
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def face_of(f: LatticePolynomial, P: Sequence[int]) -> Face:
    P = Covector(*P)
    values = {e: P.dot(e) for e in f.support}
    low = min(values.values())
    pts = tuple(sorted(e for e, v in values.items() if v == low))
    dim = affine_dim(pts)
    if dim == 2:
        verts = _convex_polygon(pts)
    elif dim == 1:
        verts = _segment_ends(pts)
    else:
        verts = pts[:1]
    return Face(P, low, pts, dim, verts)


def face_function(f: LatticePolynomial, P: Sequence[int]) -> LatticePolynomial:
    return f.restrict(face_of(f, P).points)


def _segment_ends(points: Sequence[Exp]) -> tuple[Exp, Exp]:
    base = points[0]
    far = max(points, key=lambda p: sum((p[j] - base[j]) ** 2 for j in range(3)))
    other = max(points, key=lambda p: sum((p[j] - far[j]) ** 2 for j in range(3)))
    return tuple(sorted((far, other)))


def compact_facets(f: LatticePolynomial) -> list[Face]:
    """Compact 2-dimensional faces of Gamma_+(f), sorted by normal.

    A plane through three support points bounds a compact facet exactly when
    its normal can be oriented strictly positive with every support point on
    the non-negative side.
    """
    supp = f.support
    normals: set[Covector] = set()
    for a, b, c in combinations(supp, 3):
        n = cross(
            tuple(b[j] - a[j] for j in range(3)), tuple(c[j] - a[j] for j in range(3))
        )
        if not any(n):
            continue
        if min(n) <= 0:
            n = tuple(-x for x in n)
        if min(n) <= 0:
            continue
        level = sum(n[j] * a[j] for j in range(3))
        if all(sum(n[j] * e[j] for j in range(3)) >= level for e in supp):
            normals.add(primitive(n))
    return [face_of(f, P) for P in sorted(normals)]


# -- normal cones of edges -----------------------------------------------------


def lattice_kernel(u: Sequence[int]) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """A basis of the saturated rank-2 lattice {R in Z^3 : R.u = 0}."""
    if not any(u):
        raise ValueError("zero direction")
    w = list(u)
    cols = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    while sum(1 for x in w if x) > 1:
        i = min((j for j in range(3) if w[j]), key=lambda j: abs(w[j]))
        for j in range(3):
            if j != i and w[j]:
                q = w[j] // w[i]
                w[j] -= q * w[i]
                cols[j] = [cols[j][k] - q * cols[i][k] for k in range(3)]
    basis = [tuple(cols[j]) for j in range(3) if w[j] == 0]
    assert len(basis) == 2
    return basis[0], basis[1]


def edge_normal_cone(support: Sequence[Exp], B: Exp, C: Exp) -> tuple[Covector, ...]:
    """Extreme rays of {R >= 0 : R(B) = R(C) <= R(nu) for all nu in support}.

    Solved as a planar cone problem in a lattice basis (w1, w2) of the plane
    orthogonal to C - B. Returns 0, 1 or 2 primitive rays.
    """
    u = tuple(C[j] - B[j] for j in range(3))
    w1, w2 = lattice_kernel(u)
    vecs = [(1, 0, 0), (0, 1, 0), (0, 0, 1)] + [
        tuple(nu[j] - B[j] for j in range(3)) for nu in support
    ]
    half = set()
    for v in vecs:
        a = sum(w1[j] * v[j] for j in range(3))
        b = sum(w2[j] * v[j] for j in range(3))
        if a or b:
            half.add((a, b))
    cands = set()
    for a, b in half:
        g = gcd(a, b)
        cands.add((-b // g, a // g))
        cands.add((b // g, -a // g))
    feasible = [s for s in cands if all(a * s[0] + b * s[1] >= 0 for a, b in half)]
    if not feasible:
        return ()

    def cr(s, t):
        return s[0] * t[1] - s[1] * t[0]

    rays = []
    for s in feasible:
        if all(cr(s, t) >= 0 for t in feasible) or all(cr(s, t) <= 0 for t in feasible):
            rays.append(s)
    out = set()
    for s in rays:
        R = tuple(s[0] * w1[j] + s[1] * w2[j] for j in range(3))
        out.add(Covector(*R))
    return tuple(sorted(out))


def adjacent_covector(f: LatticePolynomial, facet: Face, edge: Sequence[Exp]) -> Covector:
    """The second extreme ray of the normal cone of an edge of ``facet``."""
    B, C = (tuple(p) for p in edge)
    if B == C or B not in facet.points or C not in facet.points:
        raise ValueError(f"{B}-{C} is not an edge of the facet {facet.normal}")
    rays = edge_normal_cone(f.support, B, C)
    if len(rays) != 2 or facet.normal not in rays:
        raise ValueError(f"{B}-{C} is not an edge of the facet {facet.normal}")
    (R,) = [r for r in rays if r != facet.normal]
    return R


# -- the 2-skeleton ------------------------------------------------------------


@dataclass(frozen=True)
class Cone2:
    """Cone(P, Q) with strictly positive P, d = det(P, Q) and its edge data.

    ``r`` counts lattice points strictly inside the edge Delta(P)^Delta(Q).
    """

    P: Covector
    Q: Covector
    d: int
    edge: tuple[Exp, Exp]
    r: int

    @property
    def facet_facet(self) -> bool:
        return self.Q.strictly_positive

    @property
    def regular(self) -> bool:
        return self.d == 1


def edge_interior_points(B: Sequence[int], C: Sequence[int]) -> int:
    return gcd(*(abs(B[j] - C[j]) for j in range(3))) - 1


def make_cone(A: Covector, Bv: Covector, edge: Sequence[Exp]) -> Cone2:
    """Orient a cone: P is the strictly positive generator (lexicographically
    larger one when both are)."""
    if A.strictly_positive and Bv.strictly_positive:
        P, Q = max(A, Bv), min(A, Bv)
    elif A.strictly_positive:
        P, Q = A, Bv
    elif Bv.strictly_positive:
        P, Q = Bv, A
    else:
        raise UnsupportedInput(f"cone ({A}, {Bv}) has no strictly positive generator")
    e = tuple(sorted(tuple(p) for p in edge))
    return Cone2(P, Q, det2(P, Q), e, edge_interior_points(*e))


def compact_edges(f: LatticePolynomial) -> dict[tuple[Exp, Exp], tuple[Covector, Covector]]:
    """All compact edges of Gamma_+(f) with the two extreme rays of their normal cone."""
    supp = f.support
    out = {}
    for B, C in combinations(supp, 2):
        rays = edge_normal_cone(supp, B, C)
        if len(rays) != 2:
            continue
        inner = tuple(rays[0][j] + rays[1][j] for j in range(3))
        if min(inner) == 0:
            continue
        face = face_of(f, primitive(inner))
        if face.dim != 1:
            continue
        out[face.vertices] = rays
    return out


def dual_diagram2(f: LatticePolynomial) -> list[Cone2]:
    """One Cone2 per edge of the Newton boundary, sorted by (P, Q)."""
    facets = compact_facets(f)
    if not facets:
        raise UnsupportedInput("Gamma(f) has no 2-dimensional compact face")
    cones: dict[frozenset, Cone2] = {}
    for facet in facets:
        for edge in facet.edges():
            Q = adjacent_covector(f, facet, edge)
            key = frozenset((facet.normal, Q))
            if key not in cones:
                cones[key] = make_cone(facet.normal, Q, edge)
    seen_edges = {c.edge for c in cones.values()}
    for edge, rays in compact_edges(f).items():
        if edge not in seen_edges:
            raise UnsupportedInput(
                f"compact edge {edge[0]}-{edge[1]} meets no compact 2-face (normal cone {rays})"
            )
    return sorted(cones.values(), key=lambda c: (c.P, c.Q))


# -- axes and input validation -------------------------------------------------


def axis_membership(f: LatticePolynomial) -> frozenset[int]:
    """Coordinate axes (0 = x, 1 = y, 2 = z) contained in {f = 0}."""
    out = set()
    for i in range(3):
        others = [j for j in range(3) if j != i]
        if not any(all(e[j] == 0 for j in others) for e in f.support):
            out.add(i)
    return frozenset(out)


def validate(f: LatticePolynomial) -> None:
    """Necessary conditions for an isolated singular point at the origin."""
    for e in f.support:
        if sum(e) == 0:
            raise ValidationError("f(0) != 0: the origin is not on the surface")
        if sum(e) == 1:
            raise ValidationError(
                f"linear term {VARS[e.index(1)]}: the origin is a smooth point"
            )
    for i in sorted(axis_membership(f)):
        ok = any(
            e[j] == 1 and sum(e) - e[i] == 1
            for e in f.support
            for j in range(3)
            if j != i
        )
        if not ok:
            u, v = [VARS[j] for j in range(3) if j != i]
            raise ValidationError(
                f"the {VARS[i]}-axis lies in X but f has no term {VARS[i]}^a*{u} or "
                f"{VARS[i]}^a*{v}; the singularity is not isolated"
            )


def is_unit(Q: Sequence[int]) -> bool:
    return tuple(Q) in UNIT
