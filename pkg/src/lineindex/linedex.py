"""Normally smooth divisors on each 2-cone and the line index of the
canonical toric resolution.

A vertex R of the resolution fan gives a normally smooth exceptional divisor
exactly when some coordinate of R equals 1. On a cone Cone(P, Q) the interior
chain vertices are ``(beta*P + alpha*Q)/d``; those with ``R_l = 1`` are the
solutions of

    alpha*q_l + beta*p_l = d,        0 < alpha, beta < d,
    alpha*q_k + beta*p_k = 0 (mod d) for k != l,

so they can be found without building the whole chain.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .lattice import (
    CanonicalChain,
    Covector,
    canonical_subdivision,
    det2,
    solve_congruences,
)
from .newton import (
    VARS,
    Cone2,
    LatticePolynomial,
    axis_membership,
    compact_facets,
    dual_diagram2,
    face_of,
    is_unit,
    validate,
)

log = logging.getLogger(__name__)


class NsSolution(NamedTuple):
    """``covector = (beta*P + alpha*Q)/d`` with ``covector[coord] == 1``."""

    covector: Covector
    coord: int
    alpha: int
    beta: int


def vns_scan(chain: CanonicalChain) -> list[NsSolution]:
    """Interior chain vertices with a coordinate equal to 1, one entry per such coordinate."""
    out = []
    for v in chain.interior:
        for l in v.covector.ones():
            out.append(NsSolution(v.covector, l, v.alpha, v.beta))
    return out


def _solution(P, Q, d, l, alpha, beta) -> NsSolution | None:
    vec = [beta * P[j] + alpha * Q[j] for j in range(3)]
    if any(x % d for x in vec):
        return None
    R = Covector(*(x // d for x in vec))
    assert R[l] == 1
    return NsSolution(R, l, alpha, beta)


def vns_congruence(P: Covector, Q: Covector, l: int, brute: bool = False) -> list[NsSolution]:
    """All solutions of the system above for coordinate ``l``, sorted by beta.

    The default walks only the arithmetic progression of alpha allowed by
    the congruences; ``brute=True`` scans every alpha in 1..d-1.
    """
    d = det2(P, Q)
    p, q = P[l], Q[l]
    if p <= 0:
        raise ValueError(f"P must be strictly positive, got {P}")
    if d <= 1:
        return []
    found = []
    if brute:
        for alpha in range(1, d):
            beta, rem = divmod(d - alpha * q, p)
            if rem or not 0 < beta < d:
                continue
            sol = _solution(P, Q, d, l, alpha, beta)
            if sol is not None:
                found.append(sol)
        return sorted(found, key=lambda s: s.beta)

    # alpha*q + beta*p = d: alpha = a0 + u*s, beta = b0 - v*s
    g = gcd(p, q)
    if d % g:
        return []
    u, v = p // g, q // g
    if q == 0:
        a0, b0 = 0, d // p
    else:
        # particular solution of alpha*v + beta*u = d/g
        a0 = (d // g) * pow(v, -1, u) % u if u > 1 else 0
        b0 = (d - a0 * q) // p
    others = [k for k in range(3) if k != l]
    sol = solve_congruences(
        (u * Q[k] - v * P[k], -(a0 * Q[k] + b0 * P[k]), d) for k in others
    )
    if sol is None:
        return []
    s0, M = sol
    # alpha grows with s; start at the first s giving alpha > 0
    s_min = (-a0) // u + 1
    s = s_min + (s0 - s_min) % M
    while True:
        alpha, beta = a0 + u * s, b0 - v * s
        if alpha >= d or beta <= 0:
            break
        if beta < d:
            hit = _solution(P, Q, d, l, alpha, beta)
            assert hit is not None
            found.append(hit)
        s += M
    return sorted(found, key=lambda x: x.beta)


def vns_closed_form(P: Covector, Q: Covector, l: int) -> list[NsSolution]:
    """Closed form when ``Q[l]`` is 0 or 1.

    ``Q[l] == 0``: nonempty iff d == p_l, and then only Q1 (beta = 1).
    ``Q[l] == 1``: the chain vertices ``(i*P + (d - i*p_l)*Q)/d`` for
    ``1 <= i`` while ``d - i*p_l > 0``.
    """
    d = det2(P, Q)
    p, q = P[l], Q[l]
    if q not in (0, 1):
        raise ValueError(f"coordinate {l} of Q must be 0 or 1, got {q}")
    if not P.strictly_positive:
        raise ValueError(f"P must be strictly positive, got {P}")
    if d < 2:
        raise ValueError("closed form needs a non-regular cone")
    if q == 0:
        assert p % d == 0, f"d={d} must divide p_l={p} when q_l = 0"
        if d != p:
            return []
        chain = canonical_subdivision(P, Q)
        sol = _solution(P, Q, d, l, chain.first_step, 1)
        assert sol is not None and sol.covector == chain.covectors[0]
        return [sol]
    out = []
    i = 1
    while d - i * p > 0:
        sol = _solution(P, Q, d, l, d - i * p, i)
        assert sol is not None
        out.append(sol)
        i += 1
    return out


def rho_from_extremes(solutions: Sequence[NsSolution], d: int) -> int:
    """Count of a per-coordinate solution set from its two extreme members.

    ``1 + |beta_max*alpha_min' - alpha_max*beta_min'| / d`` where the
    extremes are the members with largest and smallest beta.
    """
    if not solutions:
        raise ValueError("empty solution set")
    top = max(solutions, key=lambda s: s.beta)
    bot = min(solutions, key=lambda s: s.beta)
    num = abs(top.beta * bot.alpha - top.alpha * bot.beta)
    assert num % d == 0
    return 1 + num // d


@dataclass(frozen=True)
class ConeData:
    cone: Cone2
    chain: CanonicalChain
    rho: int
    ns: tuple[NsSolution, ...]

    @property
    def ns_covectors(self) -> tuple[Covector, ...]:
        return tuple(sorted({s.covector for s in self.ns}))


def rho_pq(P: Covector, Q: Covector, r: int = 0, cross_check: bool = True) -> tuple[int, list[Covector], CanonicalChain, list[NsSolution]]:
    """Distinct normally smooth interior vertices of Cone(P, Q).

    Ground truth is the scan of the canonical chain; with ``cross_check``
    the per-coordinate congruence solutions must reproduce it exactly.
    ``r`` is accepted for interface symmetry; the (r+1) weight is applied
    by the caller.
    """
    chain = canonical_subdivision(P, Q)
    scanned = vns_scan(chain)
    covs = sorted({s.covector for s in scanned})
    if cross_check and chain.d > 1:
        for l in range(3):
            mine = sorted((s.covector, s.alpha, s.beta) for s in scanned if s.coord == l)
            theirs = sorted((s.covector, s.alpha, s.beta) for s in vns_congruence(P, Q, l))
            if mine != theirs:
                raise AssertionError(
                    f"congruence/scan mismatch on Cone({P}, {Q}), coordinate {l}: {mine} vs {theirs}"
                )
    return len(covs), covs, chain, scanned


@dataclass(frozen=True)
class LineLead:
    """Leading exponents of lines through E(P) and the face function they must annihilate."""

    covector: Covector
    face_function: LatticePolynomial
    roots: dict[str, tuple[Fraction, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class LineIndexReport:
    polynomial: LatticePolynomial
    facets: tuple[Covector, ...]
    facet_ns: tuple[Covector, ...]
    cones: tuple[ConeData, ...]
    total: int
    line_leads: tuple[LineLead, ...]

    @property
    def cone_total(self) -> int:
        return sum((c.cone.r + 1) * c.rho for c in self.cones)

    def recompute_total(self) -> int:
        return len(self.facet_ns) + self.cone_total

    def ns_covectors(self) -> list[Covector]:
        out = set(self.facet_ns)
        for c in self.cones:
            out.update(c.ns_covectors)
        return sorted(out)


def line_index(f: LatticePolynomial, cross_check: bool = True, leads: bool = True) -> LineIndexReport:
    """Line index of the canonical toric resolution:

        #{facet normals with a coordinate 1}
          + sum over 2-cones of (r + 1) * #{normally smooth interior vertices}.
    """
    validate(f)
    facets = compact_facets(f)
    cones = dual_diagram2(f)
    data = []
    for cone in cones:
        rho, _, chain, scanned = rho_pq(cone.P, cone.Q, cone.r, cross_check=cross_check)
        data.append(ConeData(cone, chain, rho, tuple(scanned)))
    facet_normals = tuple(F.normal for F in facets)
    facet_ns = tuple(P for P in facet_normals if P.has_one)
    total = len(facet_ns) + sum((c.cone.r + 1) * c.rho for c in data)
    lead_list: list[LineLead] = []
    if leads:
        ns = set(facet_ns)
        for c in data:
            ns.update(c.ns_covectors)
        lead_list = [line_leading_data(f, P) for P in sorted(ns)]
    report = LineIndexReport(f, facet_normals, facet_ns, tuple(data), total, tuple(lead_list))
    assert report.recompute_total() == total
    return report


def count_ns_vertices(vertices: Sequence[Sequence[int]]) -> int:
    """Strictly positive interior vertices of a vertex list having a coordinate 1."""
    return sum(1 for v in vertices[1:-1] if min(v) > 0 and 1 in v)


# -- line leading data ---------------------------------------------------------


def _rational_roots(coeffs: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Nonzero rational roots of sum c_k t^k."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**k for k, c in coeffs.items())
    poly = sympy.Poly(expr, t, domain="QQ")
    if poly.degree() <= 0:
        return ()
    roots = sympy.roots(poly, filter="Q")
    out = sorted(Fraction(int(r.p), int(r.q)) for r in roots if r != 0)
    return tuple(out)


def line_leading_data(f: LatticePolynomial, P: Sequence[int]) -> LineLead:
    """Exponent triple P and face function f_P for a normally smooth covector.

    A line in L_E(P) starts as ``(a t^p1, b t^p2, c t^p3)`` with
    ``f_P(a, b, c) = 0``. For each variable, the other two are set to 1 and
    the exact nonzero rational roots of the remaining univariate polynomial
    are reported.
    """
    P = Covector(*P)
    if not P.has_one:
        raise ValueError(f"{P} has no coordinate equal to 1")
    face = face_of(f, P)
    fP = f.restrict(face.points)
    roots = {}
    for i, name in enumerate(VARS):
        coeffs: dict[int, Fraction] = {}
        for e, c in fP.terms:
            coeffs[e[i]] = coeffs.get(e[i], Fraction(0)) + c
        coeffs = {k: c for k, c in coeffs.items() if c}
        if len(coeffs) > 1:
            rs = _rational_roots(coeffs)
            if rs:
                roots[name] = rs
    return LineLead(P, fP, roots)


# -- obvious lines -------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str  # "axis", "facet", "section"
    covector: Covector
    detail: str


def obvious_lines(f: LatticePolynomial, cones: Iterable[Cone2] | None = None) -> list[Finding]:
    """Lines readable from the shape of f.

    * a coordinate axis inside X, with the first chain vertex Q1 of the cone
      whose non-compact generator has a zero in that axis' slot;
    * a compact facet whose normal has a coordinate 1;
    * a coordinate section f|_{z_k = 0} that is a homogeneous non-monomial
      polynomial: its facet has normal (p, p, r) (up to order) and the first
      vertex from E_k is (1, 1, 1 + r // p), or the facet itself when p = 1.
    """
    cones = list(dual_diagram2(f) if cones is None else cones)
    out: list[Finding] = []
    for i in sorted(axis_membership(f)):
        for c in cones:
            if c.Q[i] == 0 and not is_unit(c.Q):
                chain = canonical_subdivision(c.P, c.Q)
                q1 = chain.covectors[0] if len(chain) else c.P
                out.append(Finding("axis", q1, f"{VARS[i]}-axis lies in X; Cone({c.P}, {c.Q})"))
    for F in compact_facets(f):
        if F.normal.has_one:
            out.append(Finding("facet", F.normal, f"compact face with normal {F.normal}"))
    for k in range(3):
        section = [e for e in f.support if e[k] == 0]
        degrees = {sum(e) for e in section}
        if len(section) < 2 or len(degrees) != 1:
            continue
        ends = tuple(sorted((min(section), max(section))))
        for c in cones:
            if c.Q != tuple(1 if j == k else 0 for j in range(3)) or c.edge != ends:
                continue
            a, b = [j for j in range(3) if j != k]
            p, r = c.P[a], c.P[k]
            assert c.P[b] == p
            chain = canonical_subdivision(c.P, c.Q)
            if p == 1:
                cov = c.P
            else:
                s = [1, 1, 1]
                s[k] = 1 + r // p
                cov = Covector(*s)
                assert chain.covectors[0] == cov
            out.append(
                Finding("section", cov, f"{VARS[k]}=0 section is homogeneous of degree {degrees.pop()}")
            )
    return out
