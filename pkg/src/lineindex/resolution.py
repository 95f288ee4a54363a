"""Resolution-graph bookkeeping for the canonical toric resolution:
rationality of facet divisors, arm counts, a conservative minimality
verdict, and DOT export.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import ValidationError
from .lattice import Covector, det3
from .linedex import LineIndexReport
from .newton import Cone2, Face, LatticePolynomial, compact_facets

NOT_COMPUTED = "E(P)² required (self-intersection of facet divisors is out of scope)"


def is_rational(f: LatticePolynomial, facet: Face) -> tuple[bool, int]:
    """Whether E(P) is rational, with its genus.

    LHS = -6 Vol(cone over the face)/d(P; f) + sum over boundary edges of
    (interior lattice points + 1); E(P) is rational iff LHS == 2, and the
    genus is (2 - LHS)/2.
    """
    if facet.dim != 2:
        raise ValueError("rationality is defined for 2-dimensional faces")
    verts = list(facet.vertices)
    k = verts.index(min(verts))
    verts = verts[k:] + verts[:k]
    six_vol = sum(abs(det3(verts[0], verts[i], verts[i + 1])) for i in range(1, len(verts) - 1))
    boundary = sum(
        gcd(*(abs(a[j] - b[j]) for j in range(3))) for a, b in facet.edges()
    )
    if six_vol % facet.value:
        raise ValidationError(f"cone volume over face {facet.normal} is not a multiple of d(P; f)")
    lhs = -six_vol // facet.value + boundary
    g, rem = divmod(2 - lhs, 2)
    if rem or g < 0:
        raise ValidationError(f"non-integral or negative genus at face {facet.normal}: LHS={lhs}")
    return g == 0, g


def arms(facet: Face, cones: Sequence[Cone2]) -> int:
    """Sum of r + 1 over the non-regular cones incident to the facet."""
    return sum(c.r + 1 for c in cones if facet.normal in (c.P, c.Q) and c.d > 1)


def neighbours(facet: Face, cones: Sequence[Cone2]) -> int:
    """Exceptional curves meeting E(P): arms plus direct contacts with other
    compact facet divisors across regular cones."""
    n = arms(facet, cones)
    n += sum(
        c.r + 1 for c in cones if facet.normal in (c.P, c.Q) and c.d == 1 and c.facet_facet
    )
    return n


@dataclass(frozen=True)
class FacetSummary:
    normal: Covector
    rational: bool
    genus: int
    arms: int
    neighbours: int
    ns: bool


@dataclass(frozen=True)
class ChainDivisor:
    covector: Covector
    cone: tuple[Covector, Covector]
    components: int
    self_intersection: int
    ns: bool


@dataclass(frozen=True)
class ResolutionSummary:
    facets: tuple[FacetSummary, ...]
    chains: tuple[ChainDivisor, ...]
    minimal: bool
    reason: str

    @property
    def verdict(self) -> str:
        return "Minimal" if self.minimal else "Indeterminate"


def minimality_verdict(facets: Sequence[FacetSummary]) -> tuple[bool, str]:
    """Minimal when every facet divisor is irrational or has >= 3 arms.

    Chain divisors have self-intersection <= -2 and are never blown down,
    so only a rational facet divisor with few arms can spoil minimality;
    deciding that needs E(P)^2, which is not computed.
    """
    suspects = [F for F in facets if F.rational and F.arms < 3]
    if not suspects:
        return True, "every facet divisor is irrational or has at least three arms"
    names = ", ".join(repr(F.normal) for F in suspects)
    return False, f"{NOT_COMPUTED}; rational with < 3 arms: {names}"


def summarize(report: LineIndexReport) -> ResolutionSummary:
    f = report.polynomial
    cones = [c.cone for c in report.cones]
    facets = []
    for F in compact_facets(f):
        rational, g = is_rational(f, F)
        facets.append(
            FacetSummary(F.normal, rational, g, arms(F, cones), neighbours(F, cones), F.normal.has_one)
        )
    chains = []
    for c in report.cones:
        for v, m in zip(c.chain.interior, c.chain.cf_entries):
            assert m >= 2
            chains.append(
                ChainDivisor(v.covector, (c.cone.P, c.cone.Q), c.cone.r + 1, -m, v.covector.has_one)
            )
    minimal, reason = minimality_verdict(facets)
    return ResolutionSummary(tuple(facets), tuple(chains), minimal, reason)


def _node(cov: Sequence[int], i: int) -> str:
    return f"E_{cov[0]}_{cov[1]}_{cov[2]}_c{i}"


def export_graph(report: LineIndexReport, summary: ResolutionSummary) -> str:
    """Resolution graph in DOT: one node per divisor component, undirected edges."""
    lines = ["graph resolution {"]
    facet_info = {F.normal: F for F in summary.facets}
    for P in sorted(facet_info):
        F = facet_info[P]
        lines.append(
            f'  {_node(P, 0)} [cov="{P!r}", ns={str(F.ns).lower()}, '
            f"rational={str(F.rational).lower()}];"
        )
    for ch in summary.chains:
        for i in range(ch.components):
            lines.append(
                f'  {_node(ch.covector, i)} [cov="{ch.covector!r}", selfint={ch.self_intersection}, '
                f"ns={str(ch.ns).lower()}, rational=true];"
            )
    edges = []
    for c in report.cones:
        P, Q = c.cone.P, c.cone.Q
        copies = c.cone.r + 1
        path = list(reversed(c.chain.covectors))  # from P towards Q
        for i in range(copies):
            prev = _node(P, 0)
            for cov in path:
                edges.append((prev, _node(cov, i)))
                prev = _node(cov, i)
            if Q in facet_info:
                edges.append((prev, _node(Q, 0)))
    for a, b in edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
