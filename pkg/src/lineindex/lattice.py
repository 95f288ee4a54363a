"""Exact integer primitives: covectors, 2-cone determinants, continued
fractions and the canonical regular subdivision of a 2-cone.

Everything here is plain ``int`` arithmetic; nothing is ever rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import SharpConditionError

Triple = Sequence[int]


class Covector(tuple):
    """A primitive non-negative integer triple ``(p1, p2, p3)``.

    Evaluates linearly on exponent vectors: ``P(nu) == P.dot(nu)``.
    """

    __slots__ = ()

    def __new__(cls, p1: int, p2: int, p3: int) -> "Covector":
        v = (int(p1), int(p2), int(p3))
        if min(v) < 0:
            raise ValueError(f"covector has a negative coordinate: {v}")
        if v == (0, 0, 0):
            raise ValueError("covector is zero")
        if gcd(*v) != 1:
            raise ValueError(f"covector is not primitive: {v}")
        return tuple.__new__(cls, v)

    @property
    def p1(self) -> int:
        return self[0]

    @property
    def p2(self) -> int:
        return self[1]

    @property
    def p3(self) -> int:
        return self[2]

    def dot(self, nu: Triple) -> int:
        return self[0] * nu[0] + self[1] * nu[1] + self[2] * nu[2]

    __call__ = dot

    @property
    def strictly_positive(self) -> bool:
        return min(self) > 0

    @property
    def has_one(self) -> bool:
        """True when some coordinate equals 1 (the normally smooth test)."""
        return 1 in self

    def ones(self) -> tuple[int, ...]:
        """Indices (0-based) of the coordinates equal to 1."""
        return tuple(i for i, x in enumerate(self) if x == 1)

    def __repr__(self) -> str:
        return f"({self[0]},{self[1]},{self[2]})"


E1 = Covector(1, 0, 0)
E2 = Covector(0, 1, 0)
E3 = Covector(0, 0, 1)
UNIT = (E1, E2, E3)


def primitive(v: Triple) -> Covector:
    """Divide a non-negative, nonzero integer triple by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    if len(v) != 3:
        raise ValueError(f"expected a triple, got {v!r}")
    if min(v) < 0:
        raise ValueError(f"negative coordinate in {v}")
    g = gcd(*v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return Covector(*(x // g for x in v))


def minors(P: Triple, Q: Triple) -> tuple[int, int, int]:
    """The three 2x2 minors of the 3x2 matrix (P, Q)."""
    return (
        P[0] * Q[1] - P[1] * Q[0],
        P[0] * Q[2] - P[2] * Q[0],
        P[1] * Q[2] - P[2] * Q[1],
    )


def det2(P: Triple, Q: Triple) -> int:
    """Index of the lattice cone spanned by P and Q: gcd of |minors|."""
    return gcd(*minors(P, Q))


def cross(u: Triple, v: Triple) -> tuple[int, int, int]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(a: Triple, b: Triple, c: Triple) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


# -- modular helpers -----------------------------------------------------------


def solve_congruences(system: Iterable[tuple[int, int, int]]) -> tuple[int, int] | None:
    """Solve ``a*x = b (mod m)`` simultaneously for every ``(a, b, m)``.

    Returns ``(x0, M)`` with the full solution set ``x0 + M*Z`` and
    ``0 <= x0 < M``, or None if the system is inconsistent.
    """
    x0, M = 0, 1
    for a, b, m in system:
        if m <= 0:
            raise ValueError("modulus must be positive")
        g = gcd(a, m)
        if b % g:
            return None
        m1 = m // g
        r = (b // g) * pow(a // g, -1, m1) % m1 if m1 > 1 else 0
        # merge x = x0 (mod M) with x = r (mod m1)
        h = gcd(M, m1)
        if (r - x0) % h:
            return None
        step = (r - x0) // h * pow(M // h, -1, m1 // h) % (m1 // h) if m1 // h > 1 else 0
        x0 = x0 + M * step
        M = M // h * m1
        x0 %= M
    return x0, M


# -- continued fractions -------------------------------------------------------


def continued_fraction(num: int, den: int) -> list[int]:
    """Negative-regular expansion ``num/den = m1 - 1/(m2 - 1/(...))``, all ``mi >= 2``."""
    if not 0 < den < num:
        raise ValueError(f"need 0 < den < num, got {num}/{den}")
    if gcd(num, den) != 1:
        raise ValueError(f"{num}/{den} is not in lowest terms")
    out = []
    while den:
        m = -(-num // den)
        out.append(m)
        num, den = den, m * den - num
    return out


def evaluate_continued_fraction(entries: Sequence[int]) -> Fraction:
    if not entries:
        raise ValueError("empty continued fraction")
    value = Fraction(entries[-1])
    for m in reversed(entries[:-1]):
        value = m - 1 / value
    return value


# -- canonical subdivision -----------------------------------------------------


class ChainVertex(NamedTuple):
    """Interior chain covector with ``covector = (beta*P + alpha*Q)/d``."""

    covector: Covector
    alpha: int
    beta: int


@dataclass(frozen=True)
class CanonicalChain:
    """Canonical regular subdivision of Cone(P, Q), stored from Q towards P."""

    P: Covector
    Q: Covector
    d: int
    interior: tuple[ChainVertex, ...]
    cf_entries: tuple[int, ...]

    @property
    def covectors(self) -> tuple[Covector, ...]:
        return tuple(v.covector for v in self.interior)

    @property
    def vertices(self) -> tuple[Covector, ...]:
        """All vertices Q = Q_0, Q_1, ..., Q_k, Q_{k+1} = P."""
        return (self.Q, *self.covectors, self.P)

    @property
    def first_step(self) -> int | None:
        """The multiplier d1 with Q1 = (P + d1*Q)/d, or None for a regular cone."""
        return self.interior[0].alpha if self.interior else None

    def __len__(self) -> int:
        return len(self.interior)

    def reversed(self) -> "CanonicalChain":
        """The same subdivision read from P; (alpha, beta) swap roles."""
        return CanonicalChain(
            P=self.Q,
            Q=self.P,
            d=self.d,
            interior=tuple(
                ChainVertex(v.covector, v.beta, v.alpha) for v in reversed(self.interior)
            ),
            cf_entries=tuple(reversed(self.cf_entries)),
        )


def _exact_div(v: Triple, d: int) -> Covector | None:
    if any(x % d for x in v):
        return None
    return Covector(*(x // d for x in v))


def first_multiplier(P: Triple, Q: Triple, d: int) -> int:
    """The unique t in [1, d) making (P + t*Q)/d integral."""
    sol = solve_congruences((Q[j], -P[j], d) for j in range(3))
    if sol is None:
        raise AssertionError(f"no integral first step for Cone({P}, {Q}), d={d}")
    t, M = sol
    # uniqueness mod d is what makes the subdivision canonical
    assert M == d and 0 < t < d, (P, Q, d, t, M)
    return t


def first_multiplier_by_scan(P: Triple, Q: Triple, d: int) -> int:
    """Literal scan over t = 1..d-1; kept as an oracle for first_multiplier."""
    hits = [t for t in range(1, d) if all((P[j] + t * Q[j]) % d == 0 for j in range(3))]
    if len(hits) != 1:
        raise AssertionError(f"expected a unique multiplier, found {hits}")
    return hits[0]


def canonical_subdivision(P: Covector, Q: Covector) -> CanonicalChain:
    """Canonical regular subdivision of Cone(P, Q), generated from Q.

    Q1 = (P + d1*Q)/d, then the same step on Cone(P, Q1) with
    det(P, Q1) = d1, and so on until the determinant is 1. The multiplier
    for Cone(P, Q_i) is (-alpha_{i-1}) mod alpha_i, where alpha_i =
    det(P, Q_i); each step is checked for integrality.
    """
    P, Q = Covector(*P), Covector(*Q)
    d = det2(P, Q)
    if d == 0:
        raise ValueError(f"degenerate cone: {P} and {Q} are parallel")
    if d == 1:
        return CanonicalChain(P, Q, 1, (), ())

    alphas = [d, first_multiplier(P, Q, d)]
    betas = [0, 1]
    covs = [Q]
    while True:
        a_prev, a_cur = alphas[-2], alphas[-1]
        nxt = _exact_div(tuple(P[j] + a_cur * covs[-1][j] for j in range(3)), a_prev)
        if nxt is None:
            raise AssertionError(f"non-integral subdivision step in Cone({P}, {Q})")
        covs.append(nxt)
        if a_cur == 1:
            break
        b_next, rem = divmod(d + ((-a_prev) % a_cur) * betas[-1], a_cur)
        assert rem == 0
        alphas.append((-a_prev) % a_cur)
        betas.append(b_next)

    # covs = [Q, Q1, ..., Qk]; alphas/betas indexed alike
    interior = []
    for i in range(1, len(covs)):
        c, a, b = covs[i], alphas[i], betas[i]
        assert all(d * c[j] == b * P[j] + a * Q[j] for j in range(3))
        interior.append(ChainVertex(c, a, b))
    alphas.append(0)
    cf = tuple((alphas[i - 1] + alphas[i + 1]) // alphas[i] for i in range(1, len(alphas) - 1))
    assert list(cf) == continued_fraction(d, alphas[1])
    return CanonicalChain(P, Q, d, tuple(interior), cf)


def refine_chain(vertices: Sequence[Triple], position: int) -> list[Covector]:
    """Insert ``S_pos + S_{pos+1}`` between positions ``pos`` and ``pos + 1``.

    ``vertices[0]`` is the endpoint Q. Inserting next to a Q that is not
    strictly positive would create a vertex inside Cone(Q, Q1) and is refused.
    """
    verts = [Covector(*v) for v in vertices]
    if not 0 <= position < len(verts) - 1:
        raise IndexError(f"position {position} outside 0..{len(verts) - 2}")
    if position == 0 and not verts[0].strictly_positive:
        raise SharpConditionError(
            f"inserting next to {verts[0]} would place a vertex inside Cone(Q, Q1)"
        )
    a, b = verts[position], verts[position + 1]
    s = Covector(*(x + y for x, y in zip(a, b)))
    return verts[: position + 1] + [s] + verts[position + 1 :]
