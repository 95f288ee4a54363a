from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from lineindex.errors import SharpConditionError
from lineindex.lattice import (
    Covector,
    canonical_subdivision,
    continued_fraction,
    cross,
    det2,
    det3,
    evaluate_continued_fraction,
    first_multiplier,
    first_multiplier_by_scan,
    primitive,
    refine_chain,
    solve_congruences,
)


def positive_covectors(hi=60):
    return st.tuples(*[st.integers(1, hi)] * 3).filter(lambda v: gcd(*v) == 1).map(lambda v: Covector(*v))


def covectors(hi=60):
    return st.tuples(*[st.integers(0, hi)] * 3).filter(lambda v: gcd(*v) == 1).map(lambda v: Covector(*v))


def snf_index(P, Q):
    """Product of Smith invariants of the 3x2 matrix (P Q)."""
    S = smith_normal_form(Matrix([list(P), list(Q)]).T)
    return abs(S[0, 0] * S[1, 1])


def cf_value(entries):
    v = Fraction(entries[-1])
    for m in entries[-2::-1]:
        v = m - 1 / v
    return v


# -- covectors -------------------------------------------------------------


def test_covector_rejects_bad_triples():
    for bad in [(0, 0, 0), (-1, 2, 3), (2, 4, 6)]:
        with pytest.raises(ValueError):
            Covector(*bad)


def test_covector_evaluates_linearly():
    P = Covector(3, 2, 1)
    assert P((2, 0, 0)) == P.dot((0, 3, 0)) == P((1, 1, 1)) == 6
    assert P.has_one and P.ones() == (2,)
    assert repr(P) == "(3,2,1)"


@pytest.mark.parametrize("v, expected", [
    ((44, 30, 555), (44, 30, 555)),
    ((2, 2, 2), (1, 1, 1)),
    ((0, 6, 4), (0, 3, 2)),
])
def test_primitive(v, expected):
    assert primitive(v) == expected


@pytest.mark.parametrize("v", [(0, 0, 0), (1, -1, 0)])
def test_primitive_errors(v):
    with pytest.raises(ValueError):
        primitive(v)


# -- determinants ----------------------------------------------------------


@pytest.mark.parametrize("P, Q, d", [
    ((44, 30, 555), (30, 44, 555), 518),
    ((1, 2, 3), (1, 2, 3), 0),
    ((5, 1, 2), (0, 3, 1), 5),
])
def test_det2_examples(P, Q, d):
    assert det2(P, Q) == d


@given(covectors(), covectors())
def test_det2_matches_smith_form(P, Q):
    assert det2(P, Q) == snf_index(P, Q)


@given(st.tuples(*[st.integers(-9, 9)] * 3), st.tuples(*[st.integers(-9, 9)] * 3), st.tuples(*[st.integers(-9, 9)] * 3))
def test_det3_is_triple_product(a, b, c):
    assert det3(a, b, c) == sum(x * y for x, y in zip(a, cross(b, c)))
    assert det3(a, b, c) == int(Matrix([a, b, c]).det())


# -- congruences -----------------------------------------------------------


@given(st.lists(st.tuples(st.integers(-40, 40), st.integers(-40, 40), st.integers(1, 30)), min_size=1, max_size=3))
def test_solve_congruences_against_scan(system):
    from math import lcm

    L = 1
    for _, _, m in system:
        L = lcm(L, m)
    hits = [x for x in range(L) if all((a * x - b) % m == 0 for a, b, m in system)]
    sol = solve_congruences(system)
    if not hits:
        assert sol is None
    else:
        x0, M = sol
        assert [x for x in range(L) if (x - x0) % M == 0] == hits


# -- continued fractions ---------------------------------------------------


@pytest.mark.parametrize("num, den, expected", [
    (518, 223, [3, 2, 2, 12, 2, 2, 3]),
    (7, 1, [7]),
    (5, 2, [3, 2]),
])
def test_continued_fraction_examples(num, den, expected):
    assert continued_fraction(num, den) == expected
    assert cf_value(expected) == Fraction(num, den)


@pytest.mark.parametrize("num, den", [(3, 3), (2, 5), (6, 4), (5, 0)])
def test_continued_fraction_rejects(num, den):
    with pytest.raises(ValueError):
        continued_fraction(num, den)


def test_continued_fraction_round_trip_500_pairs():
    import random

    rng = random.Random(7)
    done = 0
    while done < 500:
        num = rng.randint(2, 10**6)
        den = rng.randint(1, num - 1)
        if gcd(num, den) != 1:
            continue
        cf = continued_fraction(num, den)
        assert min(cf) >= 2
        assert cf_value(cf) == evaluate_continued_fraction(cf) == Fraction(num, den)
        done += 1


# -- canonical subdivision -------------------------------------------------


def test_two_facet_chain_first_vertex_and_cf():
    P, Q = Covector(44, 30, 555), Covector(30, 44, 555)
    ch = canonical_subdivision(P, Q)
    assert ch.d == 518
    assert ch.first_step == 223
    assert ch.covectors[0] == (13, 19, 240)
    assert list(ch.cf_entries) == [3, 2, 2, 12, 2, 2, 3]


def test_axis_cone_chain():
    ch = canonical_subdivision(Covector(5, 1, 2), Covector(0, 3, 1))
    assert ch.covectors == ((1, 2, 1), (2, 1, 1))
    assert list(ch.reversed().cf_entries) == [3, 2]
    assert ch.reversed().covectors == ((2, 1, 1), (1, 2, 1))


def test_regular_cone_has_empty_chain():
    ch = canonical_subdivision(Covector(1, 1, 2), Covector(0, 1, 1))
    assert ch.d == 1 and len(ch) == 0 and ch.cf_entries == ()


def test_degenerate_cone_rejected():
    with pytest.raises(ValueError):
        canonical_subdivision(Covector(1, 2, 3), Covector(1, 2, 3))


def recurrence_chain(P, Q):
    """Independent rebuild: Q1 by literal scan, then Q_{i+1} = m_i Q_i - Q_{i-1}."""
    d = det2(P, Q)
    t = first_multiplier_by_scan(P, Q, d)
    q1 = tuple((P[j] + t * Q[j]) // d for j in range(3))
    prev, cur, out = tuple(Q), q1, []
    for m in continued_fraction(d, t):
        out.append(cur)
        prev, cur = cur, tuple(m * cur[j] - prev[j] for j in range(3))
    assert cur == tuple(P)
    return out


@settings(max_examples=150, deadline=None)
@given(positive_covectors(), covectors())
def test_chain_invariants(P, Q):
    d = det2(P, Q)
    assume(d >= 1 and P != Q)
    ch = canonical_subdivision(P, Q)
    verts = ch.vertices
    for a, b in zip(verts, verts[1:]):
        assert det2(a, b) == 1
    for i, m in enumerate(ch.cf_entries, start=1):
        assert m >= 2
        assert all(verts[i - 1][j] + verts[i + 1][j] == m * verts[i][j] for j in range(3))
    alphas = [v.alpha for v in ch.interior]
    betas = [v.beta for v in ch.interior]
    assert alphas == sorted(set(alphas), reverse=True)
    assert betas == sorted(set(betas))
    for v in ch.interior:
        assert all(d * v.covector[j] == v.beta * P[j] + v.alpha * Q[j] for j in range(3))
        assert v.covector.strictly_positive
    if d > 1:
        assert [tuple(c) for c in ch.covectors] == recurrence_chain(P, Q)
        assert first_multiplier(P, Q, d) == first_multiplier_by_scan(P, Q, d)


@settings(max_examples=80, deadline=None)
@given(positive_covectors(), positive_covectors())
def test_chain_symmetry(P, Q):
    assume(P != Q)
    a, b = canonical_subdivision(P, Q), canonical_subdivision(Q, P)
    assert b.covectors == tuple(reversed(a.covectors))
    assert b.cf_entries == tuple(reversed(a.cf_entries))
    assert a.reversed() == b


# -- refinements -----------------------------------------------------------


def test_refine_inserts_sum():
    verts = [(0, 3, 1), (1, 2, 1), (2, 1, 1), (5, 1, 2)]
    out = refine_chain(verts, 1)
    assert out[2] == (3, 3, 2)
    assert det2(out[1], out[2]) == det2(out[2], out[3]) == 1


def test_refine_refuses_sharp_slot():
    with pytest.raises(SharpConditionError):
        refine_chain([(0, 3, 1), (1, 2, 1), (2, 1, 1), (5, 1, 2)], 0)
    with pytest.raises(IndexError):
        refine_chain([(0, 3, 1), (1, 2, 1)], 1)


def test_refine_allowed_next_to_positive_endpoint():
    out = refine_chain([(1, 1, 1), (2, 1, 1)], 0)
    assert out == [(1, 1, 1), (3, 2, 2), (2, 1, 1)]
