import random
from math import gcd

import pytest

from lineindex.errors import SharpConditionError
from lineindex.lattice import Covector, det2, refine_chain
from lineindex.linedex import count_ns_vertices

ACCEPTANCE = {}


def random_cones(n=200, seed=20240917, pmax=50, dmin=2, dmax=5000):
    """Seeded cones: strictly positive primitive P, non-negative primitive Q."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        P = [rng.randint(1, pmax) for _ in range(3)]
        Q = [rng.randint(0, pmax) for _ in range(3)]
        roll = rng.random()
        if roll < 0.25:
            Q[rng.randrange(3)] = 0
        elif roll < 0.35:
            Q = [0, 0, 0]
            Q[rng.randrange(3)] = 1
        elif roll < 0.5:
            Q[rng.randrange(3)] = 1
        if gcd(*P) != 1 or gcd(*Q) != 1:
            continue
        P, Q = Covector(*P), Covector(*Q)
        if P == Q or not dmin <= det2(P, Q) <= dmax:
            continue
        out.append((P, Q))
    return out


def refined_total(rep, rng, steps):
    """Total after `steps` random sharp-respecting insertions per cone."""
    total = len(rep.facet_ns)
    for cd in rep.cones:
        verts = list(cd.chain.vertices)
        for _ in range(steps):
            if len(verts) == 2 and not verts[0].strictly_positive:
                break  # the only slot is the forbidden one
            while True:
                pos = rng.randrange(len(verts) - 1)
                try:
                    verts = refine_chain(verts, pos)
                    break
                except SharpConditionError:
                    continue
        total += (cd.cone.r + 1) * count_ns_vertices(verts)
    return total


@pytest.fixture(scope="session")
def cones200():
    return random_cones()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        ACCEPTANCE[label] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"criterion {label}: {ACCEPTANCE[label]}")
