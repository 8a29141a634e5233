import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acmlab.acm import bundle_modules, pfaffian_construction, split_factorization
from acmlab.ring import Field, Ring

FP = Field(32003)


def random_form(ring, degree, rng, lo=1, hi=100):
    p = ring.zero()
    for k in ring.monomial_keys(degree):
        p = p + ring.monomial(ring.key_exps(k)).scale(ring.field(rng.randrange(lo, hi)))
    return p


@pytest.fixture(scope="session")
def r6():
    return Ring(6, FP)


@pytest.fixture(scope="session")
def quadric(r6):
    x = r6.gens()
    mf, ctx = pfaffian_construction(x[0], x[2], x[4], x[1], x[3], x[5])
    return bundle_modules(mf)


@pytest.fixture(scope="session")
def cubic(r6):
    x = r6.gens()
    mf, ctx = pfaffian_construction(x[0], x[1], x[2], x[3] ** 2, x[4] ** 2, x[5] ** 2)
    return bundle_modules(mf)


@pytest.fixture(scope="session")
def cubic_p4():
    ring = Ring(5, FP)
    x = ring.gens()
    rng = random.Random(7)
    a, b, c = (random_form(ring, 2, rng) for _ in range(3))
    mf, ctx = pfaffian_construction(x[0], x[1], x[2], a, b, c)
    return bundle_modules(mf)


@pytest.fixture(scope="session")
def split_quadric(r6):
    x = r6.gens()
    F = x[0] * x[1] + x[2] * x[3] + x[4] * x[5]
    mf, ctx = split_factorization(F, (0, 1))
    return bundle_modules(mf)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
