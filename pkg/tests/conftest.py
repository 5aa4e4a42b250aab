import random
import sys
from fractions import Fraction

import pytest

from bitflip.bitspace import BitString
from bitflip.maxsat import Clause, ClauseSet
from bitflip.walsh import FunctionTable


def random_table(n, rng, lo=-5, hi=5, distinct=None):
    """Random integer-valued table; ``distinct`` caps the number of values."""
    if distinct is None:
        vals = [rng.randint(lo, hi) for _ in range(1 << n)]
    else:
        pool = rng.sample(range(lo, hi + 1), distinct)
        vals = [rng.choice(pool) for _ in range(1 << n)]
    return FunctionTable.from_values(n, [Fraction(v) for v in vals])


def random_cnf(n, n_clauses, rng, width=3):
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n + 1), width)
        clauses.append(Clause.from_literals([v * rng.choice((1, -1)) for v in vs], n))
    return ClauseSet(n, tuple(clauses))


def random_bits(n, rng):
    return BitString(rng.randrange(1 << n), n)


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
