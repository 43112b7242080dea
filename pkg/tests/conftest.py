import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from septool.series import Series

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))


@pytest.fixture(scope="session")
def golden():
    return json.loads((HERE / "golden" / "oracle_values.json").read_text())


def smap(s: Series) -> dict:
    """Coefficients in the oracle format ``{"i,j": "p/q"}``."""
    return {",".join(map(str, e)): str(c) for e, c in s.items()}


def rand_q(rng: random.Random, big=5):
    return Fraction(rng.randint(-big, big), rng.randint(1, 3))


def rand_series(rng: random.Random, vars=("x", "y"), deg=4, density=0.5, trunc=None,
                unit=False):
    n = len(vars)
    coeffs = {}
    for _ in range(int((deg + 1) ** n * density)):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        if sum(e) <= deg:
            coeffs[e] = rand_q(rng)
    if unit:
        coeffs[(0,) * n] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2))
    return Series(vars, coeffs, trunc)


def rand_flat(rng: random.Random, deg=6, var="x"):
    """Random exact ``a`` with ``a(0) = a'(0) = 0`` and ``a`` not identically zero."""
    cs = [0, 0] + [rand_q(rng, 3) for _ in range(deg - 1)]
    if all(c == 0 for c in cs):
        cs[2] = Fraction(1)
    return Series.from_list(cs, var)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
