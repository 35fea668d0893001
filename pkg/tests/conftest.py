import random
import sys
from pathlib import Path

import pytest

from algdiag.ff import Field
from algdiag.poly import MultiPoly, derivative_y
from algdiag.series import Branch

sys.path.insert(0, str(Path(__file__).parent))

F4 = Field(2, 2, [1, 1, 1])
F8 = Field(2, 3, [1, 1, 0, 1])
F9 = Field(3, 2, [1, 0, 1])


def pascal_branch(p: int) -> Branch:
    """E = (1 - t1 - t2) y - 1; its branch is 1/(1 - t1 - t2)."""
    F = Field(p)
    E = MultiPoly.from_coeffs(F, 2, {(0, 0, 1): 1, (1, 0, 1): -1, (0, 1, 1): -1, (0, 0, 0): -1})
    return Branch(E, F.elem(1))


def catalan_branch(p: int) -> Branch:
    """E = t1 t2 y^2 - y + 1; the diagonal of its branch is the Catalan series."""
    F = Field(p)
    E = MultiPoly.from_coeffs(F, 2, {(1, 1, 2): 1, (0, 0, 1): -1, (0, 0, 0): 1})
    return Branch(E, F.elem(1))


def random_branch(rng: random.Random, F: Field, n: int, d: int, h: int, terms: int = 6) -> Branch:
    """A random E with y-degree <= d, total t-degree <= h and a simple root y0
    of E(0, y), made so by adjusting the constant term."""
    while True:
        acc = {}
        for _ in range(terms):
            t = [0] * n
            for _ in range(rng.randint(0, h)):
                t[rng.randrange(n)] += 1
            acc[tuple(t) + (rng.randint(0, d),)] = rng.randrange(F.q)
        y0 = rng.randrange(F.q)
        # force a linear y-term so separability is likely
        acc[(0,) * n + (1,)] = rng.randrange(1, F.q)
        E = MultiPoly(F, n, {k: v for k, v in acc.items() if v})
        c = E.eval_at_origin(y0)
        zero = (0,) * (n + 1)
        E = E - MultiPoly(F, n, {zero: c})
        if E.y_degree() < 1 or derivative_y(E).eval_at_origin(y0) == 0:
            continue
        return Branch(E, F.elem(y0))


@pytest.fixture
def rng():
    return random.Random(20240611)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
