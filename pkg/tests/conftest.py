"""Shared oracles and random matrix builders.

The oracles here deliberately avoid the package's own elimination code.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import pytest

from treetp.exactmat import ExactMatrix
from treetp.tree import LabelledTree


def cofactor_det(rows) -> Fraction:
    """Laplace expansion along the first row."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(sub)
        total += -term if j % 2 else term
    return total


def leibniz_det(rows) -> Fraction:
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        prod = Fraction(1)
        for i, p in enumerate(perm):
            prod *= rows[i][p]
        total += -prod if inv % 2 else prod
    return total


def gauss_jordan_inverse(rows):
    """Exact inverse by Gauss-Jordan over Fractions; None when singular."""
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [r[n:] for r in aug]


def random_int_matrix(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> ExactMatrix:
    return ExactMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def random_rational_matrix(rng: random.Random, n: int) -> ExactMatrix:
    return ExactMatrix([[Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(n)] for _ in range(n)])


SPIDER6 = [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6)]


@pytest.fixture
def rng():
    return random.Random(20260101)


@pytest.fixture
def pascal3():
    return ExactMatrix([[1, 1, 1], [1, 2, 3], [1, 3, 6]])


@pytest.fixture
def spider6():
    return LabelledTree.from_edges(SPIDER6)


_VERDICT_LINES: list[str] = []


@pytest.fixture
def verdict_line():
    """Record a one-line PASS/FAIL summary, repeated at the end of the run."""

    def emit(name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
        _VERDICT_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _VERDICT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICT_LINES:
            terminalreporter.write_line(line)
