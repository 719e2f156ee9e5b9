"""Exact rational matrices with order-sensitive minors.

Indices in the public API are 1-based, matching the usual A[alpha; beta]
notation.  Row and column index lists are *ordered*: ``minor(M, (2, 1),
(1, 2))`` is the determinant of the submatrix whose first row is row 2.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Rational = Fraction


class IndexList(tuple):
    """Ordered list of distinct 1-based indices.

    ``drop_first``, ``drop_last`` and ``drop_both`` give the primed variants
    used by Sylvester's identity ('a, a' and 'a').
    """

    def __new__(cls, indices: Iterable[int] = ()):
        items = tuple(int(i) for i in indices)
        if len(set(items)) != len(items):
            raise ValueError(f"duplicate index in {items}")
        return super().__new__(cls, items)

    def drop_first(self) -> IndexList:
        return IndexList(self[1:])

    def drop_last(self) -> IndexList:
        return IndexList(self[:-1])

    def drop_both(self) -> IndexList:
        return IndexList(self[1:-1])

    def without(self, *removed: int) -> IndexList:
        gone = set(removed)
        return IndexList(i for i in self if i not in gone)

    def __repr__(self) -> str:
        return f"IndexList({list(self)})"


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class ExactMatrix:
    """Immutable square matrix of Fractions."""

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_to_fraction(x) for x in row) for row in rows)
        n = len(data)
        if n == 0:
            raise ValueError("matrix must have at least one row")
        if any(len(r) != n for r in data):
            raise ValueError("matrix must be square")
        self._rows = data

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        """1-based entry access: ``M[i, j]``."""
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"entry ({i}, {j}) outside 1..{self.n}")
        return self._rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"ExactMatrix([{body}])"

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other._rows))
        return ExactMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows])

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def scale(self, c) -> ExactMatrix:
        c = _to_fraction(c)
        return ExactMatrix([[c * a for a in r] for r in self._rows])

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(zip(*self._rows))

    def replace(self, i: int, j: int, value) -> ExactMatrix:
        """Copy with entry (i, j) (1-based) set to ``value``."""
        rows = [list(r) for r in self._rows]
        rows[i - 1][j - 1] = _to_fraction(value)
        return ExactMatrix(rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        """Materialize A[rows; cols] in the given order."""
        r, c = _check_lists(self.n, rows, cols)
        if not r:
            raise ValueError("empty submatrix")
        return ExactMatrix([[self._rows[i - 1][j - 1] for j in c] for i in r])

    def principal(self, indices: Sequence[int]) -> ExactMatrix:
        return self.submatrix(indices, indices)

    def delete(self, k: int) -> ExactMatrix:
        """Principal submatrix with row and column k removed."""
        keep = [i for i in range(1, self.n + 1) if i != k]
        return self.principal(keep)

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    @cached_property
    def det(self) -> Fraction:
        return _det(self._rows)

    @cached_property
    def adjoint(self) -> ExactMatrix:
        return _adjoint(self)


def _check_lists(n: int, rows: Sequence[int], cols: Sequence[int]) -> tuple[IndexList, IndexList]:
    r, c = IndexList(rows), IndexList(cols)
    if len(r) != len(c):
        raise ValueError(f"row list has {len(r)} indices, column list has {len(c)}")
    for i in (*r, *c):
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside 1..{n}")
    return r, c


def bareiss_det_int(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination on an integer matrix (with row pivoting)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for p in range(k + 1, n):
                if m[p][k] != 0:
                    m[k], m[p] = m[p], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                ri[j] = (pivot * ri[j] - a * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    if not rows:
        return Fraction(1)
    scaled = []
    denom = 1
    for r in rows:
        lcm = math.lcm(*(x.denominator for x in r))
        denom *= lcm
        scaled.append([x.numerator * (lcm // x.denominator) for x in r])
    return Fraction(bareiss_det_int(scaled), denom)


def det(M: ExactMatrix) -> Fraction:
    return M.det


def minor(M: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """det A[rows; cols] with rows and columns taken in the order given.

    The empty minor is 1.
    """
    r, c = _check_lists(M.n, rows, cols)
    data = M.rows
    return _det([[data[i - 1][j - 1] for j in c] for i in r])


def _adjoint(M: ExactMatrix) -> ExactMatrix:
    n = M.n
    if n < 2:
        raise ValueError("adjoint requires n >= 2")
    data = M.rows
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # entry (i, j) is the cofactor of position (j, i)
            sub = [[data[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            v = _det(sub)
            out[i][j] = -v if (i + j) % 2 else v
    return ExactMatrix(out)


def adjoint(M: ExactMatrix) -> ExactMatrix:
    return M.adjoint


def sylvester_residual(M: ExactMatrix, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """Denominator-free residual of Sylvester's identity on A[alpha; beta].

    Returns  A[a;b] A['a';'b'] - (A[a';b'] A['a;'b] - A[a';'b] A['a;b'])
    which is zero for every matrix.
    """
    a, b = _check_lists(M.n, alpha, beta)
    if len(a) < 2:
        raise ValueError("Sylvester's identity needs index lists of length >= 2")
    lhs = minor(M, a, b) * minor(M, a.drop_both(), b.drop_both())
    rhs = (minor(M, a.drop_last(), b.drop_last()) * minor(M, a.drop_first(), b.drop_first())
           - minor(M, a.drop_last(), b.drop_first()) * minor(M, a.drop_first(), b.drop_last()))
    return lhs - rhs


def format_matrix(M: ExactMatrix) -> str:
    lines = [str(M.n)]
    lines += [" ".join(str(x) for x in r) for r in M.rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> ExactMatrix:
    """Read the matrix text format: ``n`` then n rows of n rationals.

    Entries may be integers, ``p/q`` or decimal literals; decimals are
    converted exactly (``0.25`` -> 1/4).  Blank lines and ``#`` comments are
    skipped.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for k, line in enumerate(lines[1:], start=1):
        toks = line.split()
        if len(toks) != n:
            raise ValueError(f"row {k} has {len(toks)} entries, expected {n}")
        try:
            rows.append([Fraction(t) for t in toks])
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"row {k}: cannot parse {line!r} as rationals") from None
    return ExactMatrix(rows)
