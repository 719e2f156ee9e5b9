"""Total positivity and P-matrix predicates with violation witnesses.

Enumeration order is canonical (size first, then lexicographic on rows and
columns), so the reported witness is the first violation in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .exactmat import ExactMatrix, minor

BRUTEFORCE_MAX_N = 7
P_MATRIX_MAX_N = 20


@dataclass(frozen=True)
class Witness:
    """A minor A[rows; cols] (1-based, in order) and its offending value."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: Fraction
    kind: str = "minor"
    path: tuple[int, ...] | None = None

    def recompute(self, A: ExactMatrix) -> Fraction:
        return minor(A, self.rows, self.cols)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "kind": self.kind,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "value": str(self.value),
        }
        if self.path is not None:
            d["path"] = list(self.path)
        return d


@dataclass(frozen=True)
class VerdictReport:
    passed: bool
    witness: Witness | None = None
    stats: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "pass": self.passed,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "stats": dict(self.stats),
        }


def contiguous_minors(n: int):
    """Yield (rows, cols) 0-based ranges for all contiguous square blocks."""
    for k in range(1, n + 1):
        for i in range(n - k + 1):
            for j in range(n - k + 1):
                yield range(i, i + k), range(j, j + k)


def is_tp(M: ExactMatrix) -> VerdictReport:
    """Total positivity through Fekete's criterion.

    Only minors with consecutive rows and consecutive columns are examined;
    their positivity is equivalent to positivity of every minor.
    """
    checked = 0
    for r, c in contiguous_minors(M.n):
        rows = tuple(i + 1 for i in r)
        cols = tuple(j + 1 for j in c)
        v = minor(M, rows, cols)
        checked += 1
        if v <= 0:
            return VerdictReport(False, Witness(rows, cols, v), {"minors_checked": checked})
    return VerdictReport(True, None, {"minors_checked": checked})


def is_tp_bruteforce(M: ExactMatrix) -> VerdictReport:
    """Literal definition: every minor of every size is positive."""
    n = M.n
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute-force TP check limited to n <= {BRUTEFORCE_MAX_N}")
    checked = 0
    idx = range(1, n + 1)
    for k in range(1, n + 1):
        for rows in combinations(idx, k):
            for cols in combinations(idx, k):
                v = minor(M, rows, cols)
                checked += 1
                if v <= 0:
                    return VerdictReport(False, Witness(rows, cols, v), {"minors_checked": checked})
    return VerdictReport(True, None, {"minors_checked": checked})


def is_p_matrix(M: ExactMatrix) -> VerdictReport:
    """All 2^n - 1 principal minors positive."""
    n = M.n
    if n > P_MATRIX_MAX_N:
        raise ValueError(f"P-matrix check limited to n <= {P_MATRIX_MAX_N}")
    checked = 0
    idx = range(1, n + 1)
    for k in range(1, n + 1):
        for s in combinations(idx, k):
            v = minor(M, s, s)
            checked += 1
            if v <= 0:
                return VerdictReport(False, Witness(s, s, v, kind="principal"), {"minors_checked": checked})
    return VerdictReport(True, None, {"minors_checked": checked})
