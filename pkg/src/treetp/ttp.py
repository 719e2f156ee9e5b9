"""Tree-relative total positivity (T-TP) and the adjoint sign pattern.

A matrix A is T-TP for a labelled tree T when, for every path P of T, the
submatrix A[P] (rows and columns in the order the vertices appear along P)
is totally positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactmat import ExactMatrix, IndexList, minor
from .tpcheck import VerdictReport, Witness, is_p_matrix, is_tp
from .tree import LabelledTree, enumerate_paths, pendant_vertices, signing


def _check_dims(A: ExactMatrix, T: LabelledTree) -> None:
    if A.n != T.n:
        raise ValueError(f"matrix is {A.n}x{A.n} but tree has {T.n} vertices")


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def is_ttp(A: ExactMatrix, T: LabelledTree) -> VerdictReport:
    _check_dims(A, T)
    n = A.n
    checked = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            checked += 1
            if A[i, j] <= 0:
                return VerdictReport(False, Witness((i,), (j,), A[i, j], kind="entry"),
                                     {"entries_checked": checked, "paths_checked": 0})
    stats = {"entries_checked": checked, "paths_checked": 0, "minors_checked": 0}
    for path in enumerate_paths(T):
        stats["paths_checked"] += 1
        m = len(path)
        # Fekete on A[P]: contiguous blocks of the path order
        for k in range(1, m + 1):
            for a in range(m - k + 1):
                for b in range(m - k + 1):
                    rows, cols = path[a:a + k], path[b:b + k]
                    v = minor(A, rows, cols)
                    stats["minors_checked"] += 1
                    if v <= 0:
                        return VerdictReport(False, Witness(rows, cols, v, kind="path_minor", path=tuple(path)),
                                             stats)
    return VerdictReport(True, None, stats)


def path_verdicts(A: ExactMatrix, T: LabelledTree) -> list[tuple[IndexList, VerdictReport]]:
    """is_tp of A[P] for every path P, with witnesses in the labels of A."""
    _check_dims(A, T)
    out = []
    for path in enumerate_paths(T):
        r = is_tp(A.principal(path))
        if not r.passed:
            w = r.witness
            r = VerdictReport(False, Witness(tuple(path[i - 1] for i in w.rows), tuple(path[j - 1] for j in w.cols),
                                             w.value, kind="path_minor", path=tuple(path)), r.stats)
        out.append((path, r))
    return out


@dataclass(frozen=True)
class HypothesisReport:
    is_ttp: VerdictReport
    det_value: Fraction
    det_positive: bool
    pendant_reports: dict[int, VerdictReport]
    all_hold: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "is_ttp": self.is_ttp.to_dict(),
            "det_value": str(self.det_value),
            "det_positive": self.det_positive,
            "pendant_p_matrix": {str(p): r.to_dict() for p, r in sorted(self.pendant_reports.items())},
            "all_hold": self.all_hold,
        }


def _lift_witness(w: Witness, p: int) -> Witness:
    """Map a witness on A with p deleted back to the labels of A."""
    up = lambda i: i + 1 if i >= p else i  # noqa: E731
    return Witness(tuple(map(up, w.rows)), tuple(map(up, w.cols)), w.value, kind=w.kind)


def check_hypotheses(A: ExactMatrix, T: LabelledTree) -> HypothesisReport:
    """T-TP, det A > 0, and every pendant-deleted principal submatrix a P-matrix."""
    _check_dims(A, T)
    if A.n < 2:
        raise ValueError("hypotheses need n >= 2")
    ttp = is_ttp(A, T)
    d = A.det
    pend = {}
    for p in pendant_vertices(T):
        r = is_p_matrix(A.delete(p))
        if not r.passed:
            r = VerdictReport(False, _lift_witness(r.witness, p), r.stats)
        pend[p] = r
    ok = ttp.passed and d > 0 and all(r.passed for r in pend.values())
    return HypothesisReport(ttp, d, d > 0, pend, ok)


def complement(n: int, *removed: int) -> IndexList:
    """1..n in ascending order with the given indices removed."""
    return IndexList(range(1, n + 1)).without(*removed)


def lemma22_residual(A: ExactMatrix, i: int, j: int, k: int, adj: ExactMatrix | None = None) -> Fraction:
    """A[i,N;i,N] adj[k,i] + A[j,N;i,N] adj[k,j] + A[k,N;i,N] adj[k,k].

    N is 1..n without i, j, k in natural order.  Zero for every matrix.
    ``adj`` overrides the adjoint (used to plant a fault in self-tests).
    """
    n = A.n
    if n < 3:
        raise ValueError("need n >= 3")
    if len({i, j, k}) != 3:
        raise ValueError(f"indices must be distinct, got {(i, j, k)}")
    for x in (i, j, k):
        if not 1 <= x <= n:
            raise IndexError(f"index {x} outside 1..{n}")
    rest = tuple(complement(n, i, j, k))
    cols = (i, *rest)
    adj = A.adjoint if adj is None else adj
    return (minor(A, (i, *rest), cols) * adj[k, i]
            + minor(A, (j, *rest), cols) * adj[k, j]
            + minor(A, (k, *rest), cols) * adj[k, k])


PAIR_CLASSES = ("diagonal", "pendant_pendant", "pendant_interior", "interior_interior")


def pair_class(i: int, j: int, pendants: set[int]) -> str:
    if i == j:
        return "diagonal"
    hits = (i in pendants) + (j in pendants)
    return PAIR_CLASSES[3 - hits]


@dataclass(frozen=True)
class Mismatch:
    i: int
    j: int
    kind: str  # "wrong_sign" or "zero"
    value: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"i": self.i, "j": self.j, "kind": self.kind, "value": str(self.value)}


@dataclass(frozen=True)
class SignPatternReport:
    entry_signs: tuple[tuple[int, ...], ...]
    expected: tuple[tuple[int, ...], ...]
    mismatches: tuple[Mismatch, ...]
    classes: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "entry_signs": [list(r) for r in self.entry_signs],
            "expected": [list(r) for r in self.expected],
            "mismatches": [m.to_dict() for m in self.mismatches],
            "classes": {k: dict(v) for k, v in self.classes.items()},
        }


def adjoint_sign_check(A: ExactMatrix, T: LabelledTree) -> SignPatternReport:
    """Compare sign(adj(A)[i, j]) with sigma_i * sigma_j for all i, j."""
    _check_dims(A, T)
    sigma = signing(T)
    pend = set(pendant_vertices(T))
    adj = A.adjoint
    n = A.n
    signs, expected, bad = [], [], []
    classes = {c: {"pairs": 0, "mismatches": 0} for c in PAIR_CLASSES}
    for i in range(1, n + 1):
        srow, erow = [], []
        for j in range(1, n + 1):
            v = adj[i, j]
            s, e = _sign(v), sigma[i - 1] * sigma[j - 1]
            srow.append(s)
            erow.append(e)
            cls = classes[pair_class(i, j, pend)]
            cls["pairs"] += 1
            if s != e:
                bad.append(Mismatch(i, j, "zero" if s == 0 else "wrong_sign", v))
                cls["mismatches"] += 1
        signs.append(tuple(srow))
        expected.append(tuple(erow))
    return SignPatternReport(tuple(signs), tuple(expected), tuple(bad), classes)


def sigma_conjugated_adjoint(A: ExactMatrix, T: LabelledTree) -> ExactMatrix:
    """D adj(A) D with D = diag(sigma)."""
    _check_dims(A, T)
    sigma = signing(T)
    adj = A.adjoint.rows
    n = A.n
    return ExactMatrix([[sigma[i] * sigma[j] * adj[i][j] for j in range(n)] for i in range(n)])


def equivalence_sigma_conjugation(A: ExactMatrix, T: LabelledTree) -> VerdictReport:
    """Pass iff D adj(A) D is entrywise positive."""
    C = sigma_conjugated_adjoint(A, T)
    checked = 0
    for i in range(1, C.n + 1):
        for j in range(1, C.n + 1):
            checked += 1
            if C[i, j] <= 0:
                return VerdictReport(False, Witness((i,), (j,), C[i, j], kind="conjugated_adjoint_entry"),
                                     {"entries_checked": checked})
    return VerdictReport(True, None, {"entries_checked": checked})
