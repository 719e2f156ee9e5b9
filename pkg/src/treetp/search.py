"""Instance synthesis: TP generation and annealing search for T-TP matrices.

Candidates are matrices of dyadic rationals on a fixed grid 2**-GRID_BITS, held
internally as integer matrices so every score evaluation is exact integer
arithmetic.  Anything reported as found is re-verified with the exact
checkers in :mod:`treetp.ttp`.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .exactmat import ExactMatrix, bareiss_det_int, minor
from .tree import LabelledTree, enumerate_paths, pendant_vertices
from .ttp import check_hypotheses, is_ttp

log = logging.getLogger(__name__)

MARGIN = Fraction(1, 1000)
GRID_BITS = 20
COOL_EVERY = 100
COOLINGS_PER_PLATEAU = 10


class SearchPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    budget: int = 100_000
    step_scale: Fraction = Fraction(1, 4)
    entry_range: tuple[Fraction, Fraction] = (Fraction(1, 1024), Fraction(64))
    anneal: float = 0.7
    trials: int = 1

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if Fraction(self.step_scale) <= 0:
            raise ValueError("step_scale must be > 0")
        if not 0 < self.anneal < 1:
            raise ValueError("anneal must lie in (0, 1)")
        lo, hi = (Fraction(x) for x in self.entry_range)
        if not 0 < lo < hi:
            raise ValueError("entry_range must satisfy 0 < lo < hi")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class SearchOutcome:
    found: bool
    matrix: ExactMatrix | None
    evaluations: int
    final_score: Fraction
    trial: int | None = None
    hypotheses_hold: bool | None = None
    det_value: Fraction | None = None
    log: list[tuple[int, Fraction]] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "evaluations": self.evaluations,
            "final_score": str(self.final_score),
            "trial": self.trial,
            "hypotheses_hold": self.hypotheses_hold,
            "det_value": None if self.det_value is None else str(self.det_value),
            "matrix": None if self.matrix is None else [[str(x) for x in r] for r in self.matrix.rows],
        }


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed derived from (seed, trial) without Python's salted hash."""
    return (seed * 0x9E3779B97F4A7C15 + trial * 0xBF58476D1CE4E5B9) % (1 << 64)


def generate_tp(n: int, seed: int = 0) -> ExactMatrix:
    """Random TP matrix as a product of elementary bidiagonal factors.

    L D U with L = (L_n..L_2)(L_n..L_3)...(L_n), U its transposed pattern,
    L_k(s) = I + s e_k e_{k-1}^T, every parameter a positive multiple of 1/4.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)

    def param() -> Fraction:
        return Fraction(rng.randint(2, 6), 4)

    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = param()
    lower = [(j, param()) for i in range(1, n) for j in range(n - 1, i - 1, -1)]
    upper = [(j, param()) for i in range(n - 1, 0, -1) for j in range(i, n)]
    # L D U, applying bidiagonal factors as row/column operations on D
    for j, s in reversed(lower):
        for c in range(n):
            A[j][c] += s * A[j - 1][c]
    for j, s in upper:
        for r in range(n):
            A[r][j] += s * A[r][j - 1]
    return ExactMatrix(A)


def _constraints(T: LabelledTree) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct contiguous blocks (0-based) of every path-ordered submatrix."""
    seen = {}
    for path in enumerate_paths(T):
        p = [v - 1 for v in path]
        m = len(p)
        for k in range(1, m + 1):
            for a in range(m - k + 1):
                for b in range(m - k + 1):
                    rows, cols = tuple(p[a:a + k]), tuple(p[b:b + k])
                    # reversing rows and columns together leaves the minor unchanged
                    key = min((rows, cols), (rows[::-1], cols[::-1]))
                    seen.setdefault(key, None)
    return sorted(seen, key=lambda rc: (len(rc[0]), rc))


def _hypothesis_constraints(T: LabelledTree) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Path blocks plus det A and every principal minor missing some pendant vertex."""
    cons = set(_constraints(T))
    pend = [p - 1 for p in pendant_vertices(T)]
    everything = tuple(range(T.n))
    cons.add((everything, everything))
    for k in range(1, T.n):
        for S in combinations(everything, k):
            if any(p not in S for p in pend):
                cons.add((S, S))
    return sorted(cons, key=lambda rc: (len(rc[0]), rc))


def violation_score(A: ExactMatrix, T: LabelledTree, margin: Fraction = MARGIN) -> Fraction:
    """Sum of max(0, margin - m) over all path minors m (entries included).

    Zero means A is T-TP with every required minor at least ``margin``.
    """
    if A.n != T.n:
        raise ValueError(f"matrix is {A.n}x{A.n} but tree has {T.n} vertices")
    total = Fraction(0)
    for rows, cols in _constraints(T):
        v = minor(A, [r + 1 for r in rows], [c + 1 for c in cols])
        if v < margin:
            total += margin - v
    return total


class _Objective:
    """Incremental exact objective over an integer grid matrix X / 2**bits."""

    def __init__(self, cons, n: int, bits: int, margin: Fraction, negative_det: bool):
        self.n = n
        self.bits = bits
        self.margin = margin
        self.cons = cons
        self.negative_det = negative_det
        self.touch: dict[tuple[int, int], list[int]] = {}
        for idx, (rows, cols) in enumerate(self.cons):
            for r in rows:
                for c in cols:
                    self.touch.setdefault((r, c), []).append(idx)

    def term(self, X, idx: int) -> Fraction:
        rows, cols = self.cons[idx]
        d = bareiss_det_int([[X[r][c] for c in cols] for r in rows])
        scale = 1 << (self.bits * len(rows))
        # d / scale < margin  <=>  d * margin.den < margin.num * scale
        if d * self.margin.denominator < self.margin.numerator * scale:
            return self.margin - Fraction(d, scale)
        return Fraction(0)

    def det_term(self, X) -> Fraction:
        d = Fraction(bareiss_det_int(X), 1 << (self.bits * self.n))
        return max(Fraction(0), d + self.margin)

    def full(self, X) -> tuple[list[Fraction], Fraction]:
        terms = [self.term(X, i) for i in range(len(self.cons))]
        extra = self.det_term(X) if self.negative_det else Fraction(0)
        return terms, extra


def balance(A: ExactMatrix, sweeps: int = 8) -> ExactMatrix:
    """Scale rows and columns by powers of two toward unit geometric means.

    Positive diagonal scaling D1 A D2 multiplies every minor by a positive
    factor, so TP, T-TP and P-matrix status are all preserved.
    """
    rows = [list(r) for r in A.rows]
    n = A.n
    for _ in range(sweeps):
        for r in rows:
            e = round(sum(math.log2(x) for x in r) / n)
            f = Fraction(1, 2 ** e) if e >= 0 else Fraction(2 ** -e)
            r[:] = [x * f for x in r]
        for c in range(n):
            e = round(sum(math.log2(rows[i][c]) for i in range(n)) / n)
            f = Fraction(1, 2 ** e) if e >= 0 else Fraction(2 ** -e)
            for i in range(n):
                rows[i][c] *= f
    return ExactMatrix(rows)


def _to_grid(A: ExactMatrix, bits: int, lo: int, hi: int) -> list[list[int]]:
    scale = 1 << bits
    return [[min(hi, max(lo, round(x * scale))) for x in r] for r in A.rows]


def _from_grid(X, bits: int) -> ExactMatrix:
    scale = 1 << bits
    return ExactMatrix([[Fraction(x, scale) for x in r] for r in X])


def _anneal(obj: _Objective, cfg: SearchConfig, rng: random.Random, budget: int,
            start: ExactMatrix, on_log: Callable[[int, Fraction], None]):
    """Simulated annealing from ``start``; returns (grid matrix or None, best score, evaluations)."""
    bits, n = obj.bits, obj.n
    lo_f, hi_f = (Fraction(x) for x in cfg.entry_range)
    lo, hi = math.ceil(lo_f * (1 << bits)), math.floor(hi_f * (1 << bits))
    X = _to_grid(start, bits, lo, hi)
    terms, extra = obj.full(X)
    score = sum(terms, Fraction(0)) + extra
    evals = 1
    best, best_X = score, [r[:] for r in X]
    on_log(evals, best)
    if score == 0:
        return best_X, best, evals

    step = float(cfg.step_scale)
    temp = float(score) / 10
    stale = coolings = 0
    while evals < budget:
        i, j = rng.randrange(n), rng.randrange(n)
        old = X[i][j]
        # relative move: up to step * 2**-r of the current entry
        frac = step * rng.random() / (1 << rng.randrange(12))
        delta = max(1, int(old * frac)) * rng.choice((-1, 1))
        new = min(hi, max(lo, old + delta))
        if new == old:
            continue
        X[i][j] = new
        new_terms = [(k, obj.term(X, k)) for k in obj.touch.get((i, j), ())]
        new_extra = obj.det_term(X) if obj.negative_det else extra
        cand = score + sum(t - terms[k] for k, t in new_terms) + (new_extra - extra)
        evals += 1
        diff = cand - score
        if diff <= 0 or (temp > 0 and rng.random() < math.exp(-float(diff) / temp)):
            score, extra = cand, new_extra
            for k, t in new_terms:
                terms[k] = t
        else:
            X[i][j] = old
        if score < best:
            best, best_X = score, [r[:] for r in X]
            on_log(evals, best)
            stale = coolings = 0
            if best == 0:
                return best_X, best, evals
            continue
        stale += 1
        if stale >= COOL_EVERY:
            stale = 0
            temp *= cfg.anneal
            coolings += 1
            if coolings >= COOLINGS_PER_PLATEAU:
                # plateau: reheat from the best state
                coolings = 0
                temp = float(best) / 10
                X = [r[:] for r in best_X]
                terms, extra = obj.full(X)
                score = sum(terms, Fraction(0)) + extra
    return None, best, evals


def _run(T: LabelledTree, cfg: SearchConfig, cons, negative_det: bool,
         accept: Callable[[ExactMatrix], bool] | None = None) -> SearchOutcome:
    obj = _Objective(cons, T.n, GRID_BITS, MARGIN, negative_det)
    logbook: list[tuple[int, Fraction]] = []
    total = 0
    best_score: Fraction | None = None
    for trial in range(cfg.trials):
        remaining = cfg.budget - total
        if remaining <= 0:
            break
        rng = random.Random(trial_seed(cfg.seed, trial))
        start = balance(generate_tp(T.n, seed=rng.getrandbits(64)))
        share = remaining // (cfg.trials - trial)
        offset = total

        def record(e, s, offset=offset):
            logbook.append((offset + e, s))

        X, score, used = _anneal(obj, cfg, rng, share, start, record)
        total += used
        best_score = score if best_score is None else min(best_score, score)
        if X is None:
            continue
        A = _from_grid(X, GRID_BITS)
        if not is_ttp(A, T).passed:
            raise AssertionError("annealer reported a zero score for a non-T-TP matrix")
        if negative_det and not A.det < 0:
            raise AssertionError("annealer reported a zero score with det >= 0")
        if accept is not None and not accept(A):
            log.debug("trial %d: instance rejected by acceptance filter", trial)
            continue
        hyp = check_hypotheses(A, T)
        return SearchOutcome(True, A, total, score, trial, hyp.all_hold, A.det, logbook)
    return SearchOutcome(False, None, total, best_score if best_score is not None else Fraction(0),
                         log=logbook)


def search_ttp(T: LabelledTree, cfg: SearchConfig, require_hypotheses: bool = False,
               accept: Callable[[ExactMatrix], bool] | None = None) -> SearchOutcome:
    """Anneal toward a T-TP matrix with every path minor at least MARGIN.

    With ``require_hypotheses`` the objective also penalizes det A and every
    principal minor of the pendant-deleted submatrices falling below MARGIN.
    ``accept`` optionally filters verified finds; a rejected find moves on to
    the next trial.
    """
    if T.n < 2:
        raise SearchPreconditionError("tree needs at least two vertices")
    cons = _hypothesis_constraints(T) if require_hypotheses else _constraints(T)
    return _run(T, cfg, cons, negative_det=False, accept=accept)


def hunt_negative_det(T: LabelledTree, cfg: SearchConfig) -> SearchOutcome:
    """Look for a T-TP matrix with det A < 0 (objective: violation + max(0, det + MARGIN))."""
    if T.is_natural_path():
        raise SearchPreconditionError("a T-TP matrix on a naturally labelled path is TP, so det > 0")
    return _run(T, cfg, _constraints(T), negative_det=True)
