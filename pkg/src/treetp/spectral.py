"""Eigenpairs in floating point, checked against the exact characteristic polynomial.

The smallest real eigenvalue is isolated exactly with a Sturm sequence of the
characteristic polynomial (computed over the rationals), then the eigenvector
comes from shifted inverse iteration in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .exactmat import ExactMatrix
from .tpcheck import VerdictReport, Witness
from .tree import LabelledTree, signing
from .ttp import HypothesisReport, SignPatternReport, adjoint_sign_check, check_hypotheses

ZERO_TOL = 1e-8
GAP_TOL = 1e-8
RESIDUAL_TOL = 1e-10


class SpectralError(ArithmeticError):
    pass


class ConvergenceError(SpectralError):
    pass


class ComplexSpectrumError(SpectralError):
    pass


class SingularMatrixError(SpectralError):
    pass


# ---------------------------------------------------------------- polynomials
# Polynomials are lists of Fractions, highest degree first.

def char_poly(A: ExactMatrix) -> list[Fraction]:
    """Coefficients of det(xI - A) by Faddeev-LeVerrier over the rationals."""
    n = A.n
    a = [list(r) for r in A.rows]
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [[sum(a[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            M[i][i] += c
        AM_trace = sum(sum(a[i][t] * M[t][i] for t in range(n)) for i in range(n))
        c = -AM_trace / k
        coeffs.append(c)
    return coeffs


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _deriv(p: Sequence[Fraction]) -> list[Fraction]:
    d = len(p) - 1
    return [c * (d - i) for i, c in enumerate(p[:-1])] or [Fraction(0)]


def _divmod(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p = list(p)
    q = _trim(list(q))
    if q == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    out = []
    while len(p) >= len(q):
        f = p[0] / q[0]
        out.append(f)
        for i in range(len(q)):
            p[i] -= f * q[i]
        p.pop(0)
    return out or [Fraction(0)], _trim(p) if p else [Fraction(0)]


def _gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(list(p)), _trim(list(q))
    while b != [0]:
        a, b = b, _divmod(a, b)[1]
    return [c / a[0] for c in a]


def squarefree(p: Sequence[Fraction]) -> list[Fraction]:
    g = _gcd(p, _deriv(p))
    return _divmod(p, g)[0] if len(g) > 1 else list(p)


def sturm_chain(p: Sequence[Fraction]) -> list[list[Fraction]]:
    chain = [_trim(list(p)), _trim(_deriv(p))]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        r = _divmod(chain[-2], chain[-1])[1]
        if r == [0]:
            break
        chain.append([-c for c in r])
    return chain


def _changes(signs: list[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_count(chain, a: Fraction | None, b: Fraction | None) -> int:
    """Distinct real roots in (a, b]; None means -inf / +inf."""
    def at(x):
        if x is None:
            return None
        return _changes([_sign(poly_eval(q, x)) for q in chain])

    lo = at(a) if a is not None else _changes([_sign(q[0]) * (-1) ** (len(q) - 1) for q in chain])
    hi = at(b) if b is not None else _changes([_sign(q[0]) for q in chain])
    return lo - hi


def root_bound(p: Sequence[Fraction]) -> Fraction:
    """Cauchy bound: every root has modulus below 1 + max |c_i / c_0|."""
    lead = p[0]
    return 1 + max((abs(c / lead) for c in p[1:]), default=Fraction(0))


def isolate_extreme_root(p: Sequence[Fraction], which: str = "min", width: Fraction = Fraction(1, 2**60),
                         chain=None) -> tuple[Fraction, Fraction]:
    """Bracket (a, b] of width <= ``width`` around the smallest or largest real root."""
    chain = chain or sturm_chain(squarefree(p))
    total = sturm_count(chain, None, None)
    if total == 0:
        raise ComplexSpectrumError("characteristic polynomial has no real root")
    R = root_bound(p)
    a, b = -R, R
    while b - a > width * max(1, abs(a) + abs(b)) / 2:
        m = (a + b) / 2
        # limit denominators to dyadics so the exact evaluation stays cheap
        m = Fraction(round(m * 2**80), 2**80) if m.denominator > 2**80 else m
        if not a < m < b:
            break
        left = sturm_count(chain, a, m)
        if which == "min":
            a, b = (a, m) if left >= 1 else (m, b)
        else:
            right = sturm_count(chain, m, b)
            a, b = (m, b) if right >= 1 else (a, m)
    return a, b


# ---------------------------------------------------------------- eigenpairs

@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float
    simple: bool
    iterations: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "vector": [float(x) for x in self.vector],
            "residual": self.residual,
            "simple": self.simple,
            "iterations": self.iterations,
        }


def canonical(v: np.ndarray) -> np.ndarray:
    """Unit 2-norm with the (first) largest-magnitude component positive."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def _as_pair(A) -> tuple[ExactMatrix, np.ndarray]:
    if isinstance(A, ExactMatrix):
        return A, A.to_float()
    F = np.asarray(A, dtype=float)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(F)):
        raise ValueError("matrix entries must be finite")
    return ExactMatrix(F.tolist()), F


def _inverse_iteration(F: np.ndarray, shift: float, tol: float, max_iter: int,
                       x0: np.ndarray | None = None) -> tuple[float, np.ndarray, float, int]:
    n = F.shape[0]
    scale = np.linalg.norm(F)
    if x0 is None:
        # fixed generic start; a symmetric one like ones(n) can be orthogonal to the target
        x0 = np.random.default_rng(12345).standard_normal(n)
    x = x0 / np.linalg.norm(x0)
    B = F - shift * np.eye(n)
    lam, res = shift, np.inf
    for it in range(1, max_iter + 1):
        try:
            y = np.linalg.solve(B, x)
        except np.linalg.LinAlgError:
            # shift hit an eigenvalue to machine precision
            B = F - (shift + 1e-14 * scale) * np.eye(n)
            y = np.linalg.solve(B, x)
        x = y / np.linalg.norm(y)
        Ax = F @ x
        lam = float(x @ Ax)
        res = float(np.linalg.norm(Ax - lam * x))
        if res <= tol:
            return lam, x, res, it
    raise ConvergenceError(f"inverse iteration did not reach residual {tol:g} in {max_iter} steps (last {res:g})")


def _is_simple(p, chain, lam: float, gap: float, other_roots: np.ndarray) -> bool:
    g = _gcd(p, _deriv(p))
    lo, hi = Fraction(lam - gap), Fraction(lam + gap)
    if len(g) > 1 and sturm_count(sturm_chain(g), lo, hi) > 0:
        return False
    if sturm_count(chain, lo, hi) > 1:
        return False
    nonreal = other_roots[np.abs(other_roots.imag) > 0]
    return not np.any(np.abs(nonreal - lam) < gap)


def smallest_eigenpair(A, tol: float | None = None, max_iter: int = 200) -> EigenPair:
    """Eigenpair of the minimal real eigenvalue.

    Raises ComplexSpectrumError when a non-real eigenvalue has smaller real
    part (or smaller modulus), SingularMatrixError when det A = 0.
    ``tol`` is the residual bound, default 1e-10 * ||A||_F.
    """
    exact, F = _as_pair(A)
    if exact.det == 0:
        raise SingularMatrixError("matrix is singular")
    fro = float(np.linalg.norm(F))
    tol = RESIDUAL_TOL * fro if tol is None else tol
    p = char_poly(exact)
    sq = squarefree(p)
    chain = sturm_chain(sq)
    a, b = isolate_extreme_root(p, "min", chain=chain)
    lam0 = float((a + b) / 2)

    roots = np.roots([float(c) for c in p])
    n_real = sturm_count(chain, None, None)
    if n_real < len(sq) - 1:
        nonreal = roots[np.abs(roots.imag) > 1e-12 * max(1.0, fro)]
        if np.any(nonreal.real < lam0) or np.any(np.abs(nonreal) < abs(lam0)):
            raise ComplexSpectrumError("a non-real eigenvalue precedes the smallest real one")

    lam, x, res, it = _inverse_iteration(F, lam0, tol, max_iter)
    if abs(lam - lam0) > 1e-6 * max(1.0, fro):
        raise ConvergenceError(f"inverse iteration settled at {lam!r}, not the isolated root {lam0!r}")
    simple = _is_simple(p, chain, lam0, GAP_TOL * fro, roots)
    return EigenPair(lam, canonical(x), res, simple, it)


def largest_eigenpair(A, tol: float | None = None, max_iter: int = 10_000) -> EigenPair:
    """Perron pair of an entrywise positive matrix by power iteration.

    Once the Rayleigh quotient stabilizes, a few shifted inverse steps polish
    the pair to the residual bound.
    """
    exact, F = _as_pair(A)
    if not np.all(F > 0):
        raise ValueError("power iteration here expects an entrywise positive matrix")
    fro = float(np.linalg.norm(F))
    tol = RESIDUAL_TOL * fro if tol is None else tol
    n = F.shape[0]
    x = np.ones(n) / np.sqrt(n)
    lam, res = 0.0, np.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = F @ x
        x = y / np.linalg.norm(y)
        Ax = F @ x
        lam = float(x @ Ax)
        res = float(np.linalg.norm(Ax - lam * x))
        if res <= tol:
            break
        if res <= 1e-6 * fro:
            lam, x, res, k = _inverse_iteration(F, lam, tol, 50, x0=x)
            it += k
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps (residual {res:g})")
    p = char_poly(exact)
    chain = sturm_chain(squarefree(p))
    simple = _is_simple(p, chain, lam, GAP_TOL * fro, np.roots([float(c) for c in p]))
    return EigenPair(lam, canonical(x), res, simple, it)


def signing_verdict(v, sigma: Sequence[int], zero_tol: float = ZERO_TOL) -> VerdictReport:
    """Is v totally nonzero with sign(v_k) = c * sigma_k for a single c in {+1, -1}?"""
    v = np.asarray(v, dtype=float)
    if len(v) != len(sigma):
        raise ValueError("vector and signing differ in length")
    u = v / np.linalg.norm(v)
    for k, x in enumerate(u, start=1):
        if abs(x) <= zero_tol:
            return VerdictReport(False, Witness((k,), (k,), Fraction(float(x)), kind="zero_component"),
                                 {"vertices_checked": k})
    c = 1 if u[0] * sigma[0] > 0 else -1
    for k, (x, s) in enumerate(zip(u, sigma), start=1):
        if (x > 0) != (c * s > 0):
            return VerdictReport(False, Witness((k,), (k,), Fraction(float(x)), kind="wrong_sign_component"),
                                 {"vertices_checked": k, "orientation": c})
    return VerdictReport(True, None, {"vertices_checked": len(u), "orientation": c})


# ---------------------------------------------------------------- theorem

@dataclass
class TheoremVerdict:
    status: str  # "confirmed", "falsified" or "hypotheses_not_met"
    hypotheses: HypothesisReport
    sign_pattern: SignPatternReport | None = None
    eigenpair: EigenPair | None = None
    signing: VerdictReport | None = None
    routes_agree: bool | None = None
    reasons: tuple[str, ...] = ()

    @property
    def confirmed(self) -> bool:
        return self.status == "confirmed"

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "hypotheses": self.hypotheses.to_dict(),
            "sign_pattern": None if self.sign_pattern is None else self.sign_pattern.to_dict(),
            "eigenpair": None if self.eigenpair is None else self.eigenpair.to_dict(),
            "signing": None if self.signing is None else self.signing.to_dict(),
            "routes_agree": self.routes_agree,
            "reasons": list(self.reasons),
        }


def verify_theorem(A: ExactMatrix, T: LabelledTree, tol: float | None = None,
                   zero_tol: float = ZERO_TOL) -> TheoremVerdict:
    """Check the hypotheses, then both the exact adjoint route and the spectral route.

    A failed check with all hypotheses holding is reported as "falsified".
    ConvergenceError from the eigen-solver propagates.
    """
    hyp = check_hypotheses(A, T)
    if not hyp.all_hold:
        return TheoremVerdict("hypotheses_not_met", hyp)
    pattern = adjoint_sign_check(A, T)
    reasons = []
    if not pattern.ok:
        reasons.append(f"adjoint sign pattern: {len(pattern.mismatches)} mismatching entries")
    try:
        pair = smallest_eigenpair(A, tol=tol)
    except ComplexSpectrumError as exc:
        reasons.append(f"smallest eigenvalue not real: {exc}")
        return TheoremVerdict("falsified", hyp, pattern, reasons=tuple(reasons))
    verdict = signing_verdict(pair.vector, signing(T), zero_tol)
    if not pair.simple:
        reasons.append("smallest eigenvalue is not simple")
    if not verdict.passed:
        reasons.append("eigenvector not signed according to the tree")
    status = "falsified" if reasons else "confirmed"
    return TheoremVerdict(status, hyp, pattern, pair, verdict, pattern.ok == verdict.passed, tuple(reasons))
