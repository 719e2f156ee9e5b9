"""Command-line front end.

Every command prints a JSON report (stable key order) and exits with

    0  success / claim holds
    1  check failed (for ``theorem``: a falsification event)
    2  input could not be parsed or validated, or a precondition failed
    3  theorem hypotheses not met
    4  numerical failure in the eigen-solver
    5  search budget exhausted
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .exactmat import ExactMatrix, format_matrix, parse_matrix, sylvester_residual
from .search import SearchConfig, SearchPreconditionError, hunt_negative_det, search_ttp
from .spectral import SpectralError, verify_theorem
from .tree import LabelledTree, TreeError, enumerate_paths, parse_tree, pendant_vertices, signing
from .ttp import is_ttp, lemma22_residual, path_verdicts

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HYPOTHESES, EXIT_NUMERIC, EXIT_EXHAUSTED = range(6)


class InputError(Exception):
    pass


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read(path: str) -> tuple[str, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return raw.decode("utf-8"), _digest(raw)


def _load_matrix(path: str) -> tuple[ExactMatrix, str]:
    text, dig = _read(path)
    try:
        return parse_matrix(text), dig
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_tree(path: str) -> tuple[LabelledTree, str]:
    text, dig = _read(path)
    try:
        return parse_tree(text), dig
    except TreeError as exc:
        raise InputError(f"{path}: {exc}") from None


def _check_dims(A: ExactMatrix, T: LabelledTree) -> None:
    if A.n != T.n:
        raise InputError(f"matrix is {A.n}x{A.n} but tree has {T.n} vertices")


def make_report(command: str, inputs: dict[str, str], verdicts: dict[str, Any], exit_code: int,
                started: float, seed: int | None = None) -> dict[str, Any]:
    return {
        "command": command,
        "exit_code": exit_code,
        "inputs": inputs,
        "seed": seed,
        "timing_seconds": round(time.perf_counter() - started, 6),
        "tool_version": __version__,
        "verdicts": verdicts,
    }


def dump_report(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def cmd_check(args) -> tuple[int, dict, dict]:
    A, dm = _load_matrix(args.matrix)
    T, dt = _load_tree(args.tree)
    _check_dims(A, T)
    verdict = is_ttp(A, T)
    per_path = [{"path": list(p), **r.to_dict()} for p, r in path_verdicts(A, T)]
    code = EXIT_OK if verdict.passed else EXIT_FAIL
    return code, {"matrix": dm, "tree": dt}, {"is_ttp": verdict.to_dict(), "paths": per_path}


def cmd_theorem(args) -> tuple[int, dict, dict]:
    A, dm = _load_matrix(args.matrix)
    T, dt = _load_tree(args.tree)
    _check_dims(A, T)
    if T.n < 2:
        raise InputError("theorem check needs at least two vertices")
    inputs = {"matrix": dm, "tree": dt}
    try:
        v = verify_theorem(A, T, tol=args.tol)
    except SpectralError as exc:
        return EXIT_NUMERIC, inputs, {"error": str(exc)}
    if v.status == "hypotheses_not_met":
        code = EXIT_HYPOTHESES
    elif v.status == "confirmed":
        code = EXIT_OK
    else:
        code = EXIT_FAIL
        print("FALSIFICATION: hypotheses hold but the conclusion fails: " + "; ".join(v.reasons),
              file=sys.stderr)
    return code, inputs, {"theorem": v.to_dict()}


def _random_matrix(rng: random.Random, n: int) -> ExactMatrix:
    return ExactMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])


def run_selftest(n: int, trials: int, seed: int, corrupt: bool = False) -> dict[str, Any]:
    """Sylvester and three-term adjoint identities on random integer matrices."""
    rng = random.Random(seed)
    syl_bad = lem_bad = syl_count = lem_count = 0
    first_failure = None
    triples = list(itertools.permutations(range(1, n + 1), 3))
    for t in range(trials):
        A = _random_matrix(rng, n)
        k = rng.randint(2, n)
        alpha, beta = rng.sample(range(1, n + 1), k), rng.sample(range(1, n + 1), k)
        r = sylvester_residual(A, alpha, beta)
        syl_count += 1
        if r != 0:
            syl_bad += 1
            first_failure = first_failure or {"identity": "sylvester", "trial": t, "residual": str(r)}
        adj = A.adjoint
        if corrupt:
            adj = adj.replace(n, 1, adj[n, 1] + 1)
        chosen = triples if len(triples) <= 60 else rng.sample(triples, 60)
        for i, j, kk in chosen:
            r = lemma22_residual(A, i, j, kk, adj=adj)
            lem_count += 1
            if r != 0:
                lem_bad += 1
                first_failure = first_failure or {"identity": "lemma22", "trial": t, "triple": [i, j, kk],
                                                  "residual": str(r)}
    return {
        "sylvester": {"checked": syl_count, "nonzero": syl_bad},
        "lemma22": {"checked": lem_count, "nonzero": lem_bad},
        "first_failure": first_failure,
        "all_zero": syl_bad == 0 and lem_bad == 0,
    }


def cmd_selftest(args) -> tuple[int, dict, dict]:
    if not 3 <= args.n <= 8:
        raise InputError("--n must lie in 3..8")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    out = run_selftest(args.n, args.trials, args.seed, corrupt=args.corrupt_adjoint)
    return (EXIT_OK if out["all_zero"] else EXIT_FAIL), {}, {"selftest": out}


def cmd_search(args) -> tuple[int, dict, dict]:
    T, dt = _load_tree(args.tree)
    try:
        cfg = SearchConfig(seed=args.seed, budget=args.budget, trials=args.trials,
                           step_scale=Fraction(args.step_scale), anneal=args.anneal)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        if args.negative_det:
            out = hunt_negative_det(T, cfg)
        else:
            out = search_ttp(T, cfg, require_hypotheses=args.require_hypotheses)
    except SearchPreconditionError as exc:
        raise InputError(str(exc)) from None
    verdicts: dict[str, Any] = {"mode": "negative_det" if args.negative_det else "ttp", "outcome": out.to_dict()}
    if args.log:
        Path(args.log).write_text("".join(f"{e} {s}\n" for e, s in out.log))
    if not out.found:
        return EXIT_EXHAUSTED, {"tree": dt}, verdicts
    text = format_matrix(out.matrix)
    dest = Path(args.out) if args.out else Path(args.tree).with_suffix(".found.txt")
    dest.write_text(text)
    verdicts["matrix_file"] = {"path": str(dest), "digest": _digest(text.encode())}
    verdicts["reverified"] = {"is_ttp": is_ttp(out.matrix, T).passed, "det_negative": out.matrix.det < 0}
    return EXIT_OK, {"tree": dt}, verdicts


def cmd_paths(args) -> tuple[int, dict, dict]:
    T, dt = _load_tree(args.tree)
    if T.n < 2:
        raise InputError("tree needs at least two vertices")
    sigma = signing(T)
    verdicts = {
        "n": T.n,
        "paths": [list(p) for p in enumerate_paths(T)],
        "pendant_vertices": pendant_vertices(T),
        "sigma": {str(v): s for v, s in enumerate(sigma, start=1)},
        "sigma_pattern": "".join("+" if s > 0 else "-" for s in sigma),
    }
    return EXIT_OK, {"tree": dt}, verdicts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treetp", description="Checks for matrices totally positive relative to a tree.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="is the matrix T-TP?")
    s.add_argument("matrix")
    s.add_argument("tree")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("theorem", help="hypotheses, adjoint sign pattern and smallest-eigenvector signing")
    s.add_argument("matrix")
    s.add_argument("tree")
    s.add_argument("--tol", type=float, default=None, help="eigen-residual bound (default 1e-10*||A||_F)")
    s.set_defaults(func=cmd_theorem)

    s = sub.add_parser("selftest", help="exact determinantal identity suites on random matrices")
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--corrupt-adjoint", action="store_true", help="plant a fault (negative control)")
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("search", help="anneal for a T-TP matrix (or a negative-determinant one)")
    s.add_argument("tree")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--step-scale", default="1/4")
    s.add_argument("--anneal", type=float, default=0.7)
    s.add_argument("--negative-det", action="store_true")
    s.add_argument("--require-hypotheses", action="store_true",
                   help="also target det > 0 and the pendant P-matrix conditions")
    s.add_argument("--out", help="matrix file for a find (default: <tree>.found.txt)")
    s.add_argument("--log", help="write 'evaluations best_score' records here")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("paths", help="list tree paths and the vertex signing")
    s.add_argument("tree")
    s.set_defaults(func=cmd_paths)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    started = time.perf_counter()
    try:
        code, inputs, verdicts = args.func(args)
    except InputError as exc:
        code, inputs, verdicts = EXIT_INPUT, {}, {"error": str(exc)}
        print(f"error: {exc}", file=sys.stderr)
    report = make_report(args.command, inputs, verdicts, code, started, getattr(args, "seed", None))
    text = dump_report(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
