"""Acceptance gate.  Each test prints exactly one PASS/FAIL line."""

import json
import random
import time

import numpy as np
import pytest

from conftest import SPIDER6, random_int_matrix, random_rational_matrix
from oracles import extreme_real_roots
from treetp.cli import main
from treetp.exactmat import ExactMatrix, sylvester_residual
from treetp.search import SearchConfig, generate_tp, hunt_negative_det, search_ttp
from treetp.spectral import char_poly, largest_eigenpair, signing_verdict, smallest_eigenpair, verify_theorem
from treetp.tpcheck import is_tp, is_tp_bruteforce
from treetp.tree import LabelledTree, format_tree, signing
from treetp.ttp import adjoint_sign_check, check_hypotheses, is_ttp, lemma22_residual


def test_sylvester_identity(verdict_line):
    rng = random.Random(101)
    t0 = time.perf_counter()
    bad = checked = 0
    for n in (4, 5, 6):
        for _ in range(200):
            A = random_int_matrix(rng, n)
            k = rng.randint(2, n)
            alpha, beta = rng.sample(range(1, n + 1), k), rng.sample(range(1, n + 1), k)
            bad += sylvester_residual(A, alpha, beta) != 0
            checked += 1
    dt = time.perf_counter() - t0
    ok = verdict_line("sylvester_identity", bad == 0 and dt < 10,
                      f"{checked} residuals, {bad} nonzero, {dt:.2f}s (limit 10s)")
    assert ok


def test_three_term_adjoint_identity(verdict_line):
    rng = random.Random(202)
    t0 = time.perf_counter()
    bad = checked = 0
    per_matrix = []
    for n, count in ((5, 100), (7, 25)):
        triples = [(i, j, k) for i in range(1, n + 1) for j in range(1, n + 1) for k in range(1, n + 1)
                   if len({i, j, k}) == 3]
        for _ in range(count):
            A = random_int_matrix(rng, n)
            adj = A.adjoint
            chosen = triples if len(triples) <= 60 else rng.sample(triples, 60)
            per_matrix.append(len(chosen))
            for i, j, k in chosen:
                bad += lemma22_residual(A, i, j, k, adj=adj) != 0
                checked += 1
    dt = time.perf_counter() - t0
    ok = verdict_line("three_term_adjoint_identity", bad == 0 and min(per_matrix) >= 50 and dt < 60,
                      f"{checked} residuals over 125 matrices (min {min(per_matrix)} triples each), "
                      f"{bad} nonzero, {dt:.2f}s (limit 60s)")
    assert ok


def test_fekete_matches_bruteforce(verdict_line):
    rng = random.Random(303)
    t0 = time.perf_counter()
    disagree = tp_count = 0
    cases = [ExactMatrix([[rng.randint(-2, 9) for _ in range(4)] for _ in range(4)]) for _ in range(500)]
    cases += [generate_tp(n, seed) for n in (4, 5) for seed in range(100)]
    for A in cases:
        fast, slow = is_tp(A).passed, is_tp_bruteforce(A).passed
        disagree += fast != slow
        tp_count += slow
    dt = time.perf_counter() - t0
    ok = verdict_line("fekete_equals_bruteforce", disagree == 0 and dt < 60,
                      f"{len(cases)} matrices ({tp_count} TP), {disagree} disagreements, {dt:.2f}s (limit 60s)")
    assert ok


def test_adjoint_contract(verdict_line):
    rng = random.Random(404)
    bad = 0
    for _ in range(100):
        M = random_rational_matrix(rng, 5)
        bad += M @ M.adjoint != ExactMatrix.identity(5).scale(M.det)
    ok = verdict_line("adjoint_contract", bad == 0, f"100 rational 5x5, {bad} failures of M adj(M) = det(M) I")
    assert ok


def _path_instance_failures(A, T):
    reasons = []
    if not check_hypotheses(A, T).all_hold:
        reasons.append("hypotheses")
    if not adjoint_sign_check(A, T).ok:
        reasons.append("sign_pattern")
    pair = smallest_eigenpair(A)
    if not pair.simple:
        reasons.append("not_simple")
    if not pair.residual <= 1e-10 * np.linalg.norm(A.to_float()):
        reasons.append("residual")
    if not signing_verdict(pair.vector, signing(T)).passed:
        reasons.append("signing")
    return reasons


def test_path_theorem(verdict_line):
    t0 = time.perf_counter()
    failures = []
    total = 0
    for n, count in ((5, 100), (6, 25)):
        T = LabelledTree.path(n)
        for seed in range(count):
            total += 1
            reasons = _path_instance_failures(generate_tp(n, seed), T)
            if reasons:
                failures.append((n, seed, reasons))
    dt = time.perf_counter() - t0
    ok = verdict_line("path_theorem", not failures and dt < 120,
                      f"{total} TP instances, {len(failures)} failing {failures[:3]}, {dt:.2f}s (limit 120s)")
    assert ok


TREES = {"star4": LabelledTree.star(4), "star5": LabelledTree.star(5),
         "spider6": LabelledTree.from_edges(SPIDER6)}


@pytest.mark.slow
def test_general_tree_theorem(verdict_line):
    t0 = time.perf_counter()
    budget, wanted = 10**6, 10
    summary, falsified, short = [], [], []
    for name, T in TREES.items():
        found, used, seed = [], 0, 0
        while len(found) < wanted and used < budget:
            cfg = SearchConfig(seed=seed, budget=min(100_000, budget - used))
            out = search_ttp(T, cfg, require_hypotheses=True)
            used += out.evaluations
            seed += 1
            if out.found and out.hypotheses_hold and out.matrix not in found:
                found.append(out.matrix)
        for A in found:
            assert check_hypotheses(A, T).all_hold
            v = verify_theorem(A, T)
            if not (adjoint_sign_check(A, T).ok and v.confirmed):
                falsified.append((name, v.status, v.reasons))
                print("FALSIFICATION", name, [[str(x) for x in r] for r in A.rows], v.reasons)
        if len(found) < wanted:
            short.append(name)
        summary.append(f"{name}: {len(found)} instances/{used} evals")
    dt = time.perf_counter() - t0
    ok = verdict_line("general_tree_theorem", not falsified and not short and dt < 900,
                      f"{'; '.join(summary)}; {len(falsified)} falsifications, {dt:.1f}s (limit 900s)")
    assert ok


def _spectral_cases():
    cases = [generate_tp(2 + k % 5, 500 + k) for k in range(25)]
    rng = random.Random(707)
    while len(cases) < 50:
        n = rng.randint(2, 6)
        B = ExactMatrix([[rng.randint(1, 9) for _ in range(n)] for _ in range(n)])
        if B.det != 0:
            cases.append(B @ B.transpose())  # positive entries, real spectrum
    return cases


def test_eigen_solver_oracle(verdict_line):
    worst = 0.0
    for A in _spectral_cases():
        lo, hi = extreme_real_roots(char_poly(A))
        for got, want in ((smallest_eigenpair(A).value, float(lo)), (largest_eigenpair(A).value, float(hi))):
            worst = max(worst, abs(got - want) / abs(want))
    ok = verdict_line("eigen_solver_oracle", worst <= 1e-9,
                      f"50 matrices n<=6, worst relative error {worst:.2e} (limit 1e-9)")
    assert ok


def test_search_determinism(verdict_line, tmp_path, capsys):
    tree = tmp_path / "spider.txt"
    tree.write_text(format_tree(TREES["spider6"]))
    runs = []
    for k in range(2):
        out, rep = tmp_path / "found.txt", tmp_path / f"report{k}.json"
        argv = ["--report", str(rep), "search", str(tree), "--seed", "9", "--budget", "200000", "--trials", "2"]
        code = main(argv + ["--out", str(out)])
        report = json.loads(rep.read_text())
        report.pop("timing_seconds")
        runs.append((code, out.read_bytes() if out.exists() else b"", json.dumps(report, sort_keys=True)))
        out.unlink(missing_ok=True)
    capsys.readouterr()
    ok = verdict_line("search_determinism", runs[0] == runs[1],
                      f"exit {runs[0][0]}, matrix file {len(runs[0][1])} bytes, reports identical={runs[0][2] == runs[1][2]}")
    assert ok


def test_negative_det_hunt(verdict_line):
    T = LabelledTree.star(4)
    out = hunt_negative_det(T, SearchConfig(seed=0, budget=10**6))
    if out.found:
        verified = is_ttp(out.matrix, T).passed and out.matrix.det < 0
        detail = f"found after {out.evaluations} evals, det = {float(out.matrix.det):.4g}, exact recheck {verified}"
    else:
        verified = out.evaluations <= 10**6
        detail = f"budget exhausted after {out.evaluations} evals"
    ok = verdict_line("negative_det_hunt", verified, detail)
    assert ok
