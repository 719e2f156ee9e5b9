from fractions import Fraction

import pytest

from conftest import SPIDER6
from treetp.exactmat import ExactMatrix
from treetp.search import (
    MARGIN,
    SearchConfig,
    SearchPreconditionError,
    balance,
    generate_tp,
    hunt_negative_det,
    search_ttp,
    trial_seed,
    violation_score,
)
from treetp.tpcheck import is_p_matrix, is_tp, is_tp_bruteforce
from treetp.tree import LabelledTree
from treetp.ttp import check_hypotheses, is_ttp


def test_generate_tp_small():
    A = generate_tp(1, seed=3)
    assert A.n == 1 and A[1, 1] > 0
    B = generate_tp(2, seed=3)
    assert is_tp_bruteforce(B).passed
    with pytest.raises(ValueError):
        generate_tp(0)


def test_generate_tp_bruteforce_n5():
    for seed in range(1, 101):
        A = generate_tp(5, seed)
        assert is_tp_bruteforce(A).passed, seed


def test_generate_tp_deterministic():
    assert generate_tp(6, 99) == generate_tp(6, 99)
    assert generate_tp(6, 99) != generate_tp(6, 100)


def test_balance_preserves_tp_and_uses_powers_of_two():
    for seed in range(10):
        A = generate_tp(5, seed)
        B = balance(A)
        assert is_tp(B).passed and is_p_matrix(B).passed
        ratio = B[1, 1] / A[1, 1]
        assert ratio.numerator & (ratio.numerator - 1) == 0
        assert ratio.denominator & (ratio.denominator - 1) == 0


def test_trial_seed_spreads():
    seeds = {trial_seed(s, t) for s in range(10) for t in range(10)}
    assert len(seeds) == 100


def test_violation_score_zero_on_tp_path():
    A = generate_tp(5, 4)
    assert violation_score(A, LabelledTree.path(5)) == 0


def test_violation_score_single_negative_entry():
    T = LabelledTree.path(2)
    A = ExactMatrix([[1, 1], [-1, 10]])  # det 11, entry (2,1) = -1
    assert violation_score(A, T) == MARGIN + 1


def test_violation_score_tiny_positive_minor_counts():
    T = LabelledTree.path(2)
    A = ExactMatrix([[1, 1], [1, Fraction(10001, 10000)]])  # det 1/10000 < margin
    assert is_ttp(A, T).passed
    assert violation_score(A, T) == MARGIN - Fraction(1, 10000)


def test_violation_score_dimension_mismatch():
    with pytest.raises(ValueError):
        violation_score(generate_tp(3), LabelledTree.path(4))


def test_natural_path_found_from_warm_start():
    for seed in range(5):
        out = search_ttp(LabelledTree.path(4), SearchConfig(seed=seed, budget=1000))
        assert out.found and out.evaluations == 1 and out.final_score == 0
        assert is_ttp(out.matrix, LabelledTree.path(4)).passed


def test_zero_budget():
    out = search_ttp(LabelledTree.star(4), SearchConfig(budget=0))
    assert not out.found and out.evaluations == 0 and out.matrix is None


def test_exhausted_budget_is_spent_exactly():
    T = LabelledTree.from_edges(SPIDER6)
    for trials in (1, 3):
        out = search_ttp(T, SearchConfig(seed=2, budget=40, trials=trials))
        assert not out.found
        assert out.evaluations == 40


def test_logged_best_score_non_increasing():
    out = search_ttp(LabelledTree.star(5), SearchConfig(seed=7, budget=20_000))
    evals = [e for e, _ in out.log]
    scores = [s for _, s in out.log]
    assert evals == sorted(evals)
    assert all(a >= b for a, b in zip(scores, scores[1:]))
    if out.found:
        assert scores[-1] == 0


def test_search_deterministic():
    T = LabelledTree.star(4)
    a = search_ttp(T, SearchConfig(seed=11, budget=20_000))
    b = search_ttp(T, SearchConfig(seed=11, budget=20_000))
    assert a.to_dict() == b.to_dict() and a.log == b.log


def test_found_matrices_are_verified():
    T = LabelledTree.star(4)
    out = search_ttp(T, SearchConfig(seed=3, budget=100_000))
    assert out.found
    assert is_ttp(out.matrix, T).passed
    assert out.hypotheses_hold == check_hypotheses(out.matrix, T).all_hold
    assert out.det_value == out.matrix.det


def test_require_hypotheses():
    T = LabelledTree.star(4)
    out = search_ttp(T, SearchConfig(seed=5, budget=100_000), require_hypotheses=True)
    assert out.found and out.hypotheses_hold


def test_accept_filter_rejects_and_moves_on():
    T = LabelledTree.path(3)
    out = search_ttp(T, SearchConfig(budget=100, trials=3), accept=lambda A: False)
    assert not out.found


def test_search_rejects_single_vertex():
    with pytest.raises(SearchPreconditionError):
        search_ttp(LabelledTree.path(1), SearchConfig())


def test_hunt_precondition():
    with pytest.raises(SearchPreconditionError):
        hunt_negative_det(LabelledTree.path(4), SearchConfig())


def test_hunt_star4_finds_negative_det():
    T = LabelledTree.star(4)
    out = hunt_negative_det(T, SearchConfig(seed=0, budget=100_000))
    assert out.found
    assert out.matrix.det < 0 and is_ttp(out.matrix, T).passed
    assert out.hypotheses_hold is False


@pytest.mark.parametrize("kwargs", [dict(budget=-1), dict(step_scale=0), dict(anneal=1.0),
                                    dict(entry_range=(0, 1)), dict(trials=0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)
