"""Exact checks for matrices totally positive relative to a labelled tree."""

from .exactmat import ExactMatrix, IndexList, adjoint, det, minor, parse_matrix, sylvester_residual
from .search import SearchConfig, generate_tp, hunt_negative_det, search_ttp, violation_score
from .spectral import char_poly, largest_eigenpair, signing_verdict, smallest_eigenpair, verify_theorem
from .tpcheck import VerdictReport, is_p_matrix, is_tp, is_tp_bruteforce
from .tree import LabelledTree, enumerate_paths, parse_tree, path_between, pendant_vertices, signing
from .ttp import (
    adjoint_sign_check,
    check_hypotheses,
    equivalence_sigma_conjugation,
    is_ttp,
    lemma22_residual,
)

__version__ = "0.1.0"

__all__ = [
    "ExactMatrix", "IndexList", "LabelledTree", "SearchConfig", "VerdictReport",
    "adjoint", "adjoint_sign_check", "char_poly", "check_hypotheses", "det", "enumerate_paths",
    "equivalence_sigma_conjugation", "generate_tp", "hunt_negative_det", "is_p_matrix", "is_tp",
    "is_tp_bruteforce", "is_ttp", "largest_eigenpair", "lemma22_residual", "minor", "parse_matrix",
    "parse_tree", "path_between", "pendant_vertices", "search_ttp", "signing", "signing_verdict",
    "smallest_eigenpair", "sylvester_residual", "verify_theorem", "violation_score",
]
