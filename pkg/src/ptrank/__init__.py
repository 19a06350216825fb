"""Exact rank analysis of bipartite matrices and their partial transposes."""

from __future__ import annotations

from ptrank.analysis import (
    CaseTag,
    EqualityReport,
    analyze,
    analyze_2x2_sr2,
    analyze_full_schmidt,
    analyze_sr3_order4,
    analyze_vector_case,
    check_inequality,
    eigen_sum_spectrum,
    kmax_bound,
    reduce_sr2,
    sr2_normalize,
    sr2_rank_via_pencil,
)
from ptrank.bipartite import (
    BipartiteMatrix,
    BipartiteShape,
    LocalEquivWitness,
    apply_local,
    gamma_rank,
    partial_transpose,
    realign,
    schmidt_decompose,
    schmidt_rank,
    swap_systems,
)
from ptrank.canonical import gen_full_schmidt_canonical, gen_sr2_case, gen_vector_case
from ptrank.kernels import BACKEND
from ptrank.linalg import det, full_rank_factorization, kron, pencil_singular_directions, rank, rref
from ptrank.matrix import ExactMatrix
from ptrank.oracle import exhaustive_check, lemma_suite, random_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BipartiteMatrix",
    "BipartiteShape",
    "CaseTag",
    "EqualityReport",
    "ExactMatrix",
    "LocalEquivWitness",
    "analyze",
    "analyze_2x2_sr2",
    "analyze_full_schmidt",
    "analyze_sr3_order4",
    "analyze_vector_case",
    "apply_local",
    "check_inequality",
    "det",
    "eigen_sum_spectrum",
    "exhaustive_check",
    "full_rank_factorization",
    "gamma_rank",
    "gen_full_schmidt_canonical",
    "gen_sr2_case",
    "gen_vector_case",
    "kmax_bound",
    "kron",
    "lemma_suite",
    "partial_transpose",
    "pencil_singular_directions",
    "random_check",
    "rank",
    "realign",
    "reduce_sr2",
    "rref",
    "schmidt_decompose",
    "schmidt_rank",
    "sr2_normalize",
    "sr2_rank_via_pencil",
    "swap_systems",
]
