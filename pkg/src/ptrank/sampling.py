"""Seeded random generators for matrices and bipartite instances.

Everything takes an explicit :class:`random.Random` so that suites are
reproducible from a single seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from ptrank.bipartite import BipartiteMatrix, BipartiteShape
from ptrank.linalg import kron, rank
from ptrank.matrix import ExactMatrix

SMALL_INTEGERS: tuple[Fraction, ...] = tuple(Fraction(k) for k in range(-2, 3))
SMALL_RATIONALS: tuple[Fraction, ...] = tuple(
    sorted({Fraction(p, q) for p in range(-3, 4) for q in (1, 2, 3)})
)


def rand_matrix(rng: random.Random, rows: int, cols: int, entries: Sequence[Fraction] = SMALL_RATIONALS) -> ExactMatrix:
    return ExactMatrix._raw(rows, cols, tuple(rng.choice(entries) for _ in range(rows * cols)))


def rand_low_rank(
    rng: random.Random, rows: int, cols: int, target: int, entries: Sequence[Fraction] = SMALL_RATIONALS
) -> ExactMatrix:
    """Product of random ``rows x target`` and ``target x cols`` factors (rank <= target)."""
    target = max(0, min(target, rows, cols))
    if target == 0:
        return ExactMatrix.zeros(rows, cols)
    return rand_matrix(rng, rows, target, entries) @ rand_matrix(rng, target, cols, entries)


def rand_any_rank(rng: random.Random, rows: int, cols: int, entries: Sequence[Fraction] = SMALL_RATIONALS) -> ExactMatrix:
    """Random matrix whose rank is biased toward small values half the time."""
    if rng.random() < 0.5:
        return rand_matrix(rng, rows, cols, entries)
    return rand_low_rank(rng, rows, cols, rng.randint(1, max(1, min(rows, cols))), entries)


def rand_invertible(rng: random.Random, n: int, entries: Sequence[Fraction] = SMALL_RATIONALS) -> ExactMatrix:
    while True:
        m = rand_matrix(rng, n, n, entries)
        if rank(m) == n:
            return m


def rand_shape(rng: random.Random, max_dim: int = 3, min_dim: int = 1) -> BipartiteShape:
    return BipartiteShape(*(rng.randint(min_dim, max_dim) for _ in range(4)))


def rand_terms(
    rng: random.Random, shape: BipartiteShape, k: int, entries: Sequence[Fraction] = SMALL_RATIONALS
) -> BipartiteMatrix:
    """Sum of ``k`` Kronecker terms with rank-biased factors (Schmidt rank <= k)."""
    s = shape
    pairs = [
        (rand_any_rank(rng, s.m1, s.n1, entries), rand_any_rank(rng, s.m2, s.n2, entries))
        for _ in range(k)
    ]
    total = ExactMatrix.zeros(s.rows, s.cols)
    for a, b in pairs:
        total = total + kron(a, b)
    return BipartiteMatrix(s, total)


def rand_bipartite(
    rng: random.Random, shape: BipartiteShape, entries: Sequence[Fraction] = SMALL_RATIONALS
) -> BipartiteMatrix:
    """Either a dense random matrix or a low-Schmidt-rank sum, with equal odds."""
    if rng.random() < 0.5:
        return BipartiteMatrix(shape, rand_matrix(rng, shape.rows, shape.cols, entries))
    limit = min(shape.m1 * shape.n1, shape.m2 * shape.n2)
    return rand_terms(rng, shape, rng.randint(1, limit), entries)
