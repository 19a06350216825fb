"""Bipartite block structure: realignment, Schmidt rank, partial transposes
and local equivalence.

A :class:`BipartiteMatrix` of shape ``(m1, n1, m2, n2)`` is an
``(m1*m2) x (n1*n2)`` matrix read as an ``m1 x n1`` grid of ``m2 x n2``
blocks, with ``block(i, j)[a, b] == data[i*m2 + a, j*n2 + b]``. This is the
index convention of ``kron(A, B)`` with ``A`` outer.

The structural maps (realignment, both partial transposes, full transpose,
system swap) are pure index permutations, cached per shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ptrank.errors import (
    NotInvertibleError,
    ShapeMismatchError,
    ZeroMatrixError,
)
from ptrank.linalg import full_rank_factorization, is_invertible, kron, rank
from ptrank.matrix import ExactMatrix, block_matrix


@dataclass(frozen=True)
class BipartiteShape:
    m1: int
    n1: int
    m2: int
    n2: int

    def __post_init__(self) -> None:
        for name in ("m1", "n1", "m2", "n2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ShapeMismatchError(f"{name} must be a positive integer, got {v!r}")

    @property
    def rows(self) -> int:
        return self.m1 * self.m2

    @property
    def cols(self) -> int:
        return self.n1 * self.n2

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.m1, self.n1, self.m2, self.n2)

    def __str__(self) -> str:
        return f"({self.m1},{self.n1},{self.m2},{self.n2})"


@dataclass(frozen=True)
class BipartiteMatrix:
    shape: BipartiteShape
    data: ExactMatrix

    def __post_init__(self) -> None:
        if self.data.shape != (self.shape.rows, self.shape.cols):
            raise ShapeMismatchError(
                f"matrix is {self.data.rows}x{self.data.cols}, shape {self.shape} "
                f"needs {self.shape.rows}x{self.shape.cols}"
            )

    @classmethod
    def from_kron(cls, a: ExactMatrix, b: ExactMatrix) -> "BipartiteMatrix":
        return cls(BipartiteShape(a.rows, a.cols, b.rows, b.cols), kron(a, b))

    @classmethod
    def from_terms(cls, pairs: Sequence[tuple[ExactMatrix, ExactMatrix]]) -> "BipartiteMatrix":
        """Sum of ``kron(A_j, B_j)`` over the given pairs."""
        if not pairs:
            raise ShapeMismatchError("need at least one term")
        a0, b0 = pairs[0]
        shape = BipartiteShape(a0.rows, a0.cols, b0.rows, b0.cols)
        total = ExactMatrix.zeros(shape.rows, shape.cols)
        for a, b in pairs:
            if (a.shape, b.shape) != (a0.shape, b0.shape):
                raise ShapeMismatchError("terms of different shapes")
            total = total + kron(a, b)
        return cls(shape, total)

    @classmethod
    def from_flat(cls, shape: BipartiteShape, entries: Sequence[object]) -> "BipartiteMatrix":
        return cls(shape, ExactMatrix(shape.rows, shape.cols, entries))

    def block(self, i: int, j: int) -> ExactMatrix:
        s = self.shape
        if not (0 <= i < s.m1 and 0 <= j < s.n1):
            raise IndexError((i, j))
        return self.data.submatrix(i * s.m2, (i + 1) * s.m2, j * s.n2, (j + 1) * s.n2)

    def blocks(self) -> list[list[ExactMatrix]]:
        return [[self.block(i, j) for j in range(self.shape.n1)] for i in range(self.shape.m1)]

    def is_zero(self) -> bool:
        return self.data.is_zero()

    def __add__(self, other: "BipartiteMatrix") -> "BipartiteMatrix":
        if self.shape != other.shape:
            raise ShapeMismatchError(f"{self.shape} vs {other.shape}")
        return BipartiteMatrix(self.shape, self.data + other.data)


def from_blocks(shape: BipartiteShape, blocks: Sequence[Sequence[ExactMatrix]]) -> BipartiteMatrix:
    """Assemble a bipartite matrix from an ``m1 x n1`` grid of blocks."""
    if len(blocks) != shape.m1 or any(len(r) != shape.n1 for r in blocks):
        raise ShapeMismatchError(f"block grid must be {shape.m1}x{shape.n1}")
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b.shape != (shape.m2, shape.n2):
                raise ShapeMismatchError(
                    f"block ({i},{j}) is {b.rows}x{b.cols}, expected {shape.m2}x{shape.n2}"
                )
    return BipartiteMatrix(shape, block_matrix(blocks))


# index permutations


def _flat_index(shape: BipartiteShape, i: int, j: int, a: int, b: int) -> int:
    return (i * shape.m2 + a) * shape.cols + j * shape.n2 + b


@lru_cache(maxsize=256)
def _realign_perm(shape: BipartiteShape) -> tuple[int, ...]:
    m1, n1, m2, n2 = shape.astuple()
    return tuple(
        _flat_index(shape, i, j, a, b)
        for i in range(m1) for j in range(n1) for a in range(m2) for b in range(n2)
    )


@lru_cache(maxsize=256)
def _gamma_a_perm(shape: BipartiteShape) -> tuple[int, ...]:
    # output shape (n1, m1, m2, n2); output block (j, i) = input block (i, j)
    m1, n1, m2, n2 = shape.astuple()
    return tuple(
        _flat_index(shape, i, j, a, b)
        for j in range(n1) for a in range(m2) for i in range(m1) for b in range(n2)
    )


@lru_cache(maxsize=256)
def _gamma_b_perm(shape: BipartiteShape) -> tuple[int, ...]:
    # output shape (m1, n1, n2, m2); output block (i, j) = input block (i, j).T
    m1, n1, m2, n2 = shape.astuple()
    return tuple(
        _flat_index(shape, i, j, a, b)
        for i in range(m1) for b in range(n2) for j in range(n1) for a in range(m2)
    )


@lru_cache(maxsize=256)
def _swap_perm(shape: BipartiteShape) -> tuple[int, ...]:
    # output shape (m2, n2, m1, n1); entry (a*m1 + i, b*n1 + j) = input (i*m2 + a, j*n2 + b)
    m1, n1, m2, n2 = shape.astuple()
    return tuple(
        _flat_index(shape, i, j, a, b)
        for a in range(m2) for i in range(m1) for b in range(n2) for j in range(n1)
    )


def _permuted(m: BipartiteMatrix, perm: tuple[int, ...], rows: int, cols: int) -> ExactMatrix:
    d = m.data.data
    return ExactMatrix._raw(rows, cols, tuple(d[k] for k in perm))


def realign(m: BipartiteMatrix) -> ExactMatrix:
    """``(m1*n1) x (m2*n2)`` matrix whose row ``i*n1 + j`` is ``vec(block(i, j))``."""
    s = m.shape
    return _permuted(m, _realign_perm(s), s.m1 * s.n1, s.m2 * s.n2)


def schmidt_rank(m: BipartiteMatrix) -> int:
    """Number of linearly independent blocks."""
    return rank(realign(m))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``M = sum_j kron(A_j, B_j)`` with both families linearly independent."""

    pairs: tuple[tuple[ExactMatrix, ExactMatrix], ...]

    @property
    def rank(self) -> int:
        return len(self.pairs)

    @property
    def a_factors(self) -> list[ExactMatrix]:
        return [a for a, _ in self.pairs]

    @property
    def b_factors(self) -> list[ExactMatrix]:
        return [b for _, b in self.pairs]

    def reconstruct(self) -> BipartiteMatrix:
        return BipartiteMatrix.from_terms(self.pairs)


def schmidt_decompose(m: BipartiteMatrix) -> SchmidtDecomposition:
    """Deterministic Schmidt decomposition from the column-row factorization
    of the realignment.

    ``B_j`` are the nonzero rows of ``rref(realign(m))`` (pivot-normalized)
    and ``A_j`` the matching pivot columns of the realignment.
    """
    if m.is_zero():
        raise ZeroMatrixError("Schmidt decomposition of a zero matrix")
    s = m.shape
    c, f = full_rank_factorization(realign(m))
    pairs = []
    for j in range(c.cols):
        a = ExactMatrix._raw(s.m1, s.n1, c.col(j))
        b = ExactMatrix._raw(s.m2, s.n2, f.row(j))
        pairs.append((a, b))
    return SchmidtDecomposition(tuple(pairs))


def partial_transpose(m: BipartiteMatrix, system: str = "B") -> BipartiteMatrix:
    """Partial transpose on the outer (``"A"``) or inner (``"B"``) system.

    ``"A"`` moves block ``(i, j)`` to ``(j, i)`` giving shape
    ``(n1, m1, m2, n2)``; ``"B"`` transposes every block in place giving
    shape ``(m1, n1, n2, m2)``.
    """
    s = m.shape
    if system.upper() == "A":
        out = BipartiteShape(s.n1, s.m1, s.m2, s.n2)
        return BipartiteMatrix(out, _permuted(m, _gamma_a_perm(s), out.rows, out.cols))
    if system.upper() == "B":
        out = BipartiteShape(s.m1, s.n1, s.n2, s.m2)
        return BipartiteMatrix(out, _permuted(m, _gamma_b_perm(s), out.rows, out.cols))
    raise ValueError(f"system must be 'A' or 'B', got {system!r}")


def transpose(m: BipartiteMatrix) -> BipartiteMatrix:
    s = m.shape
    return BipartiteMatrix(BipartiteShape(s.n1, s.m1, s.n2, s.m2), m.data.T)


def swap_systems(m: BipartiteMatrix) -> BipartiteMatrix:
    """Exchange the outer and inner factors: ``kron(A, B) -> kron(B, A)``."""
    s = m.shape
    out = BipartiteShape(s.m2, s.n2, s.m1, s.n1)
    return BipartiteMatrix(out, _permuted(m, _swap_perm(s), out.rows, out.cols))


def gamma_rank(m: BipartiteMatrix, system: str = "B") -> int:
    return rank(partial_transpose(m, system).data)


# local equivalence


@dataclass(frozen=True)
class LocalEquivWitness:
    """Invertible factors realizing ``(P1 kron P2) M (Q1 kron Q2)``."""

    p1: ExactMatrix
    p2: ExactMatrix
    q1: ExactMatrix
    q2: ExactMatrix

    @classmethod
    def identity(cls, shape: BipartiteShape) -> "LocalEquivWitness":
        return cls(
            ExactMatrix.identity(shape.m1),
            ExactMatrix.identity(shape.m2),
            ExactMatrix.identity(shape.n1),
            ExactMatrix.identity(shape.n2),
        )

    def check_shape(self, shape: BipartiteShape) -> None:
        expected = {
            "P1": (self.p1, shape.m1),
            "P2": (self.p2, shape.m2),
            "Q1": (self.q1, shape.n1),
            "Q2": (self.q2, shape.n2),
        }
        for name, (mat, n) in expected.items():
            if mat.shape != (n, n):
                raise ShapeMismatchError(f"{name} is {mat.rows}x{mat.cols}, expected {n}x{n}")

    def check_invertible(self) -> None:
        for name, mat in (("P1", self.p1), ("P2", self.p2), ("Q1", self.q1), ("Q2", self.q2)):
            if not is_invertible(mat):
                raise NotInvertibleError(f"{name} is singular")

    def then(self, other: "LocalEquivWitness") -> "LocalEquivWitness":
        """Witness for applying ``self`` first and ``other`` second."""
        return LocalEquivWitness(
            other.p1 @ self.p1, other.p2 @ self.p2, self.q1 @ other.q1, self.q2 @ other.q2
        )

    def is_identity(self) -> bool:
        return all(
            m == ExactMatrix.identity(m.rows) for m in (self.p1, self.p2, self.q1, self.q2)
        )


def apply_local(w: LocalEquivWitness, m: BipartiteMatrix, check: bool = True) -> BipartiteMatrix:
    """Return ``(P1 kron P2) @ M @ (Q1 kron Q2)``."""
    w.check_shape(m.shape)
    if check:
        w.check_invertible()
    left = kron(w.p1, w.p2)
    right = kron(w.q1, w.q2)
    return BipartiteMatrix(m.shape, left @ m.data @ right)


def is_block_diagonal(m: BipartiteMatrix) -> bool:
    s = m.shape
    return all(
        m.block(i, j).is_zero() for i in range(s.m1) for j in range(s.n1) if i != j
    )
