from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ptrank.bipartite import (
    BipartiteMatrix,
    BipartiteShape,
    LocalEquivWitness,
    apply_local,
    from_blocks,
    gamma_rank,
    is_block_diagonal,
    partial_transpose,
    realign,
    schmidt_decompose,
    schmidt_rank,
    swap_systems,
    transpose,
)
from ptrank.errors import NotInvertibleError, ShapeMismatchError, ZeroMatrixError
from ptrank.linalg import kron, linearly_independent, rank
from ptrank.matrix import ExactMatrix

from conftest import bipartite, invertible, matrices, shapes


def _tensor(m: BipartiteMatrix) -> np.ndarray:
    s = m.shape
    # T[i, a, j, b] = block(i, j)[a, b]
    return np.array(m.data.tolist(), dtype=object).reshape(s.m1, s.m2, s.n1, s.n2)


def _as_list(arr: np.ndarray, rows: int, cols: int) -> list:
    return arr.reshape(rows, cols).tolist()


# index conventions against an independent numpy reshape oracle


@given(bipartite())
def test_realign_matches_reshape(m):
    s = m.shape
    expected = _as_list(_tensor(m).transpose(0, 2, 1, 3), s.m1 * s.n1, s.m2 * s.n2)
    assert realign(m).tolist() == expected


@given(bipartite())
def test_gamma_b_matches_reshape(m):
    s = m.shape
    g = partial_transpose(m, "B")
    assert g.shape == BipartiteShape(s.m1, s.n1, s.n2, s.m2)
    assert g.data.tolist() == _as_list(_tensor(m).transpose(0, 3, 2, 1), s.m1 * s.n2, s.n1 * s.m2)


@given(bipartite())
def test_gamma_a_matches_reshape(m):
    s = m.shape
    g = partial_transpose(m, "A")
    assert g.shape == BipartiteShape(s.n1, s.m1, s.m2, s.n2)
    assert g.data.tolist() == _as_list(_tensor(m).transpose(2, 1, 0, 3), s.n1 * s.m2, s.m1 * s.n2)


@given(bipartite())
def test_swap_matches_reshape(m):
    s = m.shape
    assert swap_systems(m).data.tolist() == _as_list(_tensor(m).transpose(1, 0, 3, 2), s.m2 * s.m1, s.n2 * s.n1)


@given(matrices(max_dim=3), matrices(max_dim=3))
def test_kron_layout(a, b):
    m = BipartiteMatrix.from_kron(a, b)
    for i in range(a.rows):
        for j in range(a.cols):
            assert m.block(i, j) == b.scale(a[i, j])
    assert partial_transpose(m, "B") == BipartiteMatrix.from_kron(a, b.T)
    assert partial_transpose(m, "A") == BipartiteMatrix.from_kron(a.T, b)
    assert swap_systems(m) == BipartiteMatrix.from_kron(b, a)


# structural identities


@given(bipartite())
def test_partial_transposes_compose_to_transpose(m):
    assert partial_transpose(partial_transpose(m, "A"), "B") == transpose(m)
    assert partial_transpose(partial_transpose(m, "A"), "A") == m
    assert partial_transpose(partial_transpose(m, "B"), "B") == m


@given(bipartite())
def test_gamma_ranks_agree_up_to_transpose(m):
    # Gamma_A = (Gamma_B)^T, so both partial transposes have the same rank
    assert gamma_rank(m, "A") == gamma_rank(m, "B")


@given(bipartite())
def test_schmidt_rank_invariance(m):
    sr = schmidt_rank(m)
    assert sr == schmidt_rank(partial_transpose(m, "A")) == schmidt_rank(partial_transpose(m, "B"))
    assert sr == schmidt_rank(transpose(m)) == schmidt_rank(swap_systems(m))


@given(bipartite())
def test_schmidt_rank_counts_independent_blocks(m):
    blocks = [b for row in m.blocks() for b in row]
    flat = ExactMatrix(len(blocks), len(blocks[0].data), [x for b in blocks for x in b.data])
    assert schmidt_rank(m) == rank(flat)


@given(bipartite())
def test_schmidt_decomposition(m):
    assume(not m.is_zero())
    dec = schmidt_decompose(m)
    assert dec.rank == schmidt_rank(m)
    assert dec.reconstruct() == m
    assert linearly_independent(dec.a_factors)
    assert linearly_independent(dec.b_factors)


def test_schmidt_decomposition_zero():
    with pytest.raises(ZeroMatrixError):
        schmidt_decompose(BipartiteMatrix.from_flat(BipartiteShape(1, 1, 1, 1), [0]))


def test_identity_is_a_product():
    m = BipartiteMatrix.from_kron(ExactMatrix.identity(2), ExactMatrix.identity(2))
    assert (rank(m.data), schmidt_rank(m), gamma_rank(m)) == (4, 1, 4)


def test_swap_example():
    m = BipartiteMatrix.from_flat(BipartiteShape(2, 2, 2, 2), [1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1])
    # the swap operator: Sr 4, rank 4, partial transpose rank 1
    assert (rank(m.data), schmidt_rank(m), gamma_rank(m)) == (4, 4, 1)


# local equivalence


@st.composite
def witnessed(draw):
    m = draw(bipartite(max_dim=2))
    s = m.shape
    w = LocalEquivWitness(draw(invertible(s.m1)), draw(invertible(s.m2)), draw(invertible(s.n1)), draw(invertible(s.n2)))
    return m, w


@given(witnessed())
def test_local_equivalence_preserves_ranks(mw):
    m, w = mw
    n = apply_local(w, m)
    for f in (lambda x: rank(x.data), schmidt_rank, lambda x: gamma_rank(x, "A"), lambda x: gamma_rank(x, "B")):
        assert f(n) == f(m)


@given(witnessed())
def test_local_equivalence_matches_kron(mw):
    m, w = mw
    assert apply_local(w, m).data == kron(w.p1, w.p2) @ m.data @ kron(w.q1, w.q2)


@given(witnessed(), st.data())
def test_witness_composition(mw, data):
    m, w = mw
    s = m.shape
    v = LocalEquivWitness(
        data.draw(invertible(s.m1)), data.draw(invertible(s.m2)), data.draw(invertible(s.n1)), data.draw(invertible(s.n2))
    )
    assert apply_local(w.then(v), m) == apply_local(v, apply_local(w, m))


def test_witness_checks():
    s = BipartiteShape(2, 2, 1, 1)
    m = BipartiteMatrix.from_flat(s, [1, 2, 3, 4])
    good = LocalEquivWitness.identity(s)
    assert good.is_identity() and apply_local(good, m) == m
    singular = LocalEquivWitness(ExactMatrix.zeros(2, 2), good.p2, good.q1, good.q2)
    with pytest.raises(NotInvertibleError):
        apply_local(singular, m)
    wrong = LocalEquivWitness(ExactMatrix.identity(3), good.p2, good.q1, good.q2)
    with pytest.raises(ShapeMismatchError):
        apply_local(wrong, m)


# construction


def test_from_blocks_checks_shapes():
    s = BipartiteShape(1, 2, 2, 2)
    with pytest.raises(ShapeMismatchError):
        from_blocks(s, [[ExactMatrix.identity(2), ExactMatrix.identity(3)]])
    with pytest.raises(ShapeMismatchError):
        from_blocks(s, [[ExactMatrix.identity(2)]])


@pytest.mark.parametrize("dims", [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 1.5, 1)])
def test_shape_validation(dims):
    with pytest.raises(ShapeMismatchError):
        BipartiteShape(*dims)


def test_block_diagonal_predicate():
    i2 = ExactMatrix.identity(2)
    z = ExactMatrix.zeros(2, 2)
    s = BipartiteShape(2, 2, 2, 2)
    assert is_block_diagonal(from_blocks(s, [[i2, z], [z, i2]]))
    assert not is_block_diagonal(from_blocks(s, [[i2, i2], [z, i2]]))


@given(shapes())
def test_shape_sizes(s):
    assert s.rows == s.m1 * s.m2 and s.cols == s.n1 * s.n2 and s.size == s.rows * s.cols
