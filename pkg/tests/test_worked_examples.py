"""Small hand-checkable instances for each public operation."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from ptrank import io, oracle
from ptrank import sampling as smp
from ptrank.analysis import (
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
    from_blocks,
    gamma_rank,
    partial_transpose,
    realign,
    schmidt_decompose,
    schmidt_rank,
    transpose,
)
from ptrank.canonical import gen_full_schmidt_canonical, gen_sr2_case, gen_vector_case
from ptrank.cli import main
from ptrank.errors import InfeasibleParametersError, NoFullRankInSpanError
from ptrank.linalg import full_rank_factorization, kron, pencil_singular_directions, rank, rref_with_witness
from ptrank.matrix import ExactMatrix as E

I2 = E.identity(2)
SHAPE_2222 = BipartiteShape(2, 2, 2, 2)
B = E.from_rows([[1, 2], [3, 5]])


def unit(i, j):
    return E.unit(2, 2, i, j)


# exact linear algebra


@pytest.mark.parametrize("m, r", [(E.identity(3), 3), (E.zeros(2, 4), 0), (E.from_rows([[1, 2], [2, 4]]), 1)])
def test_rank_examples(m, r):
    assert rank(m) == r


@pytest.mark.parametrize(
    "m, reduced",
    [
        (I2, I2),
        (E.from_rows([[0, 1], [1, 0]]), I2),
        (E.from_rows([[2, 4], [1, 2]]), E.from_rows([[1, 2], [0, 0]])),
    ],
)
def test_rref_witness_examples(m, reduced):
    r, p = rref_with_witness(m)
    assert r == reduced and p @ m == r


def test_rref_witness_of_permutation_is_the_permutation():
    swap = E.from_rows([[0, 1], [1, 0]])
    assert rref_with_witness(swap)[1] == swap


@pytest.mark.parametrize(
    "m, c, f",
    [
        (E.identity(3), E.identity(3), E.identity(3)),
        (E.from_rows([[1, 2], [2, 4]]), E.column([1, 2]), E.from_rows([[1, 2]])),
        (E.diag([1, 0]), E.column([1, 0]), E.from_rows([[1, 0]])),
    ],
)
def test_full_rank_factorization_examples(m, c, f):
    assert full_rank_factorization(m) == (c, f)


def test_kron_examples():
    assert kron(I2, B) == E.from_rows([[1, 2, 0, 0], [3, 5, 0, 0], [0, 0, 1, 2], [0, 0, 3, 5]])
    assert kron(E.identity(1), B) == B
    assert kron(E.diag([1, 0]), E.diag([1, 0])) == E.diag([1, 0, 0, 0])


def test_pencil_examples():
    roots = pencil_singular_directions(I2, E.diag([1, 2]))
    assert roots.regular and roots.count_with_multiplicity == 2
    assert sorted(roots.rational_points) == [(1, -1), (2, -1)]
    double = pencil_singular_directions(I2, I2)
    assert [(d.point, d.multiplicity) for d in double.directions] == [((1, -1), 2)]
    assert not pencil_singular_directions(E.diag([1, 0]), E.zeros(2, 2)).regular


# bipartite layer


def test_from_blocks_examples():
    one = from_blocks(BipartiteShape(1, 1, 2, 2), [[B]])
    assert one.data == B
    z = E.zeros(2, 2)
    assert from_blocks(SHAPE_2222, [[B, z], [z, B]]).data == kron(I2, B)


def test_canonical_four_by_four_layout():
    m = gen_full_schmidt_canonical(2, 2, 1)
    assert m.data == E.from_rows([[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]])


def test_realign_and_schmidt_rank_examples():
    assert rank(realign(BipartiteMatrix.from_kron(B, I2))) == 1
    assert rank(realign(gen_full_schmidt_canonical(2, 3, 1))) == 6
    assert rank(realign(BipartiteMatrix(SHAPE_2222, E.zeros(4, 4)))) == 0
    for r in (1, 2, 3):
        assert schmidt_rank(gen_full_schmidt_canonical(2, 2, r)) == 4
    assert schmidt_rank(gen_full_schmidt_canonical(3, 3, 1)) == 9


def test_schmidt_decompose_examples():
    prod = BipartiteMatrix.from_kron(B, I2)
    dec = schmidt_decompose(prod)
    assert dec.rank == 1 and dec.reconstruct() == prod
    # the 4x4 identity is kron(I2, I2), a single product
    eye = BipartiteMatrix(SHAPE_2222, E.identity(4))
    assert schmidt_decompose(eye).rank == 1 and schmidt_decompose(eye).reconstruct() == eye
    canon = gen_full_schmidt_canonical(2, 2, 1)
    assert schmidt_decompose(canon).rank == 4 and schmidt_decompose(canon).reconstruct() == canon


def test_partial_transpose_examples():
    a = E.from_rows([[1, 2, 0], [0, 1, 1]])
    prod = BipartiteMatrix.from_kron(a, B)
    g = partial_transpose(prod, "B")
    assert g == BipartiteMatrix.from_kron(a, B.T) and rank(g.data) == rank(prod.data)
    z = E.zeros(2, 2)
    block_diag = from_blocks(SHAPE_2222, [[B, z], [z, I2]])
    assert partial_transpose(block_diag, "A") == block_diag
    canon = gen_full_schmidt_canonical(2, 2, 1)
    assert rank(canon.data) == 1 and rank(partial_transpose(canon, "A").data) == 4


def test_apply_local_examples():
    m = smp.rand_bipartite(random.Random(3), SHAPE_2222)
    assert apply_local(LocalEquivWitness.identity(SHAPE_2222), m) == m
    swap = E.from_rows([[0, 1], [1, 0]])
    w = LocalEquivWitness(swap, I2, I2, I2)
    out = apply_local(w, m)
    assert out.blocks() == [m.blocks()[1], m.blocks()[0]]
    assert schmidt_rank(out) == schmidt_rank(m)


# equality analysis


def test_check_inequality_examples():
    prod = check_inequality(BipartiteMatrix.from_kron(B, E.from_rows([[1, 0, 1]])))
    assert prod.schmidt_rank == 1 and prod.rank_gamma == prod.rank and prod.saturated
    canon = check_inequality(gen_full_schmidt_canonical(2, 2, 1))
    assert (canon.rank, canon.schmidt_rank, canon.rank_gamma, canon.saturated) == (1, 4, 4, True)


def test_identity_is_saturated():
    # kron(I2, I2): Sr 1, rank 4, partial transpose rank 4, gap 0
    rep = check_inequality(BipartiteMatrix(SHAPE_2222, E.identity(4)))
    assert (rep.schmidt_rank, rep.rank, rep.rank_gamma, rep.gap, rep.saturated) == (1, 4, 4, 0, True)


@pytest.mark.parametrize("dims, bound", [((2, 1, 2, 2), 2), ((1, 1, 1, 1), 1), ((2, 3, 4, 5), 10)])
def test_kmax_examples(dims, bound):
    assert kmax_bound(BipartiteShape(*dims)) == bound


def test_vector_case_examples():
    e1, e2 = E.column([1, 0]), E.column([0, 1])
    rep, cert = analyze_vector_case([e1, e2], [e1, e2])
    assert rep.saturated and cert.d == 1 and (rep.rank, rep.rank_gamma) == (1, 2)
    # with single-column S any independent pair saturates: side rank 2 = 2 * stacked rank 1
    rep, _ = analyze_vector_case([e1, e2], [e1, E.column([1, 1])])
    assert rep.saturated and rep.details["stacked_rank"] == 1
    # two columns give room for side rank < 2d
    rep, cert = analyze_vector_case([e1, e2], [I2, E.from_rows([[0, 1], [1, 0]])])
    assert rep.details["side_rank"] < 2 * rep.details["stacked_rank"] and not rep.saturated and cert is None


def test_2x2_examples():
    s1, s2 = E.from_rows([[1, 0], [0, 0]]), E.from_rows([[0, 0], [1, 0]])
    # column pattern: R2 = E21, stacked [S1; S2] has rank 1, side-by-side [S1, S2] rank 2
    col = BipartiteMatrix.from_terms([(unit(0, 0), s1), (unit(1, 0), s2)])
    rep, case, w = analyze_2x2_sr2(col)
    assert rep.saturated and rep.details["pattern"] == "column" and case == "i" and w is not None
    # row pattern: R2 = E12 with the transposed inner factors
    row = BipartiteMatrix.from_terms([(unit(0, 0), s1.T), (unit(0, 1), s2.T)])
    rep, case, _ = analyze_2x2_sr2(row)
    assert rep.saturated and rep.details["pattern"] == "row" and case == "ii"
    # the row pattern with untransposed factors falls short
    rep, _, _ = analyze_2x2_sr2(BipartiteMatrix.from_terms([(unit(0, 0), s1), (unit(0, 1), s2)]))
    assert not rep.saturated and (rep.rank, rep.rank_gamma) == (2, 1)
    diag = BipartiteMatrix.from_terms([(unit(0, 0), s1), (unit(1, 1), s2)])
    rep, case, _ = analyze_2x2_sr2(diag)
    assert not rep.saturated and case is None


def test_sr3_examples():
    rng = random.Random(5)
    s = [smp.rand_any_rank(rng, 3, 3, smp.SMALL_INTEGERS) for _ in range(3)]
    z = E.zeros(3, 3)
    shape = BipartiteShape(2, 2, 3, 3)
    # [S1, S2; S3, 0] and the symmetric [S1, S2; S2, S3]
    for grid in ([[s[0], s[1]], [s[2], z]], [[s[0], s[1]], [s[1], s[2]]]):
        m = from_blocks(shape, grid)
        assert schmidt_rank(m) == 3
        assert not analyze_sr3_order4(m).saturated


def test_full_schmidt_examples():
    rep, w = analyze_full_schmidt(gen_full_schmidt_canonical(2, 2, 1))
    assert rep.saturated and (rep.rank, rep.rank_gamma) == (1, 4) and w.is_identity()
    rep, _ = analyze_full_schmidt(gen_full_schmidt_canonical(2, 3, 1))
    assert rep.saturated and (rep.rank, rep.rank_gamma) == (1, 6)
    # the four matrix units, rearranged so the assembled matrix has rank 2
    m = from_blocks(SHAPE_2222, [[unit(0, 0), unit(0, 1)], [unit(1, 1), unit(1, 0)]])
    rep, w = analyze_full_schmidt(m)
    assert (rep.schmidt_rank, rep.rank) == (4, 2) and not rep.saturated and w is None


def test_reduce_sr2_examples():
    m = BipartiteMatrix.from_terms([(E.diag([1, 0]), E.diag([1, 0])), (E.diag([0, 1]), E.diag([0, 1]))])
    red = reduce_sr2(m)
    assert red.witness.is_identity() and red.reduced == m
    rng = random.Random(1)
    found = 0
    for _ in range(50):
        m = smp.rand_terms(rng, BipartiteShape(2, 2, 3, 3), 2, smp.SMALL_INTEGERS)
        if schmidt_rank(m) != 2:
            continue
        red = reduce_sr2(m)
        assert apply_local(red.witness, m) == red.reduced and rank(red.reduced.data) == rank(m.data)
        if rank(schmidt_decompose(m).a_factors[0]) == 2:
            found += 1
            assert red.parameters()["r"] == 2 and red.parameters()["k"] == 0
    assert found > 0


def test_sr2_normalize_examples():
    one = E.identity(1)
    res = sr2_normalize(I2, one, E.diag([0, 1]), one)
    assert res.shifts == (0,)
    assert sr2_normalize(E.diag([1, 0]), one, E.diag([0, 1]), one).shifts == (1,)
    with pytest.raises(NoFullRankInSpanError):
        sr2_normalize(E.diag([1, 0]), one, E.diag([2, 0]), one)


def test_pencil_rank_examples():
    d = E.from_rows([[0, 1], [0, 0]])
    assert sr2_rank_via_pencil(E.diag([1, 0]), E.diag([0, 1]), B, d) == rank(B) + rank(d)
    assert sr2_rank_via_pencil(I2, E.zeros(2, 2), d, B) == 2 * rank(d)
    rng = random.Random(2)
    bb, dd = smp.rand_any_rank(rng, 3, 3), smp.rand_any_rank(rng, 3, 3)
    a, c = E.diag([1, 2]), E.diag([1, 1])
    assert sr2_rank_via_pencil(a, c, bb, dd) == rank(kron(a, bb) + kron(c, dd))


def test_eigen_sum_examples():
    spec = eigen_sum_spectrum(I2, E.diag([1, 2]), E.diag([3, 4]), I2)
    assert sorted(spec.values) == [4, 5, 5, 6]
    b, d = E.diag([3, 4]), E.diag([2, 1])
    spec = eigen_sum_spectrum(I2, E.zeros(2, 2), b, d)
    assert sorted(spec.values) == sorted([Fraction(3, 2), 4] * 2)
    spec = eigen_sum_spectrum(E.diag([1, 2]), E.diag([2, 2]), E.diag([1, 0]), I2)
    assert spec.outer_ratios == (2, 1) and spec.inner_ratios == (1, 0)
    assert sorted(spec.values) == [1, 2, 2, 3]


# generators


def test_generator_examples():
    m = gen_full_schmidt_canonical(3, 3, 2)
    assert (rank(m.data), schmidt_rank(m), gamma_rank(m)) == (2, 9, 18)
    rs, ss = gen_vector_case(2, 2, 1, 1)
    assert ss == [E.column([1, 0]), E.column([0, 1])]
    rs, ss = gen_vector_case(2, 4, 2, 2)
    from ptrank.matrix import hstack, vstack

    assert (rank(vstack(*ss)), rank(hstack(*ss))) == (2, 4)
    with pytest.raises(InfeasibleParametersError):
        gen_vector_case(3, 2, 1, 1)


def test_sr2_generator_examples():
    a = gen_sr2_case("i", 2, 1, 1)
    assert (rank(a.data), gamma_rank(a)) == (1, 2)
    b = gen_sr2_case("ii", 1, 2, 1)
    # the two patterns are transposes of each other
    assert transpose(a) == b
    c = gen_sr2_case("i", 4, 2, 2)
    assert (rank(c.data), gamma_rank(c)) == (2, 4)


# oracle and CLI


def test_oracle_examples():
    small = oracle.SearchSpace(BipartiteShape(2, 1, 2, 1))
    assert oracle.exhaustive_check(small, "sr-invariance").passed
    report = oracle.random_check(oracle.SearchSpace(BipartiteShape(2, 2, 3, 3), smp.SMALL_RATIONALS), "inequality", 10000, seed=6)
    assert report.instances == 10000 and report.passed
    for name in ("block-diagonal-gamma", "full-schmidt-canonical"):
        assert oracle.lemma_suite(name).passed


def test_cli_examples(tmp_path, capsys):
    path = tmp_path / "eye.json"
    io.dump(BipartiteMatrix(SHAPE_2222, E.identity(4)), path)
    assert main(["analyze", str(path)]) == 0
    assert capsys.readouterr().out.startswith("saturated, Sr=1, rank=4, rankΓ=4, bound=4")
    out = tmp_path / "x23.json"
    assert main(["generate", "--family=full-schmidt", "--m1=2", "--n1=3", "--r=1", f"--out={out}"]) == 0
    assert io.load(out) == gen_full_schmidt_canonical(2, 3, 1)
    assert main(["generate", "--family=vector", "--K=2", "--m2=2", "--n2=1", "--d=1", f"--out={out}"]) == 0
    assert check_inequality(io.load(out)).saturated
    capsys.readouterr()
    assert main(["oracle", "--suite=inequality", "--exhaustive", "--shape=2,2,2,2", "--entries=0,1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["instances"] == 65536
    runs = []
    for _ in range(2):
        main(["fuzz", "--suite=sr-invariance", "--trials=1000", "--seed=7", "--json"])
        doc = json.loads(capsys.readouterr().out)
        doc.pop("elapsed")
        runs.append(doc)
    assert runs[0] == runs[1] and runs[0]["passed"]
