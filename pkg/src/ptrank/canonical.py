"""Generators for the known saturating families.

* :func:`gen_full_schmidt_canonical` builds the matrix whose block ``(i, j)``
  is ``E_ij``: a ``kr x kr`` matrix holding ``I_r`` at block position
  ``(i, j)`` and zeros elsewhere, with ``k = max(m1, n1)``.
* :func:`gen_vector_case` builds column-vector families ``R_j`` with
  coefficient matrices ``S_j`` whose stacked rank is ``d`` and side-by-side
  rank is ``K*d``.
* :func:`gen_sr2_case` builds the two saturating Schmidt-rank-two patterns
  for 2x2 outer factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ptrank.bipartite import BipartiteMatrix, BipartiteShape, from_blocks
from ptrank.errors import InfeasibleParametersError
from ptrank.matrix import ExactMatrix

_ONE = Fraction(1)
_ZERO = Fraction(0)


@dataclass(frozen=True)
class CanonicalSpec:
    m1: int
    n1: int
    r: int

    def __post_init__(self) -> None:
        if min(self.m1, self.n1, self.r) < 1:
            raise InfeasibleParametersError(f"m1, n1, r must be >= 1, got {self}")

    @property
    def k(self) -> int:
        return max(self.m1, self.n1)

    @property
    def inner_order(self) -> int:
        return self.k * self.r


def e_block(r: int, i: int, j: int, rows: int, cols: int) -> ExactMatrix:
    """``rows x cols`` zero matrix with ``I_r`` on rows ``i*r..`` and cols ``j*r..``."""
    if (i + 1) * r > rows or (j + 1) * r > cols:
        raise InfeasibleParametersError(f"I_{r} at block ({i},{j}) does not fit in {rows}x{cols}")
    data = [_ZERO] * (rows * cols)
    for t in range(r):
        data[(i * r + t) * cols + j * r + t] = _ONE
    return ExactMatrix._raw(rows, cols, tuple(data))


def full_schmidt_form(m1: int, n1: int, r: int, m2: int, n2: int) -> BipartiteMatrix:
    """The canonical form zero-padded to ``m2 x n2`` inner blocks."""
    shape = BipartiteShape(m1, n1, m2, n2)
    return from_blocks(shape, [[e_block(r, i, j, m2, n2) for j in range(n1)] for i in range(m1)])


def gen_full_schmidt_canonical(m1: int, n1: int, r: int) -> BipartiteMatrix:
    spec = CanonicalSpec(m1, n1, r)
    return full_schmidt_form(m1, n1, r, spec.inner_order, spec.inner_order)


def gen_vector_case(K: int, m2: int, n2: int, d: int) -> tuple[list[ExactMatrix], list[ExactMatrix]]:
    """Saturating column-vector family with ``m1 = K``.

    ``R_j = e_j`` and ``S_j`` carries the standard basis vectors
    ``e_{(j-1)d+1} .. e_{jd}`` of Q^m2 in its first ``d`` columns.
    """
    if K < 2 or d < 1 or m2 < 1 or n2 < 1:
        raise InfeasibleParametersError(f"need K >= 2 and d, m2, n2 >= 1 (K={K}, d={d}, m2={m2}, n2={n2})")
    if K * d > m2:
        raise InfeasibleParametersError(f"K*d = {K * d} exceeds m2 = {m2}")
    if d > n2:
        raise InfeasibleParametersError(f"d = {d} exceeds n2 = {n2}")
    rs = [ExactMatrix.unit(K, 1, j, 0) for j in range(K)]
    ss = []
    for j in range(K):
        data = [_ZERO] * (m2 * n2)
        for col in range(d):
            data[(j * d + col) * n2 + col] = _ONE
        ss.append(ExactMatrix._raw(m2, n2, tuple(data)))
    return rs, ss


def gen_sr2_case(case: str, m2: int, n2: int, d: int) -> BipartiteMatrix:
    """Saturating Schmidt-rank-two matrix at shape ``(2, 2, m2, n2)``.

    Case ``"i"``: ``R_1 = E11``, ``R_2 = E21``; ``[S1; S2]`` has rank ``d``
    and ``[S1, S2]`` rank ``2d`` (needs ``2d <= m2``, ``d <= n2``).
    Case ``"ii"`` is the transpose pattern: ``R_2 = E12`` and the roles of
    the two ranks swap (needs ``2d <= n2``, ``d <= m2``).
    """
    case = case.lower()
    if case == "i":
        _, ss = gen_vector_case(2, m2, n2, d)
        r2 = ExactMatrix.unit(2, 2, 1, 0)
    elif case == "ii":
        _, ts = gen_vector_case(2, n2, m2, d)
        ss = [t.T for t in ts]
        r2 = ExactMatrix.unit(2, 2, 0, 1)
    else:
        raise InfeasibleParametersError(f"unknown case {case!r}; expected 'i' or 'ii'")
    return BipartiteMatrix.from_terms([(ExactMatrix.unit(2, 2, 0, 0), ss[0]), (r2, ss[1])])
