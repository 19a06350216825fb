"""Exact linear algebra over the rationals.

Rank and determinant clear denominators row by row and run fraction-free
elimination in the integer kernels (:mod:`ptrank.kernels`). Everything that
must return a transformation (rref witnesses, normal forms, inverses) runs
Gauss-Jordan directly on Fractions; pivots are the first nonzero entry in
column order, so outputs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ptrank import kernels
from ptrank.errors import (
    NotInvertibleError,
    ShapeMismatchError,
    ZeroMatrixError,
)
from ptrank.matrix import ExactMatrix, hstack, to_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _integer_rows(m: ExactMatrix) -> list[int]:
    """Scale each row by the lcm of its denominators; row scaling keeps rank."""
    out: list[int] = []
    c = m.cols
    d = m.data
    for i in range(m.rows):
        row = d[i * c:(i + 1) * c]
        den = 1
        for x in row:
            q = x.denominator
            if q != 1:
                den = lcm(den, q)
        if den == 1:
            out.extend(x.numerator for x in row)
        else:
            out.extend(x.numerator * (den // x.denominator) for x in row)
    return out


def rank(m: ExactMatrix) -> int:
    """Exact rank."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.rows > m.cols:
        m = m.T
    return kernels.rank_int(_integer_rows(m), m.rows, m.cols)


def det(m: ExactMatrix) -> Fraction:
    if not m.is_square():
        raise ShapeMismatchError(f"determinant of non-square {m.shape}")
    n = m.rows
    flat: list[int] = []
    scale = 1
    for i in range(n):
        row = m.data[i * n:(i + 1) * n]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        scale *= den
        flat.extend(x.numerator * (den // x.denominator) for x in row)
    return Fraction(kernels.det_int(flat, n), scale)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product; entry (i*rb + k, j*cb + l) is a[i,j]*b[k,l]."""
    ra, ca, rb, cb = a.rows, a.cols, b.rows, b.cols
    ad, bd = a.data, b.data
    zero_row = (_ZERO,) * cb
    data = []
    for i in range(ra):
        arow = ad[i * ca:(i + 1) * ca]
        for k in range(rb):
            brow = bd[k * cb:(k + 1) * cb]
            for x in arow:
                if x:
                    data.extend(x * y for y in brow)
                else:
                    data.extend(zero_row)
    return ExactMatrix._raw(ra * rb, ca * cb, tuple(data))


def _gauss_jordan(m: ExactMatrix, track: bool):
    rows, cols = m.rows, m.cols
    a = [list(m.row(i)) for i in range(rows)]
    p = [[_ONE if i == j else _ZERO for j in range(rows)] for i in range(rows)] if track else None
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = r
        while k < rows and a[k][c] == 0:
            k += 1
        if k == rows:
            continue
        if k != r:
            a[k], a[r] = a[r], a[k]
            if p is not None:
                p[k], p[r] = p[r], p[k]
        piv = a[r][c]
        if piv != 1:
            inv = 1 / piv
            a[r] = [x * inv for x in a[r]]
            if p is not None:
                p[r] = [x * inv for x in p[r]]
        prow = a[r]
        pw = p[r] if p is not None else None
        for i in range(rows):
            if i == r:
                continue
            f = a[i][c]
            if f == 0:
                continue
            a[i] = [x - f * y for x, y in zip(a[i], prow)]
            if p is not None:
                p[i] = [x - f * y for x, y in zip(p[i], pw)]
        pivots.append(c)
        r += 1
    rmat = ExactMatrix._raw(rows, cols, tuple(x for row in a for x in row))
    pmat = ExactMatrix._raw(rows, rows, tuple(x for row in p for x in row)) if p is not None else None
    return rmat, pmat, pivots


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    r, _, piv = _gauss_jordan(m, track=False)
    return r, piv


def rref_with_witness(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Return ``(R, P)`` with ``P`` invertible, ``P @ m == R`` and ``R`` in rref."""
    r, p, _ = _gauss_jordan(m, track=True)
    return r, p


def full_rank_factorization(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Column-row factorization ``m == C @ F``.

    ``C`` holds the pivot columns of ``m`` and ``F`` the nonzero rows of its
    rref, so both have full rank ``r = rank(m)``.
    """
    r, piv = rref(m)
    if not piv:
        raise ZeroMatrixError("full-rank factorization of a zero matrix")
    return m.select(cols=piv), r.select(rows=range(len(piv)))


def inverse(m: ExactMatrix) -> ExactMatrix:
    if not m.is_square():
        raise NotInvertibleError(f"non-square {m.shape} matrix")
    r, p, piv = _gauss_jordan(m, track=True)
    if len(piv) != m.rows:
        raise NotInvertibleError("singular matrix")
    return p


def is_invertible(m: ExactMatrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def nullspace(m: ExactMatrix) -> list[ExactMatrix]:
    """Basis of the right kernel as column vectors."""
    r, piv = rref(m)
    free = [j for j in range(m.cols) if j not in piv]
    basis = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, pc in enumerate(piv):
            v[pc] = -r[i, f]
        basis.append(ExactMatrix._raw(m.cols, 1, tuple(v)))
    return basis


def column_basis(m: ExactMatrix) -> ExactMatrix:
    """Independent columns of ``m`` spanning its range (pivot columns)."""
    _, piv = rref(m)
    return m.select(cols=piv)


def complete_basis(u: ExactMatrix) -> ExactMatrix:
    """Extend a full-column-rank ``u`` to an invertible matrix ``[u | E]``.

    The extra columns are standard basis vectors, taken greedily in order.
    """
    n, k = u.shape
    if rank(u) != k:
        raise ShapeMismatchError("columns are not linearly independent")
    full = hstack(u, ExactMatrix.identity(n)) if k else ExactMatrix.identity(n)
    _, piv = rref(full)
    return full.select(cols=piv)


def rank_normal_form(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix, int]:
    """Invertible ``P``, ``Q`` with ``P @ m @ Q == diag(I_r, 0)``."""
    r_mat, p = rref_with_witness(m)
    # rows of r_mat beyond the rank are zero, so rref(r_mat.T) is diag(I_r, 0)
    _, p2 = rref_with_witness(r_mat.T)
    q = p2.T
    return p, q, rank(m)


def span_contains(basis: Sequence[ExactMatrix], x: ExactMatrix) -> bool:
    """True when ``x`` is a linear combination of the equally shaped ``basis``."""
    if not basis:
        return x.is_zero()
    rows = [b.data for b in basis]
    base = ExactMatrix._raw(len(rows), len(rows[0]), tuple(v for r in rows for v in r))
    ext = ExactMatrix._raw(len(rows) + 1, len(rows[0]), base.data + x.data)
    return rank(ext) == rank(base)


def linearly_independent(mats: Sequence[ExactMatrix]) -> bool:
    """Whether equally shaped matrices are linearly independent as vectors."""
    if not mats:
        return True
    width = len(mats[0].data)
    if any(len(m.data) != width for m in mats):
        raise ShapeMismatchError("matrices of different sizes")
    stacked = ExactMatrix._raw(len(mats), width, tuple(v for m in mats for v in m.data))
    return rank(stacked) == len(mats)


# pencils


@dataclass(frozen=True)
class PencilDirection:
    """One irreducible factor of ``det(a*A + b*B)``.

    Linear factors carry their projective root ``point = (a, b)`` (integers,
    coprime, first nonzero coordinate positive). Higher-degree factors have no
    rational root; they are reported by ``degree`` with ``point = None``.
    """

    point: tuple[Fraction, Fraction] | None
    degree: int
    multiplicity: int
    factor: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class PencilRoots:
    regular: bool
    directions: tuple[PencilDirection, ...]
    count_with_multiplicity: int
    coefficients: tuple[Fraction, ...] = field(default=())

    @property
    def rational_points(self) -> list[tuple[Fraction, Fraction]]:
        return [d.point for d in self.directions if d.point is not None]


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients (low to high) of the interpolating polynomial."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [_ZERO] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        new = [_ZERO] * n
        for t in range(n - 1):
            new[t + 1] += poly[t]
        for t in range(n):
            new[t] -= xs[k] * poly[t]
        new[0] += coef[k]
        poly = new
    return poly


def pencil_determinant(a: ExactMatrix, b: ExactMatrix) -> tuple[Fraction, ...]:
    """Coefficients ``c_k`` with ``det(s*a + t*b) = sum_k c_k s^(n-k) t^k``."""
    if not (a.is_square() and a.shape == b.shape):
        raise ShapeMismatchError("pencil needs two square matrices of equal order")
    n = a.rows
    xs = [Fraction(t) for t in range(n + 1)]
    ys = [det(a + b.scale(t)) for t in xs]
    return tuple(_interpolate(xs, ys))


def normalize_direction(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    den = lcm(a.denominator, b.denominator)
    ai, bi = int(a * den), int(b * den)
    g = gcd(ai, bi) or 1
    ai, bi = ai // g, bi // g
    if ai < 0 or (ai == 0 and bi < 0):
        ai, bi = -ai, -bi
    return Fraction(ai), Fraction(bi)


def is_regular_pencil(a: ExactMatrix, b: ExactMatrix) -> bool:
    """Whether ``det(s*a + t*b)`` is not identically zero."""
    return any(pencil_determinant(a, b))


@lru_cache(maxsize=4096)
def _factor_binary_form(coeffs: tuple[Fraction, ...]) -> tuple[tuple[PencilDirection, ...], int]:
    import sympy

    n = len(coeffs) - 1
    s, t = sympy.symbols("s t")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * s ** (n - k) * t ** k
        for k, c in enumerate(coeffs)
        if c
    )
    _, factors = sympy.factor_list(sympy.Poly(expr, s, t, domain="QQ"))
    dirs = []
    total = 0
    for f, mult in factors:
        deg = f.total_degree()
        total += deg * mult
        monomials = [f.coeff_monomial(s ** (deg - k) * t ** k) for k in range(deg + 1)]
        fc = tuple(Fraction(int(c.p), int(c.q)) for c in monomials)
        if deg == 1:
            p, q = fc  # p*s + q*t vanishes at (q : -p)
            dirs.append(PencilDirection(normalize_direction(q, -p), 1, mult, fc))
        else:
            dirs.append(PencilDirection(None, deg, mult, fc))
    dirs.sort(key=lambda d: (d.point is None, d.point or (0, 0), d.degree))
    return tuple(dirs), total


def pencil_singular_directions(a: ExactMatrix, b: ExactMatrix) -> PencilRoots:
    """Projective directions ``(s:t)`` where ``s*a + t*b`` drops rank.

    The binary form ``det(s*a + t*b)`` is computed exactly and factored over
    the rationals. If it vanishes identically the pencil is singular and
    ``regular`` is False.
    """
    coeffs = pencil_determinant(a, b)
    if not any(coeffs):
        return PencilRoots(False, (), 0, coeffs)
    dirs, total = _factor_binary_form(coeffs)
    return PencilRoots(True, dirs, total, coeffs)


def to_matrix(x: ExactMatrix | Sequence[Sequence[object]]) -> ExactMatrix:
    if isinstance(x, ExactMatrix):
        return x
    return ExactMatrix.from_rows([[to_rational(v) for v in r] for r in x])


def rank_mod_p(m: ExactMatrix, p: int) -> int:
    """Rank over GF(p) of a matrix whose denominators are prime to ``p``.

    Experimental: small-characteristic ranks can differ from rational ranks.
    """
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    rows = []
    for i in range(m.rows):
        row = []
        for x in m.row(i):
            if x.denominator % p == 0:
                raise ValueError(f"denominator of {x} is divisible by {p}")
            row.append(x.numerator * pow(x.denominator, -1, p) % p)
        rows.append(row)
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        for i in range(r + 1, len(rows)):
            f = rows[i][c] * inv % p
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r
