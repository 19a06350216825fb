"""Immutable dense matrices over the rationals.

Entries are stored as :class:`fractions.Fraction` in a flat row-major tuple.
Floats are rejected on construction so that no inexact value can leak into a
rank computation.
"""

from __future__ import annotations

import numbers
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from ptrank.errors import ParseError, ShapeMismatchError

Scalar = Union[int, Fraction, str]

_SMALL = {k: Fraction(k) for k in range(-16, 17)}
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (q > 0) into a canonical Fraction."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"invalid rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"invalid rational {text!r}: zero denominator")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(x)


def to_rational(x: object) -> Fraction:
    if type(x) is Fraction:
        return x  # type: ignore[return-value]
    if type(x) is int:
        f = _SMALL.get(x)  # type: ignore[call-overload]
        return f if f is not None else Fraction(x)  # type: ignore[arg-type]
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class ExactMatrix:
    """Dense rows x cols matrix of Fractions. Hashable and immutable."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Scalar]):
        if rows < 0 or cols < 0:
            raise ShapeMismatchError(f"negative shape {rows}x{cols}")
        entries = tuple(to_rational(x) for x in data)
        if len(entries) != rows * cols:
            raise ShapeMismatchError(
                f"{len(entries)} entries for a {rows}x{cols} matrix"
            )
        self.rows = rows
        self.cols = cols
        self.data = entries
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "ExactMatrix":
        # data must already be a tuple of Fractions of the right length
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.data = data
        m._hash = None
        return m

    # constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> "ExactMatrix":
        rows = list(rows)
        if not rows:
            return cls(0, cols or 0, ())
        ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatchError("ragged rows")
        return cls(len(rows), ncols, (x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls._raw(rows, cols, (_SMALL[0],) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        one, zero = _SMALL[1], _SMALL[0]
        return cls._raw(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[Scalar], rows: int | None = None, cols: int | None = None) -> "ExactMatrix":
        vals = [to_rational(v) for v in values]
        rows = len(vals) if rows is None else rows
        cols = rows if cols is None else cols
        zero = _SMALL[0]
        data = [zero] * (rows * cols)
        for i, v in enumerate(vals):
            data[i * cols + i] = v
        return cls._raw(rows, cols, tuple(data))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "ExactMatrix":
        """Matrix unit with a single 1 at (i, j)."""
        data = [_SMALL[0]] * (rows * cols)
        data[i * cols + j] = _SMALL[1]
        return cls._raw(rows, cols, tuple(data))

    @classmethod
    def column(cls, values: Sequence[Scalar]) -> "ExactMatrix":
        return cls(len(values), 1, values)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.data[j::self.cols] if self.cols else ()

    def iter_rows(self) -> Iterator[tuple[Fraction, ...]]:
        for i in range(self.rows):
            yield self.row(i)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.iter_rows()]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        c = self.cols
        data = tuple(x for i in range(r0, r1) for x in self.data[i * c + c0:i * c + c1])
        return ExactMatrix._raw(r1 - r0, c1 - c0, data)

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "ExactMatrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        c = self.cols
        data = tuple(self.data[i * c + j] for i in rows for j in cols)
        return ExactMatrix._raw(len(rows), len(cols), data)

    # predicates

    def is_zero(self) -> bool:
        return not any(self.data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_diagonal(self) -> bool:
        c = self.cols
        return all(x == 0 for k, x in enumerate(self.data) if k // c != k % c) if c else True

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.data[i * self.cols + i] for i in range(min(self.rows, self.cols)))

    # arithmetic

    @property
    def T(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        d = self.data
        return ExactMatrix._raw(c, r, tuple(d[i * c + j] for j in range(c) for i in range(r)))

    def _check_same(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._raw(self.rows, self.cols, tuple(-a for a in self.data))

    def scale(self, c: Scalar) -> "ExactMatrix":
        c = to_rational(c)
        return ExactMatrix._raw(self.rows, self.cols, tuple(c * a for a in self.data))

    def __mul__(self, c: object) -> "ExactMatrix":
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)  # type: ignore[arg-type]

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        bcols = [b[j::m] for j in range(m)] if m else []
        zero = _SMALL[0]
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            nz = [(t, x) for t, x in enumerate(arow) if x]
            for j in range(m):
                col = bcols[j]
                s = zero
                for t, x in nz:
                    y = col[t]
                    if y:
                        s += x * y
                out.append(s)
        return ExactMatrix._raw(n, m, tuple(out))

    # comparison / display

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.iter_rows())
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    def pretty(self) -> str:
        cells = [[str(x) for x in r] for r in self.iter_rows()]
        if not cells:
            return f"<empty {self.rows}x{self.cols}>"
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def hstack(*mats: ExactMatrix) -> ExactMatrix:
    if not mats:
        raise ShapeMismatchError("nothing to stack")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ShapeMismatchError("hstack needs equal row counts")
    data = tuple(x for i in range(rows) for m in mats for x in m.row(i))
    return ExactMatrix._raw(rows, sum(m.cols for m in mats), data)


def vstack(*mats: ExactMatrix) -> ExactMatrix:
    if not mats:
        raise ShapeMismatchError("nothing to stack")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ShapeMismatchError("vstack needs equal column counts")
    return ExactMatrix._raw(sum(m.rows for m in mats), cols, tuple(x for m in mats for x in m.data))


def block_matrix(grid: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
    return vstack(*(hstack(*row) for row in grid))


def block_diag(*mats: ExactMatrix) -> ExactMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    data = [_SMALL[0]] * (rows * cols)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                data[(r0 + i) * cols + c0 + j] = m.data[i * m.cols + j]
        r0 += m.rows
        c0 += m.cols
    return ExactMatrix._raw(rows, cols, tuple(data))
