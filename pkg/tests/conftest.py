from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ptrank import BipartiteMatrix, BipartiteShape, ExactMatrix

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_rationals = st.builds(
    Fraction, st.integers(min_value=-4, max_value=4), st.integers(min_value=1, max_value=3)
)


@st.composite
def matrices(draw, rows=None, cols=None, max_dim: int = 4, entries=small_rationals) -> ExactMatrix:
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    return ExactMatrix(r, c, draw(st.lists(entries, min_size=r * c, max_size=r * c)))


@st.composite
def shapes(draw, max_dim: int = 3) -> BipartiteShape:
    return BipartiteShape(*(draw(st.integers(1, max_dim)) for _ in range(4)))


@st.composite
def bipartite(draw, shape=None, max_dim: int = 3, entries=small_rationals) -> BipartiteMatrix:
    s = shape if shape is not None else draw(shapes(max_dim))
    data = draw(st.lists(entries, min_size=s.size, max_size=s.size))
    return BipartiteMatrix.from_flat(s, data)


@st.composite
def invertible(draw, n: int) -> ExactMatrix:
    from ptrank.linalg import is_invertible

    m = draw(matrices(n, n, entries=st.integers(-2, 2).map(Fraction)))
    # unit upper-triangular fallback keeps the strategy total
    if is_invertible(m):
        return m
    return ExactMatrix.identity(n) + ExactMatrix(
        n, n, [m[i, j] if j > i else 0 for i in range(n) for j in range(n)]
    )


# acceptance summary

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE[number] = (title, ok, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
