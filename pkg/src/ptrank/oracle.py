"""Brute-force verification: exhaustive enumeration and seeded random suites.

A :class:`Property` pairs a predicate with a sampler and a default run
configuration. Exhaustive runs enumerate every matrix of a
:class:`SearchSpace` in a fixed order; random runs draw instances from a
:class:`random.Random` seeded by the caller. Both return a
:class:`SuiteReport`; equal inputs give equal reports.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Sequence

from ptrank import sampling as smp
from ptrank.analysis import (
    analyze,
    analyze_2x2_sr2,
    analyze_full_schmidt,
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
    schmidt_rank,
    transpose,
)
from ptrank.canonical import full_schmidt_form, gen_full_schmidt_canonical
from ptrank.errors import (
    BudgetExceededError,
    NoFullRankInSpanError,
    PreconditionError,
    PtrankError,
    UnknownSuiteError,
)
from ptrank.io import to_document
from ptrank.linalg import (
    normalize_direction,
    column_basis,
    is_regular_pencil,
    kron,
    linearly_independent,
    nullspace,
    pencil_singular_directions,
    rank,
    rank_mod_p,
    span_contains,
)
from ptrank.matrix import ExactMatrix, block_diag, block_matrix, hstack, vstack

DEFAULT_BUDGET = 2 ** 20
MAX_SERIALIZED = 10
SCHEMA_VERSION = 1


def budget_from_env() -> int:
    value = os.environ.get("PTRANK_BUDGET")
    if not value:
        return DEFAULT_BUDGET
    try:
        budget = int(value)
    except ValueError:
        raise PreconditionError(f"PTRANK_BUDGET must be an integer, got {value!r}") from None
    if budget < 1:
        raise PreconditionError("PTRANK_BUDGET must be positive")
    return budget


# filters (module level so that spaces stay picklable)


def schmidt_rank_three(m: BipartiteMatrix) -> bool:
    return schmidt_rank(m) == 3


def schmidt_rank_two(m: BipartiteMatrix) -> bool:
    return schmidt_rank(m) == 2


def _outer_2x2(m: BipartiteMatrix) -> bool:
    return (m.shape.m1, m.shape.n1) == (2, 2)


def outer_2x2_schmidt_rank_two(m: BipartiteMatrix) -> bool:
    return _outer_2x2(m) and schmidt_rank(m) == 2


def outer_2x2_schmidt_rank_three(m: BipartiteMatrix) -> bool:
    return _outer_2x2(m) and schmidt_rank(m) == 3


def _is_pair(m: BipartiteMatrix) -> bool:
    return (m.shape.m1, m.shape.n1) == (2, 1)


def regular_pencil(m: BipartiteMatrix) -> bool:
    if not _is_pair(m):
        return False
    a, b = _pencil_pair(m)
    return a.is_square() and is_regular_pencil(a, b)


def no_full_rank_in_span(m: BipartiteMatrix) -> bool:
    if not _is_pair(m) or m.shape.m2 < m.shape.n2:
        return False
    a, b = _pencil_pair(m)
    return not _span_has_full_column_rank(a, b)


def nonzero(m: BipartiteMatrix) -> bool:
    return not m.is_zero()


@dataclass(frozen=True)
class SearchSpace:
    """All matrices of ``shape`` with entries from ``entry_set``.

    Enumeration is lexicographic in row-major entry order. ``filter``
    rejects instances before the property runs; rejections are counted.
    """

    shape: BipartiteShape
    entry_set: tuple[Fraction, ...] = (Fraction(0), Fraction(1))
    filter: Callable[[BipartiteMatrix], bool] | None = None

    def __post_init__(self) -> None:
        entries = tuple(Fraction(x) for x in self.entry_set)
        if not entries:
            raise PreconditionError("entry set is empty")
        if len(set(entries)) != len(entries):
            raise PreconditionError("entry set has duplicates")
        object.__setattr__(self, "entry_set", entries)

    @property
    def size(self) -> int:
        return len(self.entry_set) ** self.shape.size

    def iter_range(self, start: int = 0, stop: int | None = None):
        s = self.shape
        product = itertools.product(self.entry_set, repeat=s.size)
        for entries in itertools.islice(product, start, stop):
            yield BipartiteMatrix(s, ExactMatrix._raw(s.rows, s.cols, entries))

    def __iter__(self):
        return self.iter_range()

    def describe(self) -> dict:
        return {
            "shape": list(self.shape.astuple()),
            "entries": [str(x) for x in self.entry_set],
            "filter": getattr(self.filter, "__name__", None),
        }


@dataclass(frozen=True)
class Property:
    """A checkable statement with its default configuration.

    ``check`` returns True when the instance satisfies the statement; raising
    a library error also counts as a violation. ``domain`` rejects instances
    the statement says nothing about (counted as skipped). ``sampler`` draws
    a random instance; when absent, random runs draw matrices from the
    space. Only ``enumerable`` properties take plain matrices and can run
    exhaustively.
    """

    name: str
    description: str
    check: Callable[[Any], bool]
    sampler: Callable[[random.Random, SearchSpace | None], Any] | None = None
    default_mode: str = "random"
    default_space: SearchSpace | None = None
    default_trials: int = 500
    experimental: bool = False
    domain: Callable[[Any], bool] | None = None
    enumerable: bool = False


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    mode: str
    instances: int
    skipped: int
    violation_count: int
    violations: tuple = ()
    seed: int | None = None
    space: dict | None = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "mode": self.mode,
            "instances": self.instances,
            "skipped": self.skipped,
            "violation_count": self.violation_count,
            "violations": list(self.violations),
            "seed": self.seed,
            "space": self.space,
            "elapsed": round(self.elapsed, 6),
            "passed": self.passed,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {self.skipped} filtered" if self.skipped else ""
        return (
            f"{status} {self.suite} [{self.mode}]: {self.instances} tested{extra}, "
            f"{self.violation_count} violations ({self.elapsed:.2f}s)"
        )


# serialization of instances


def encode(obj: Any) -> Any:
    if isinstance(obj, BipartiteMatrix):
        return to_document(obj)
    if isinstance(obj, ExactMatrix):
        return [[str(x) for x in row] for row in obj.iter_rows()]
    if isinstance(obj, LocalEquivWitness):
        return {"P1": encode(obj.p1), "P2": encode(obj.p2), "Q1": encode(obj.q1), "Q2": encode(obj.q2)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


# running


@dataclass
class _Tally:
    instances: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)

    def record(self, prop: Property, instance: Any, flt: Callable | None) -> None:
        if (flt is not None and not flt(instance)) or (prop.domain is not None and not prop.domain(instance)):
            self.skipped += 1
            return
        self.instances += 1
        try:
            ok = bool(prop.check(instance))
            reason = "property does not hold"
        except (PtrankError, ArithmeticError) as exc:
            ok = False
            reason = f"{type(exc).__name__}: {exc}"
        if not ok:
            self.violation_count += 1
            if len(self.violations) < MAX_SERIALIZED:
                self.violations.append({"instance": encode(instance), "reason": reason})

    def merge(self, other: "_Tally") -> None:
        self.instances += other.instances
        self.skipped += other.skipped
        self.violation_count += other.violation_count
        room = MAX_SERIALIZED - len(self.violations)
        self.violations.extend(other.violations[:max(room, 0)])


def _chunk_worker(args: tuple) -> _Tally:
    name, space, start, stop = args
    prop = get_property(name)
    tally = _Tally()
    for m in space.iter_range(start, stop):
        tally.record(prop, m, space.filter)
    return tally


def get_property(name: str) -> Property:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; known suites: {', '.join(sorted(_REGISTRY))}"
        ) from None


def suite_names(include_experimental: bool = True) -> list[str]:
    return sorted(n for n, p in _REGISTRY.items() if include_experimental or not p.experimental)


def exhaustive_check(
    space: SearchSpace,
    prop: Property | str,
    budget: int | None = None,
    workers: int = 1,
    chunks: int | None = None,
) -> SuiteReport:
    """Test ``prop`` on every matrix of ``space``.

    Raises :class:`BudgetExceededError` when the space is larger than the
    budget (default ``2**20``, overridable through ``PTRANK_BUDGET``). With
    ``workers > 1`` the enumeration is split into contiguous chunks whose
    tallies are merged in order, so the report does not depend on the
    worker count. Parallel runs need a registered property and a picklable
    filter.
    """
    prop = get_property(prop) if isinstance(prop, str) else prop
    if not prop.enumerable:
        raise PreconditionError(f"suite {prop.name!r} draws structured instances and cannot be enumerated")
    budget = budget_from_env() if budget is None else budget
    size = space.size
    if size > budget:
        raise BudgetExceededError(size, budget)
    start_time = time.perf_counter()
    if workers <= 1:
        tally = _Tally()
        for m in space:
            tally.record(prop, m, space.filter)
    else:
        n_chunks = chunks or workers * 4
        step = -(-size // n_chunks)
        jobs = [(prop.name, space, lo, min(lo + step, size)) for lo in range(0, size, step)]
        tally = _Tally()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_chunk_worker, jobs):
                tally.merge(part)
    return SuiteReport(
        prop.name, "exhaustive", tally.instances, tally.skipped, tally.violation_count,
        tuple(tally.violations), None, space.describe(), time.perf_counter() - start_time,
    )


def random_check(
    space: SearchSpace | None, prop: Property | str, trials: int, seed: int = 0
) -> SuiteReport:
    """Test ``prop`` on ``trials`` instances drawn with ``random.Random(seed)``.

    Structured properties use their own sampler and read only the shape and
    entry set of ``space`` when one is given.
    """
    prop = get_property(prop) if isinstance(prop, str) else prop
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    rng = random.Random(seed)
    sampler = prop.sampler or _sample_from_space
    if sampler is _sample_from_space and space is None:
        raise PreconditionError(f"suite {prop.name!r} needs a search space for random runs")
    start_time = time.perf_counter()
    tally = _Tally()
    flt = space.filter if space is not None and prop.sampler is None else None
    for _ in range(trials):
        tally.record(prop, sampler(rng, space), flt)
    return SuiteReport(
        prop.name, "random", tally.instances, tally.skipped, tally.violation_count,
        tuple(tally.violations), seed, space.describe() if space else None,
        time.perf_counter() - start_time,
    )


def lemma_suite(name: str, seed: int = 0) -> SuiteReport:
    """Run a registered suite in its default mode, space and trial count."""
    prop = get_property(name)
    if prop.default_mode == "exhaustive":
        assert prop.default_space is not None
        return exhaustive_check(prop.default_space, prop)
    return random_check(prop.default_space, prop, prop.default_trials, seed)


# registry

_REGISTRY: dict[str, Property] = {}


def register(
    name: str,
    description: str,
    *,
    sampler: Callable | None = None,
    mode: str = "random",
    space: SearchSpace | None = None,
    trials: int = 500,
    experimental: bool = False,
    domain: Callable[[Any], bool] | None = None,
    enumerable: bool = False,
):
    def wrap(check: Callable[[Any], bool]) -> Callable[[Any], bool]:
        _REGISTRY[name] = Property(
            name, description, check, sampler, mode, space, trials, experimental, domain, enumerable
        )
        return check

    return wrap


def _entries(space: SearchSpace | None, default: Sequence[Fraction] = smp.SMALL_RATIONALS) -> Sequence[Fraction]:
    return space.entry_set if space is not None else default


def _sample_from_space(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    assert space is not None
    return smp.rand_bipartite(rng, space.shape, space.entry_set)


def _sample_bipartite(max_dim: int):
    def sample(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
        shape = space.shape if space is not None else smp.rand_shape(rng, max_dim)
        while True:
            m = smp.rand_bipartite(rng, shape, _entries(space))
            if not m.is_zero():
                return m

    return sample


def _pencil_pair(m: BipartiteMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    # a pair (A, B) is stored as the two blocks of a (2, 1, rows, cols) matrix
    return m.block(0, 0), m.block(1, 0)


def _pair_document(a: ExactMatrix, b: ExactMatrix) -> BipartiteMatrix:
    return BipartiteMatrix(BipartiteShape(2, 1, a.rows, a.cols), vstack(a, b))


def _span_has_full_column_rank(a: ExactMatrix, b: ExactMatrix) -> bool:
    # a nonzero n x n minor of sA + tB has at most n projective roots,
    # so n + 2 distinct directions are enough to find a non-root
    n = a.cols
    points = [(Fraction(1), Fraction(t)) for t in range(n + 1)] + [(Fraction(0), Fraction(1))]
    return any(rank(a.scale(s) + b.scale(t)) == n for s, t in points)


# the inequality and its companions


@register(
    "inequality",
    "rank of the partial transpose (either system) is at most Sr(M) * rank(M)",
    mode="exhaustive",
    space=SearchSpace(BipartiteShape(2, 2, 2, 2)),
    enumerable=True,
)
def _check_inequality(m: BipartiteMatrix) -> bool:
    if m.is_zero():
        return True
    rep = check_inequality(m)
    return rep.holds and gamma_rank(m, "A") <= rep.bound


def _gf_space() -> SearchSpace:
    return SearchSpace(BipartiteShape(2, 2, 2, 2), (Fraction(0), Fraction(1)))


@register(
    "inequality-gf2",
    "experimental: the inequality with all ranks taken over GF(2)",
    mode="exhaustive",
    space=_gf_space(),
    experimental=True,
    enumerable=True,
)
def _check_inequality_gf2(m: BipartiteMatrix) -> bool:
    r = rank_mod_p(m.data, 2)
    sr = rank_mod_p(realign(m), 2)
    return rank_mod_p(partial_transpose(m).data, 2) <= sr * r


@register(
    "sr-invariance",
    "Sr(M) equals the Schmidt rank of both partial transposes and of the transpose",
    sampler=_sample_bipartite(3),
    trials=1000,
    enumerable=True,
)
def _check_sr_invariance(m: BipartiteMatrix) -> bool:
    sr = schmidt_rank(m)
    return sr == schmidt_rank(partial_transpose(m, "A")) == schmidt_rank(partial_transpose(m, "B")) == schmidt_rank(transpose(m))


@register(
    "kmax-bound",
    "a saturated matrix has Schmidt rank at most min(m1*n2, m2*n1)",
    sampler=_sample_bipartite(3),
    trials=500,
    domain=nonzero,
    enumerable=True,
)
def _check_kmax(m: BipartiteMatrix) -> bool:
    rep = check_inequality(m)
    return not rep.saturated or rep.schmidt_rank <= kmax_bound(m.shape)


@register(
    "analyzer-soundness",
    "the auto analyzer agrees with the direct rank computation",
    sampler=_sample_bipartite(3),
    trials=300,
    domain=nonzero,
    enumerable=True,
)
def _check_analyzer(m: BipartiteMatrix) -> bool:
    if m.is_zero():
        return True
    rep = analyze(m)
    direct = check_inequality(m)
    return (rep.rank, rep.schmidt_rank, rep.rank_gamma, rep.saturated) == (
        direct.rank, direct.schmidt_rank, direct.rank_gamma, direct.saturated
    )


# Schmidt rank three with 2x2 outer factors


def _sample_sr3(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space)
    while True:
        if space is not None:
            m2, n2 = space.shape.m2, space.shape.n2
        else:
            m2, n2 = rng.randint(1, 4), rng.randint(1, 4)
        if m2 * n2 < 3:
            continue
        pairs = []
        for _ in range(3):
            a = smp.rand_any_rank(rng, 2, 2, entries)
            # low-rank inner factors make near-saturating instances common
            k = rng.choice([1, 1, 2, min(m2, n2)])
            pairs.append((a, smp.rand_low_rank(rng, m2, n2, k, entries)))
        m = BipartiteMatrix.from_terms(pairs)
        if schmidt_rank(m) == 3:
            return m


@register(
    "sr3-strict",
    "Schmidt rank three with 2x2 outer factors never attains the bound",
    mode="exhaustive",
    space=SearchSpace(BipartiteShape(2, 2, 2, 2), filter=schmidt_rank_three),
    sampler=_sample_sr3,
    trials=10000,
    domain=outer_2x2_schmidt_rank_three,
    enumerable=True,
)
def _check_sr3(m: BipartiteMatrix) -> bool:
    return not check_inequality(m).saturated


# block-diagonal and product matrices


def _sample_block_diagonal(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space)
    if rng.random() < 0.5:
        k, m2, n2 = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        shape = BipartiteShape(k, k, m2, n2)
        grid = [
            [smp.rand_any_rank(rng, m2, n2, entries) if i == j else ExactMatrix.zeros(m2, n2) for j in range(k)]
            for i in range(k)
        ]
        return BipartiteMatrix(shape, block_matrix(grid))
    # outer factor block diagonal with rectangular diagonal blocks
    parts = [smp.rand_any_rank(rng, rng.randint(1, 2), rng.randint(1, 2), entries) for _ in range(rng.randint(1, 3))]
    return BipartiteMatrix.from_kron(block_diag(*parts), smp.rand_any_rank(rng, rng.randint(1, 3), rng.randint(1, 3), entries))


@register(
    "block-diagonal-gamma",
    "block-diagonal matrices keep their rank under both partial transposes",
    sampler=_sample_block_diagonal,
    trials=500,
    enumerable=True,
)
def _check_block_diagonal(m: BipartiteMatrix) -> bool:
    r = rank(m.data)
    return r == gamma_rank(m, "A") == gamma_rank(m, "B")


def _sample_product(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space)
    a = smp.rand_any_rank(rng, rng.randint(1, 3), rng.randint(1, 3), entries)
    b = smp.rand_any_rank(rng, rng.randint(1, 3), rng.randint(1, 3), entries)
    return BipartiteMatrix.from_kron(a, b)


@register(
    "product-gamma-rank",
    "a single Kronecker product keeps its rank under both partial transposes",
    sampler=_sample_product,
    trials=500,
    domain=lambda m: schmidt_rank(m) <= 1,
    enumerable=True,
)
def _check_product(m: BipartiteMatrix) -> bool:
    r = rank(m.data)
    return r == gamma_rank(m, "A") == gamma_rank(m, "B")


# pencils


def _sample_regular_pair(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space, smp.SMALL_INTEGERS)
    while True:
        n = space.shape.m2 if space is not None else rng.randint(1, 3)
        a, b = smp.rand_any_rank(rng, n, n, entries), smp.rand_any_rank(rng, n, n, entries)
        if is_regular_pencil(a, b):
            return _pair_document(a, b)


@register(
    "pencil-root-bound",
    "a regular n x n pencil has at most n rank-deficient directions, each one genuine and none missed",
    mode="exhaustive",
    space=SearchSpace(BipartiteShape(2, 1, 2, 2), (Fraction(-1), Fraction(0), Fraction(1)), regular_pencil),
    sampler=_sample_regular_pair,
    trials=500,
    domain=regular_pencil,
    enumerable=True,
)
def _check_pencil_roots(m: BipartiteMatrix) -> bool:
    a, b = _pencil_pair(m)
    n = a.rows
    roots = pencil_singular_directions(a, b)
    if not roots.regular or roots.count_with_multiplicity > n:
        return False
    points = set(roots.rational_points)
    if any(rank(a.scale(s) + b.scale(t)) == n for s, t in points):
        return False
    # every deficient direction among a grid of probes must be reported
    for s in range(-2, 3):
        for t in range(-2, 3):
            if (s, t) == (0, 0) or rank(a.scale(s) + b.scale(t)) == n:
                continue
            if normalize_direction(Fraction(s), Fraction(t)) not in points:
                return False
    return True


def _sample_diagonal_quad(rng: random.Random, space: SearchSpace | None) -> tuple:
    ints = smp.SMALL_INTEGERS
    d, f = rng.randint(1, 3), rng.randint(1, 3)
    a = ExactMatrix.diag([rng.choice(ints) for _ in range(d)])
    c = ExactMatrix.diag([rng.choice(ints) for _ in range(d)])
    b = smp.rand_any_rank(rng, f, f, _entries(space))
    if rng.random() < 0.5:
        # make some a_j B + c_j D singular on purpose
        lam = rng.choice(ints)
        dd = b.scale(lam) + smp.rand_low_rank(rng, f, f, rng.randint(0, f), _entries(space))
    else:
        dd = smp.rand_any_rank(rng, f, f, _entries(space))
    return (a, c, b, dd)


@register(
    "pencil-rank",
    "for diagonal A, C the rank of A x B + C x D is the sum of rank(a_j B + c_j D)",
    sampler=_sample_diagonal_quad,
    trials=500,
)
def _check_pencil_rank(quad: tuple) -> bool:
    a, c, b, d = quad
    return sr2_rank_via_pencil(a, c, b, d) == rank(kron(a, b) + kron(c, d))


def _sample_eigen_quad(rng: random.Random, space: SearchSpace | None) -> tuple:
    nonzero_ints = [x for x in smp.SMALL_RATIONALS if x != 0]
    d, f = rng.randint(1, 3), rng.randint(1, 3)
    a = ExactMatrix.diag([rng.choice(nonzero_ints) for _ in range(d)])
    c = ExactMatrix.diag([rng.choice(smp.SMALL_RATIONALS) for _ in range(d)])
    b = ExactMatrix.diag([rng.choice(smp.SMALL_RATIONALS) for _ in range(f)])
    dd = ExactMatrix.diag([rng.choice(nonzero_ints) for _ in range(f)])
    return (a, c, b, dd)


@register(
    "eigen-sum",
    "the scaled diagonal pencil has eigenvalues alpha_j + beta_k",
    sampler=_sample_eigen_quad,
    trials=300,
)
def _check_eigen_sum(quad: tuple) -> bool:
    a, c, b, d = quad
    spec = eigen_sum_spectrum(a, c, b, d)
    return len(spec.values) == a.rows * b.rows


def _sample_normalize(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = _entries(space, smp.SMALL_INTEGERS)
    d, f = rng.randint(1, 3), rng.randint(1, 3)
    quad = tuple(smp.rand_any_rank(rng, n, n, entries) for n in (d, f, d, f))
    return quad + (rng.choice(["i", "ii", "iii"]),)


@register(
    "sr2-normalize",
    "A x B + C x D normalizes to identity factors whenever the spans allow it",
    sampler=_sample_normalize,
    trials=300,
)
def _check_normalize(inst: tuple) -> bool:
    a, b, c, d, variant = inst
    outer_ok = is_regular_pencil(a, c)
    inner_ok = is_regular_pencil(b, d)
    feasible = outer_ok and (variant == "i" or inner_ok)
    try:
        res = sr2_normalize(a, b, c, d, variant)
    except NoFullRankInSpanError:
        return not feasible
    if not feasible:
        return False
    eye_o, eye_i = ExactMatrix.identity(a.rows), ExactMatrix.identity(b.rows)
    if res.a != eye_o:
        return False
    if variant == "ii" and res.d != eye_i:
        return False
    if variant == "iii" and res.b != eye_i:
        return False
    return True


# reductions and local equivalence


def _sample_sr2(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space)
    while True:
        shape = space.shape if space is not None else smp.rand_shape(rng, 4)
        if shape.m1 * shape.n1 < 2 or shape.m2 * shape.n2 < 2:
            continue
        m = smp.rand_terms(rng, shape, 2, entries)
        if schmidt_rank(m) == 2:
            return m


@register(
    "reduce-sr2",
    "the Schmidt-rank-two reduction witness reproduces the reduced matrix and keeps all ranks",
    sampler=_sample_sr2,
    trials=500,
    domain=schmidt_rank_two,
    enumerable=True,
)
def _check_reduce_sr2(m: BipartiteMatrix) -> bool:
    red = reduce_sr2(m)
    n = apply_local(red.witness, m)
    return (
        n == red.reduced
        and rank(n.data) == rank(m.data)
        and schmidt_rank(n) == 2
        and gamma_rank(n, "B") == gamma_rank(m, "B")
    )


def _sample_local(rng: random.Random, space: SearchSpace | None) -> tuple:
    m = _sample_bipartite(3)(rng, space)
    s = m.shape
    ents = smp.SMALL_INTEGERS
    w = LocalEquivWitness(
        smp.rand_invertible(rng, s.m1, ents), smp.rand_invertible(rng, s.m2, ents),
        smp.rand_invertible(rng, s.n1, ents), smp.rand_invertible(rng, s.n2, ents),
    )
    return (m, w)


@register(
    "local-equivalence",
    "local equivalence preserves rank, Schmidt rank and both partial-transpose ranks",
    sampler=_sample_local,
    trials=1000,
)
def _check_local(inst: tuple) -> bool:
    m, w = inst
    n = apply_local(w, m)
    def sig(x: BipartiteMatrix) -> tuple:
        return (rank(x.data), schmidt_rank(x), gamma_rank(x, "A"), gamma_rank(x, "B"))
    return sig(m) == sig(n)


def _sample_full_schmidt(rng: random.Random, space: SearchSpace | None) -> tuple:
    m1, n1 = rng.choice([(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
    r = rng.randint(1, 3)
    m = gen_full_schmidt_canonical(m1, n1, r)
    if rng.random() < 0.5:
        s = m.shape
        ents = smp.SMALL_INTEGERS
        w = LocalEquivWitness(
            smp.rand_invertible(rng, m1, ents), smp.rand_invertible(rng, s.m2, ents),
            smp.rand_invertible(rng, n1, ents), smp.rand_invertible(rng, s.n2, ents),
        )
        m = apply_local(w, m)
    return (m, r)


@register(
    "full-schmidt-canonical",
    "canonical full-Schmidt instances (optionally disguised) are saturated and reduce back",
    sampler=_sample_full_schmidt,
    trials=100,
)
def _check_full_schmidt(inst: tuple) -> bool:
    m, r = inst
    s = m.shape
    rep, w = analyze_full_schmidt(m)
    if (rep.rank, rep.schmidt_rank, rep.rank_gamma) != (r, s.m1 * s.n1, s.m1 * s.n1 * r):
        return False
    return rep.saturated and w is not None and apply_local(w, m) == full_schmidt_form(s.m1, s.n1, r, s.m2, s.n2)


# column-vector families


def _sample_vector_case(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = _entries(space)
    while True:
        k = rng.choice([2, 3])
        m1 = rng.randint(k, k + 1)
        m2, n2 = rng.randint(1, 6), rng.randint(1, 4)
        rs = [smp.rand_matrix(rng, m1, 1, entries) for _ in range(k)]
        if rng.random() < 0.5:
            # a disguised saturating family with random common rank d
            d = rng.randint(1, n2)
            q = smp.rand_invertible(rng, n2, smp.SMALL_INTEGERS)
            ss = []
            for _ in range(k):
                cols = smp.rand_matrix(rng, m2, d, entries)
                ss.append(hstack(cols, ExactMatrix.zeros(m2, n2 - d)) @ q if d < n2 else cols @ q)
        else:
            ss = [smp.rand_any_rank(rng, m2, n2, entries) for _ in range(k)]
        if linearly_independent(rs) and linearly_independent(ss):
            return (rs, ss)


@register(
    "vector-case",
    "the column-vector criterion agrees with the direct saturation check",
    sampler=_sample_vector_case,
    trials=1000,
)
def _check_vector_case(inst: tuple) -> bool:
    rs, ss = inst
    rep, cert = analyze_vector_case(rs, ss)
    brute = check_inequality(BipartiteMatrix.from_terms(list(zip(rs, ss))))
    return rep.saturated == brute.saturated and (cert is not None) == brute.saturated


def _sample_2x2_sr2(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = _entries(space)
    while True:
        m2, n2 = rng.randint(1, 4), rng.randint(1, 4)
        kind = rng.choice(["random", "row", "column", "symmetric"])
        if kind == "random":
            r1, r2 = smp.rand_matrix(rng, 2, 2, entries), smp.rand_matrix(rng, 2, 2, entries)
        elif kind == "row":
            w = smp.rand_matrix(rng, 2, 1, entries)
            r1, r2 = (w @ smp.rand_matrix(rng, 1, 2, entries) for _ in range(2))
        elif kind == "column":
            w = smp.rand_matrix(rng, 1, 2, entries)
            r1, r2 = (smp.rand_matrix(rng, 2, 1, entries) @ w for _ in range(2))
        else:
            r1, r2 = ExactMatrix.identity(2), ExactMatrix.from_rows([[0, 1], [1, 0]])
        d = rng.randint(1, max(1, min(m2, n2)))
        s1, s2 = (smp.rand_low_rank(rng, m2, n2, d, entries) for _ in range(2))
        m = BipartiteMatrix.from_terms([(r1, s1), (r2, s2)])
        if schmidt_rank(m) == 2:
            return m


@register(
    "sr2-2x2",
    "the 2x2 Schmidt-rank-two classifier agrees with the direct check and its witness re-applies",
    sampler=_sample_2x2_sr2,
    trials=500,
    domain=outer_2x2_schmidt_rank_two,
    enumerable=True,
)
def _check_2x2(m: BipartiteMatrix) -> bool:
    rep, case, w = analyze_2x2_sr2(m)
    brute = check_inequality(m)
    if rep.saturated != brute.saturated or (case is not None) != brute.saturated:
        return False
    if w is not None:
        n = apply_local(w, m)
        zero = ExactMatrix.zeros(m.shape.m2, m.shape.n2)
        if case == "ii" and (n.block(1, 0) != zero or n.block(1, 1) != zero):
            return False
        if case == "i" and (n.block(0, 1) != zero or n.block(1, 1) != zero):
            return False
    return True


# elementary rank facts


def _sample_blocks(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = _entries(space)
    rows = rng.randint(1, 4)
    blocks = [smp.rand_any_rank(rng, rows, rng.randint(1, 3), entries) for _ in range(rng.randint(1, 4))]
    p, q, s = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
    a = smp.rand_any_rank(rng, p, q, entries)
    b = smp.rand_any_rank(rng, s, q, entries)
    c = smp.rand_any_rank(rng, s, rng.randint(1, 3), entries)
    return (blocks, (a, b, c))


@register(
    "block-rank-inequalities",
    "rank(A1) <= rank([A1 ... An]) <= sum rank(Ai) and rank(A) + rank(C) <= rank([[A, 0], [B, C]])",
    sampler=_sample_blocks,
    trials=500,
)
def _check_block_ranks(inst: tuple) -> bool:
    blocks, (a, b, c) = inst
    whole = rank(hstack(*blocks))
    ok = rank(blocks[0]) <= whole <= sum(rank(x) for x in blocks)
    lower = block_matrix([[a, ExactMatrix.zeros(a.rows, c.cols)], [b, c]])
    return ok and rank(a) + rank(c) <= rank(lower)


def _sample_right_mult(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = smp.SMALL_INTEGERS
    m2, n2 = rng.randint(1, 3), rng.randint(1, 3)
    base = [smp.rand_any_rank(rng, m2, n2, entries) for _ in range(rng.randint(1, 3))]
    if rng.random() < 0.5:
        extra = base[0].scale(rng.choice(entries))
        for x in base[1:]:
            extra = extra + x.scale(rng.choice(entries))
    else:
        extra = smp.rand_matrix(rng, m2, n2, entries)
    return (base, extra, smp.rand_invertible(rng, n2, entries))


@register(
    "right-multiplication-independence",
    "right multiplication by an invertible matrix preserves independence and span membership",
    sampler=_sample_right_mult,
    trials=500,
)
def _check_right_mult(inst: tuple) -> bool:
    base, extra, r = inst
    moved = [x @ r for x in base]
    if linearly_independent(base) != linearly_independent(moved):
        return False
    return span_contains(base, extra) == span_contains(moved, extra @ r)


def _sample_span_pair(rng: random.Random, space: SearchSpace | None) -> BipartiteMatrix:
    entries = smp.SMALL_INTEGERS
    while True:
        n = rng.randint(1, 3)
        m = rng.randint(n, 4)
        k = rng.randint(0, n - 1)
        # a shared kernel of dimension n - k forces the span to be rank-deficient
        kernel_free = smp.rand_matrix(rng, k, n, entries) if k else ExactMatrix.zeros(0, n)
        if rng.random() < 0.5 and k:
            a = smp.rand_matrix(rng, m, k, entries) @ kernel_free
            b = smp.rand_matrix(rng, m, k, entries) @ kernel_free
        else:
            a, b = smp.rand_any_rank(rng, m, n, entries), smp.rand_any_rank(rng, m, n, entries)
        if not _span_has_full_column_rank(a, b):
            return _pair_document(a, b)


@register(
    "no-full-rank-span-columns",
    "if span{A, B} (m >= n) has no full-column-rank member, some s same-position columns "
    "of A and B lie in a subspace of dimension s - 1",
    mode="exhaustive",
    space=SearchSpace(BipartiteShape(2, 1, 2, 2), (Fraction(-1), Fraction(0), Fraction(1)), no_full_rank_in_span),
    sampler=_sample_span_pair,
    trials=300,
    domain=no_full_rank_in_span,
    enumerable=True,
)
def _check_span_columns(m: BipartiteMatrix) -> bool:
    a, b = _pencil_pair(m)
    n = a.cols
    for s in range(1, n + 1):
        for cols in combinations(range(n), s):
            if rank(hstack(a.select(cols=cols), b.select(cols=cols))) <= s - 1:
                return True
    return False


def _sample_leading_block(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = smp.SMALL_INTEGERS
    a_rows, b_cols = rng.randint(2, 4), rng.randint(2, 4)
    c, d = rng.randint(1, a_rows - 1), rng.randint(1, b_cols - 1)
    if rng.random() < 0.5:
        a1 = smp.rand_any_rank(rng, c, d, entries)
        x = smp.rand_matrix(rng, d, b_cols - d, entries)
        y = smp.rand_matrix(rng, a_rows - c, c, entries)
        # perturb one block half the time to land near the boundary
        a4 = y @ a1 @ x
        if rng.random() < 0.5:
            a4 = a4 + smp.rand_low_rank(rng, a4.rows, a4.cols, 1, entries)
        whole = block_matrix([[a1, a1 @ x], [y @ a1, a4]])
    else:
        whole = smp.rand_any_rank(rng, a_rows, b_cols, entries)
    return (whole, c, d)


@register(
    "rank-of-leading-block",
    "rank A = rank A1 iff R(A) = R([A1; A3]) and R(A3^T) is inside R(A1^T)",
    sampler=_sample_leading_block,
    trials=500,
)
def _check_leading_block(inst: tuple) -> bool:
    whole, c, d = inst
    a1 = whole.submatrix(0, c, 0, d)
    left = whole.submatrix(0, whole.rows, 0, d)
    a3 = whole.submatrix(c, whole.rows, 0, d)
    same_range = rank(whole) == rank(left)  # R(left) is always inside R(whole)
    rows_inside = rank(vstack(a1, a3)) == rank(a1)
    return (rank(whole) == rank(a1)) == (same_range and rows_inside)


def _sample_side_by_side(rng: random.Random, space: SearchSpace | None) -> tuple:
    entries = smp.SMALL_INTEGERS
    rows = rng.randint(1, 4)
    b = smp.rand_any_rank(rng, rows, rng.randint(1, 3), entries)
    if rng.random() < 0.5:
        c = b @ smp.rand_matrix(rng, b.cols, rng.randint(1, 3), entries)
        c = c + smp.rand_low_rank(rng, rows, c.cols, rng.randint(0, 1), entries)
    else:
        c = smp.rand_any_rank(rng, rows, rng.randint(1, 3), entries)
    return (b, c)


@register(
    "rank-of-side-by-side",
    "rank [B C] = rank B + rank C iff the ranges of B and C meet only in zero",
    sampler=_sample_side_by_side,
    trials=500,
)
def _check_side_by_side(inst: tuple) -> bool:
    b, c = inst
    additive = rank(hstack(b, c)) == rank(b) + rank(c)
    if b.is_zero() or c.is_zero():
        return additive
    # intersection dimension from the kernel of [basis(B), -basis(C)]
    meet = len(nullspace(hstack(column_basis(b), -column_basis(c))))
    return additive == (meet == 0)
