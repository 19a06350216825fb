"""Compare the compiled and pure-Python integer kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 4 8 16 32] [--repeat 5]

Prints one line per (operation, size) with the best time of each backend and
the speedup. Both backends must agree on every input; a mismatch aborts.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from ptrank import _pykernels

try:
    from ptrank import _kernels
except ImportError:  # extension not built
    _kernels = None


def _workload(rng: random.Random, n: int, count: int, low_rank: bool) -> list[list[int]]:
    mats = []
    for _ in range(count):
        if low_rank:
            # rank about n/2, so elimination runs through zero pivots
            k = max(1, n // 2)
            u = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(n)]
            v = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)]
            flat = [sum(u[i][t] * v[t][j] for t in range(k)) for i in range(n) for j in range(n)]
        else:
            flat = [rng.randint(-5, 5) for _ in range(n * n)]
        mats.append(flat)
    return mats


def _time(fn, mats, n: int, repeat: int) -> float:
    return min(timeit.repeat(lambda: [fn(m, n) for m in mats], number=1, repeat=repeat))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    parser.add_argument("--count", type=int, default=200, help="matrices per size")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    print(f"{'op':<5} {'n':>4} {'cython (s)':>12} {'python (s)':>12} {'speedup':>8}")
    for n in args.sizes:
        mats = _workload(rng, n, args.count, low_rank=True)
        for name, c_fn, py_fn in (
            ("rank", lambda m, n: _kernels.rank_int(m, n, n), lambda m, n: _pykernels.rank_int(m, n, n)),
            ("det", _kernels.det_int, _pykernels.det_int),
        ):
            if [c_fn(m, n) for m in mats] != [py_fn(m, n) for m in mats]:
                print(f"backend mismatch on {name} n={n}", file=sys.stderr)
                return 2
            tc = _time(c_fn, mats, n, args.repeat)
            tp = _time(py_fn, mats, n, args.repeat)
            print(f"{name:<5} {n:>4} {tc:>12.4f} {tp:>12.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
