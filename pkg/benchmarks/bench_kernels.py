"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call (compilation or cache load) is reported separately.
"""

import argparse
import time

import numpy as np

from factorcenter import _kernels as K
from factorcenter.permgrp import fano_group, symmetric_group


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    S6 = symmetric_group(6)
    F = fano_group()
    rng = np.random.default_rng(0)
    gens6 = rng.integers(0, S6.order, size=2)
    members = np.arange(0, F.order, 7)
    return [
        ("closure S6, 2 generators",
         lambda: K.closure_numba(S6.mult_table, np.array([0]), gens6),
         lambda: K.closure_numpy(S6.mult_table, np.array([0]), gens6)),
        ("conjugates in order-168 group",
         lambda: K.conjugates_numba(F.mult_table, F.inverse_table, members),
         lambda: K.conjugates_numpy(F.mult_table, F.inverse_table, members)),
        ("box_scan r=6 bound=3 j=1",
         lambda: K.box_scan_numba(6, 3, 1, -1),
         lambda: K.box_scan_numpy(6, 3, 1, -1)),
        ("box_scan r=7 bound=3 j=1",
         lambda: K.box_scan_numba(7, 3, 1, -1),
         lambda: K.box_scan_numpy(7, 3, 1, -1)),
    ]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'case':34s} {'first numba':>12s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, slow in cases():
        t0 = time.perf_counter()
        a = fast()
        first = time.perf_counter() - t0
        b = slow()
        if not np.array_equal(a, b):
            raise SystemExit(f"{name}: backends disagree")
        tn = best_of(fast, args.repeat)
        tp = best_of(slow, args.repeat)
        print(f"{name:34s} {first * 1e3:10.1f}ms {tn * 1e3:8.2f}ms {tp * 1e3:8.2f}ms {tp / tn:7.1f}x")


if __name__ == "__main__":
    main()
