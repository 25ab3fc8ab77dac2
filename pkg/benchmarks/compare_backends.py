#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallbacks.

Usage: python benchmarks/compare_backends.py [--repeat N]

Runs each hot kernel on representative problem sizes (benchmark-suite scale
and windfarm scale) under both backends and prints a speedup table.  The
first numba call per kernel compiles; compilation happens before timing.
"""

import argparse
import time

import numpy as np

from bgsa._kernels import available_backends, get_impls


def time_call(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def build_cases(rng):
    cases = []

    # engine kernels at windfarm scale (N=500 particles, 100 bits)
    n, d, k = 500, 100, 250
    bits = rng.integers(0, 2, (n, d)).astype(np.uint8)
    fits = rng.random(n) * 1e4
    masses = rng.random(n)
    masses /= masses.sum()
    elite = rng.choice(n, size=k, replace=False).astype(np.int64)
    cases.append(("hamming_to_subset (500x100, k=250)", "hamming_to_subset",
                  (bits, elite)))

    dists = get_impls("numpy")["hamming_to_subset"](bits, elite)
    rand_pair = rng.random((n, k))
    cases.append(("kbest_acceleration (500x100, k=250)", "kbest_acceleration",
                  (bits, masses, elite, dists, rand_pair, 50.0, 1e-12)))

    sizes = rng.integers(2, 6, n).astype(np.int64)
    members = np.zeros((n, 5), dtype=np.int64)
    for i in range(n):
        members[i, : sizes[i]] = rng.choice(
            [j for j in range(n) if j != i], size=sizes[i], replace=False
        )
    cases.append(("archive_acceleration (500x100)", "archive_acceleration",
                  (bits, fits, members, sizes, rng.random((n, 5)), 1e-2, 1e-5)))

    # windfarm kernels: 16-bin rose, 60 turbines
    cells = 100
    cx = (np.arange(cells) % 20) * 300.0 + 150.0
    cy = (np.arange(cells) // 20) * 400.0 + 200.0
    occupied = rng.choice(cells, size=60, replace=False)
    dirs = np.radians(np.arange(16) * 22.5)
    u0 = np.tile([3.9, 8.2, 10.8, 14.4], 4)
    probs = np.full(16, 1 / 16)
    wake_args = (cx[occupied], cy[occupied], dirs, u0, probs, 40.0,
                 0.2763932022500211, 0.09436958290887743, 50.88078598056276,
                 2, 2000.0, 4.0, 25.0)
    cases.append(("farm_power (60 turbines, 16 bins)", "farm_power", wake_args))

    swarm = np.zeros((100, cells), dtype=np.uint8)
    for i in range(100):
        swarm[i, rng.choice(cells, size=30, replace=False)] = 1
    batch_args = (swarm, 30, cx, cy, dirs, u0, probs, 40.0,
                  0.2763932022500211, 0.09436958290887743, 50.88078598056276,
                  2, 2000.0, 4.0, 25.0, 0.5, 0.5, 1.0, 1e-10)
    cases.append(("farm_objective_batch (100 layouts, nt=30)",
                  "farm_objective_batch", batch_args))
    return cases


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if "numba" not in backends:
        raise SystemExit("numba is not importable; nothing to compare")

    numba_impls = get_impls("numba")
    numpy_impls = get_impls("numpy")
    cases = build_cases(np.random.default_rng(0))

    # trigger compilation outside the timed region
    for _, key, call_args in cases:
        numba_impls[key](*call_args)

    header = f"{'kernel':<42} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, key, call_args in cases:
        t_numpy = time_call(numpy_impls[key], call_args, args.repeat)
        t_numba = time_call(numba_impls[key], call_args, args.repeat)
        print(f"{label:<42} {t_numpy * 1e3:>10.3f}ms {t_numba * 1e3:>10.3f}ms "
              f"{t_numpy / t_numba:>8.1f}x")


if __name__ == "__main__":
    main()
