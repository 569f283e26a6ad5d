"""Benchmark the numba-compiled kernels against the plain-numpy path.

Runs each hot kernel through both entry points (the compiled dispatcher
and the uncompiled ``*_py`` reference) on identical inputs and prints a
timing table. With VMFKL_NO_NUMBA=1 both rows time the interpreted path.

Usage: python benchmarks/bench_kernels.py [--n 200000]
"""

import argparse
import time

import numpy as np

from vmfkl import _kernels


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_sampler(n):
    print(f"cosine rejection sampler, n={n}, d=5, kappa=10")
    rows = []
    for label, fn in [("numba", _kernels._sample_cosines), ("python", _kernels._sample_cosines_py)]:
        rng = np.random.default_rng(2024)
        fn(rng, 16, 5, 10.0, 10_000_000)  # warmup / compile
        rng = np.random.default_rng(2024)
        dt, (w, status) = _time(fn, rng, n, 5, 10.0, 10_000_000, repeats=1)
        assert status == 0
        rows.append((label, dt, float(np.mean(w))))
    for label, dt, mean_w in rows:
        print(f"  {label:7s} {dt * 1e3:10.2f} ms   mean_w={mean_w:.6f}")
    print(f"  speedup {rows[1][1] / rows[0][1]:.1f}x")


def bench_series(m):
    print(f"log-Bessel power series, {m} evaluations over an (alpha, z) grid")
    alphas = np.linspace(0.0, 12.0, 40)
    zs = np.linspace(0.01, 25.0, m // 40)
    for label, fn in [("numba", _kernels._log_bessel_series), ("python", _kernels._log_bessel_series_py)]:
        fn(1.0, 1.0)  # warmup / compile
        t0 = time.perf_counter()
        acc = 0.0
        for a in alphas:
            for z in zs:
                acc += fn(a, z)[0]
        dt = time.perf_counter() - t0
        print(f"  {label:7s} {dt * 1e3:10.2f} ms   checksum={acc:.6e}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=200_000, help="sampler draws")
    args = parser.parse_args()
    print(f"numba enabled: {_kernels.NUMBA_ENABLED}")
    bench_sampler(args.n)
    bench_series(4000)


if __name__ == "__main__":
    main()
