#!/usr/bin/env python3
"""Benchmark the compiled Jacobi kernels against the numpy/LAPACK fallback.

Times the three operations the Monte Carlo loops lean on (SVD, Hermitian
eigenvalues, least-norm solve) at sizes spanning the package's real
workloads, plus one end-to-end Monte Carlo sweep.  Run:

    python benchmarks/bench_backends.py [--repeats 5]

The compiled backend exists for determinism and its explicit sweep-cap
contract, and to keep per-call overhead low on the tiny systems the
Gaussian Monte Carlo solves by the hundred thousand; LAPACK is expected
to win, increasingly, as matrices grow.  This script prints the measured
truth for the machine it runs on.
"""

import argparse
import time

import numpy as np

from descentlab import backend, gaussian, linalg
from descentlab.subsets import FeatureSet


def _time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _cases(rng):
    shapes = [(12, 30), (30, 12), (64, 64), (64, 256), (256, 256)]
    for shape in shapes:
        real = rng.standard_normal(shape)
        cplx = real + 1j * rng.standard_normal(shape)
        yield f"svd {shape[0]}x{shape[1]} real", "svd_factor", real
        yield f"svd {shape[0]}x{shape[1]} complex", "svd_factor", cplx
    for n in (16, 64, 128):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        yield f"eigh {n}x{n} complex", "eigh_values", (g + g.conj().T) / 2


def bench_kernels(repeats):
    rng = np.random.default_rng(0)
    names = backend.available()
    rows = []
    for label, fn_name, arr in _cases(rng):
        timings = {}
        for name in names:
            kernel = getattr(backend.load(name), fn_name)
            inner = max(1, int(0.002 / max(_time_call(lambda: kernel(arr), 1), 1e-7)))

            def run():
                for _ in range(inner):
                    kernel(arr)

            timings[name] = _time_call(run, repeats) / inner
        rows.append((label, timings))
    return rows


def bench_monte_carlo(repeats):
    """End-to-end: 2000-trial Gaussian Monte Carlo at the hot-loop size."""
    rng = np.random.default_rng(1)
    beta = rng.standard_normal(30)
    beta /= np.linalg.norm(beta)
    spec = gaussian.GaussianSpec(30, 12, 0.0, beta)
    subset = FeatureSet.first(20)
    timings = {}
    for name in backend.available():
        previous = backend.set_active(name)
        try:
            timings[name] = _time_call(
                lambda: gaussian.monte_carlo_risk(spec, subset, 2000, 7), repeats
            )
        finally:
            backend.set_active(previous)
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats per case")
    args = parser.parse_args()

    names = backend.available()
    print(f"backends available: {', '.join(names)}")
    if len(names) < 2:
        print("note: compiled extension not built; nothing to compare against.")
    print(f"numpy {np.__version__}\n")

    header = f"{'case':28s}" + "".join(f"{name:>14s}" for name in names)
    if len(names) == 2:
        header += f"{'ratio':>10s}"
    print(header)
    print("-" * len(header))
    for label, timings in bench_kernels(args.repeats):
        line = f"{label:28s}" + "".join(f"{timings[n] * 1e6:12.1f}us" for n in names)
        if len(names) == 2:
            a, b = (timings[n] for n in names)
            line += f"{b / a:10.2f}x"
        print(line)

    print()
    mc = bench_monte_carlo(args.repeats)
    line = f"{'monte carlo 2000x(12x30)':28s}" + "".join(
        f"{mc[n] * 1e3:12.1f}ms" for n in names
    )
    if len(names) == 2:
        a, b = (mc[n] for n in names)
        line += f"{b / a:10.2f}x"
    print(line)
    print("\n(ratio > 1: second backend slower than first)")


if __name__ == "__main__":
    main()
