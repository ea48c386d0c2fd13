#!/usr/bin/env python3
"""Benchmark the compiled allocation kernels against the numpy fallback.

The per-state power allocation is the hot loop of the ergodic estimator:
one Monte-Carlo estimate evaluates it ~100 times inside the multiplier
bisection. Run after `python setup.py build_ext --inplace` (or an
editable install) so the compiled path is importable.

Usage: python benchmarks/bench_kernels.py [--n 1000000] [--repeats 20]
"""

import argparse
import sys
import time

import numpy as np

from v2vsec import _kernels
from v2vsec._kernels import fallback
from v2vsec.channel import FadingModel, db_to_linear
from v2vsec.ergodic import ErgodicSpec, ergodic_secrecy


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1_000_000, help="states per kernel call")
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(1)
    a = np.ascontiguousarray(rng.exponential(1.0, args.n))
    b = np.ascontiguousarray(rng.exponential(1.0, args.n))
    mu = 0.25
    gamma = np.ascontiguousarray(fallback.gamma_allocation(a, b, mu))

    backends = [("numpy", fallback)]
    if _kernels.BACKEND == "compiled":
        backends.append(("compiled", _kernels._impl))
    else:
        print("note: compiled kernel not importable; benchmarking fallback only")

    print(f"kernel timings, n = {args.n} states, best of {args.repeats}")
    print(f"{'backend':<10} {'gamma_allocation':>18} {'secrecy_rate':>14}")
    results = {}
    for name, impl in backends:
        t_alloc = time_call(lambda: impl.gamma_allocation(a, b, mu), args.repeats)
        t_rate = time_call(lambda: impl.secrecy_rate(a, b, gamma), args.repeats)
        results[name] = (t_alloc, t_rate)
        print(f"{name:<10} {t_alloc * 1e3:>15.2f} ms {t_rate * 1e3:>11.2f} ms")
    if len(results) == 2:
        speed_alloc = results["numpy"][0] / results["compiled"][0]
        speed_rate = results["numpy"][1] / results["compiled"][1]
        print(f"{'speedup':<10} {speed_alloc:>15.2f} x {speed_rate:>11.2f} x")

        sanity = np.abs(
            _kernels._impl.gamma_allocation(a, b, mu) - fallback.gamma_allocation(a, b, mu)
        ).max()
        print(f"max |compiled - numpy| on this input: {sanity:.3g}")

    spec = ErgodicSpec(
        legit_fading=FadingModel.rayleigh(),
        p_budget=db_to_linear(15.0),
        eaves_fading=FadingModel.rayleigh(),
        n_samples=100_000,
    )
    t = time_call(lambda: ergodic_secrecy(spec), max(3, args.repeats // 4))
    print(f"\nfull ergodic estimate (1e5 samples, {_kernels.BACKEND} backend): {t * 1e3:.1f} ms")
    return 0


if __name__ == "__main__":
    sys.exit(main())
