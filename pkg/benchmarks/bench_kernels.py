"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py [--repeats N]

Workloads mirror real pipeline hot spots: candidate-vs-lexicon edit
distance sweeps and linear-model training epochs.
"""

from __future__ import annotations

import argparse
import random
import string
import time

import numpy as np

from reliefmatch.kernels import encode, numba_backend, numpy_backend


def words(n, rng, lo=4, hi=14):
    return ["".join(rng.choices(string.ascii_lowercase, k=rng.randint(lo, hi))) for _ in range(n)]


def bench_levenshtein(backend, cands, phrases):
    t0 = time.perf_counter()
    total = 0
    for c in cands:
        for p in phrases:
            total += backend.levenshtein_codes(c, p)
    return time.perf_counter() - t0, total


def bench_logreg(backend, x, y, epochs=150):
    t0 = time.perf_counter()
    w, b, losses = backend.logreg_fit_impl(x, y, 0.5, 1e-4, epochs)
    return time.perf_counter() - t0, float(losses[-1])


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(7)
    cands = [encode(w) for w in words(300, rng)]
    phrases = [encode(w) for w in words(150, rng)]

    np_rng = np.random.default_rng(7)
    x = (np_rng.random((2000, 3000)) > 0.97).astype(np.float64)
    y = np.zeros((2000, 3))
    y[np.arange(2000), np_rng.integers(0, 3, 2000)] = 1.0

    backends = [("numba", numba_backend), ("numpy", numpy_backend)]

    # warm the JIT so compile time is reported separately
    t0 = time.perf_counter()
    numba_backend.levenshtein_codes(cands[0], phrases[0])
    numba_backend.logreg_fit_impl(x[:8], y[:8], 0.5, 1e-4, 1)
    print(f"numba JIT warmup: {time.perf_counter() - t0:.2f}s (cached for later runs)\n")

    print(f"{'workload':<28} {'backend':<8} {'best of ' + str(args.repeats):>12}")
    print("-" * 52)
    for name, backend in backends:
        best = min(bench_levenshtein(backend, cands, phrases)[0] for _ in range(args.repeats))
        print(f"{'levenshtein 300x150 pairs':<28} {name:<8} {best * 1e3:>10.1f}ms")
    checks = {}
    for name, backend in backends:
        times = []
        for _ in range(args.repeats):
            dt, final_loss = bench_logreg(backend, x, y)
            times.append(dt)
            checks[name] = final_loss
        print(f"{'logreg 2000x3000, 150 ep':<28} {name:<8} {min(times) * 1e3:>10.1f}ms")
    drift = abs(checks["numba"] - checks["numpy"])
    print(f"\nfinal-loss agreement between backends: |delta| = {drift:.2e}")


if __name__ == "__main__":
    main()
