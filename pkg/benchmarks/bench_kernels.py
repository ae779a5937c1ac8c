#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two dense-engine inner loops (Hamiltonian assembly and
coherence-order binning) on each available backend, plus one end-to-end
spectrum evaluation for context (the eigendecomposition inside it is LAPACK
either way, so the end-to-end ratio is much flatter than the kernel ratio).

Usage: python benchmarks/bench_kernels.py [--sizes 6 8 10 12] [--repeats 5]
"""

import argparse
import time

import numpy as np

from mqskew import DenseEngine, SpinSystem, build_zeeman_basis
from mqskew.kernels import available_backends, coherence_histogram, mq_hamiltonian


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def random_density_like(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[6, 8, 10, 12])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    rng = np.random.default_rng(0)
    print(f"backends: {', '.join(sorted(backends))}")
    header = f"{'kernel':<22}{'N':>4}" + "".join(
        f"{name + ' [ms]':>16}" for name in sorted(backends))
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for n in args.sizes:
        basis = build_zeeman_basis(n)
        couplings = SpinSystem.all_equal(n, 1.0).couplings
        rho = random_density_like(rng, 1 << n)
        rows = {
            "mq_hamiltonian": lambda impl: mq_hamiltonian(couplings, impl=impl),
            "coherence_histogram": lambda impl: coherence_histogram(
                rho, basis.twice_m, n, impl=impl),
        }
        for label, call in rows.items():
            times = {name: best_time(lambda: call(impl), args.repeats)
                     for name, impl in sorted(backends.items())}
            line = f"{label:<22}{n:>4}" + "".join(
                f"{1e3 * t:>16.3f}" for _, t in sorted(times.items()))
            if len(times) == 2:
                line += f"{times['numpy'] / times['cython']:>9.1f}x"
            print(line)

    print()
    n = max(args.sizes)
    engine = DenseEngine(SpinSystem.all_equal(n, 1.0), cap=max(14, n))
    t = best_time(lambda: engine.evaluate(0.7, 2.0), max(1, args.repeats // 2))
    print(f"end-to-end dense evaluate (N={n}, active backend): {1e3 * t:.1f} ms")


if __name__ == "__main__":
    main()
