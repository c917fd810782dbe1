#!/usr/bin/env python3
"""Benchmark the compiled Jacobi kernel against the pure-Python twin.

Times the raw eigensolver on the matrix sizes the separability pipeline
actually uses (4x4 projections, 8x8 Hermitian embeddings, 12x12 for three
modes), then a full Werner-Wolf feasibility solve through each backend.

Usage: python benchmarks/bench_eig.py [--repeat N]
"""

import argparse
import time

import numpy as np

from gaussep._kernels.jacobi_py import jacobi_eigh as jacobi_py

try:
    from gaussep._kernels._jacobi import jacobi_eigh as jacobi_c
except ImportError:
    jacobi_c = None


def _random_sym(rng, d):
    a = rng.standard_normal((d, d))
    return 0.5 * (a + a.T)


def bench_kernel(repeat):
    rng = np.random.default_rng(0)
    print("raw eigensolver (%d matrices per size)" % repeat)
    print("%6s %14s %14s %10s" % ("size", "cython [us]", "python [us]", "speedup"))
    for d in (4, 8, 12, 24):
        mats = [_random_sym(rng, d) for _ in range(repeat)]
        rows = {}
        for name, fn in (("cython", jacobi_c), ("python", jacobi_py)):
            if fn is None:
                rows[name] = float("nan")
                continue
            t0 = time.perf_counter()
            for m in mats:
                fn(m)
            rows[name] = (time.perf_counter() - t0) / repeat * 1e6
        speed = rows["python"] / rows["cython"] if jacobi_c else float("nan")
        print("%6d %14.1f %14.1f %9.1fx" % (d, rows["cython"], rows["python"], speed))


def bench_werner_wolf(repeat):
    # imported late so the kernel swap below is clean
    import gaussep.matrix_kernel as mk
    from gaussep.ensembles import tmsv_noisy_sigma
    from gaussep.separability import SolverConfig, _werner_wolf_solve
    from gaussep.states import Partition

    part = Partition(1, 1)
    # just below the separability threshold: the solver runs the full
    # iteration budget, so both backends do identical bounded work
    sigma = tmsv_noisy_sigma(0.5, 0.30)
    cfg = SolverConfig(max_iter=300)
    print("\nWerner-Wolf solve, 300 Dykstra iterations (%d runs)" % repeat)
    print("%8s %12s %14s" % ("backend", "ms/solve", "us/iteration"))
    candidates = [("python", jacobi_py)]
    if jacobi_c is not None:
        candidates.insert(0, ("cython", jacobi_c))
    original = mk.jacobi_eigh
    try:
        for name, fn in candidates:
            mk.jacobi_eigh = fn  # the matrix layer dispatches through this
            t0 = time.perf_counter()
            for _ in range(repeat):
                res = _werner_wolf_solve(sigma, part, 1.0, cfg)
            dt = (time.perf_counter() - t0) / repeat * 1e3
            print(
                "%8s %12.2f %14.1f   (%d iterations)"
                % (name, dt, 1e3 * dt / res.iterations, res.iterations)
            )
    finally:
        mk.jacobi_eigh = original


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()
    if jacobi_c is None:
        print("note: compiled kernel not available; showing pure Python only")
    bench_kernel(args.repeat)
    bench_werner_wolf(max(2, args.repeat // 100))


if __name__ == "__main__":
    main()
