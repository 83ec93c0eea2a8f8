#!/usr/bin/env python3
"""Benchmark the hot kernels: numba backend vs pure-numpy fallback.

Times the dense Hamiltonian assembly and the pattern-overlap sum over a few
basis sizes, checks both backends agree, and prints a comparison table.
numba timings exclude the one-off JIT compilation (a warmup call runs
first). Run:

    python benchmarks/bench_kernels.py [--repeats N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from phczeeman import LatticeSpec, PatternFourier, derive_params, reciprocal_basis
from phczeeman import _kernels


def benchmark(func, args, repeats):
    func(*args)  # warmup (JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeats):
        func(*args)
    return (time.perf_counter() - start) / repeats * 1e3  # ms


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--halfwidths", type=int, nargs="+",
                        default=[5, 7, 9, 12])
    args = parser.parse_args()

    lattice = LatticeSpec(lambda_vac=960e-9, n_refr=3.53, pitch=4e-6,
                          fill_factor=0.65, dphi=0.02)
    dp = derive_params(lattice)

    if _kernels.BACKEND != "numba":
        print("numba backend unavailable or disabled "
              "(PHCZEEMAN_DISABLE_NUMBA set?); nothing to compare")

    print(f"active backend: {_kernels.BACKEND}")
    print(f"{'halfwidth':>9} {'waves':>6} {'numpy (ms)':>12} "
          f"{'numba (ms)':>12} {'speedup':>8}")
    rng = np.random.default_rng(7)
    for hw in args.halfwidths:
        basis = reciprocal_basis(hw, lattice.pitch)
        pf = PatternFourier.from_lattice(lattice, 2 * hw)
        m_idx = np.array([rv.m for rv in basis], dtype=np.int64)
        n_idx = np.array([rv.n for rv in basis], dtype=np.int64)
        gx = np.array([rv.gx for rv in basis])
        gy = np.array([rv.gy for rv in basis])
        from phczeeman.constants import HBAR
        kin = HBAR * (gx ** 2 + gy ** 2) / (2.0 * dp.m0)
        fill_args = (m_idx, n_idx, kin, pf.table, pf.halfwidth,
                     dp.v_prefactor)

        t_np = benchmark(_kernels.fill_hamiltonian_numpy, fill_args,
                         args.repeats)
        if _kernels.BACKEND == "numba":
            t_nb = benchmark(_kernels.fill_hamiltonian, fill_args,
                             args.repeats)
            h_np = _kernels.fill_hamiltonian_numpy(*fill_args)
            h_nb = _kernels.fill_hamiltonian(*fill_args)
            if not np.array_equal(h_np, h_nb):
                print("WARNING: backends disagree on the Hamiltonian!")
            print(f"{hw:>9} {len(basis):>6} {t_np:>12.3f} {t_nb:>12.3f} "
                  f"{t_np / t_nb:>7.2f}x")
        else:
            print(f"{hw:>9} {len(basis):>6} {t_np:>12.3f} {'-':>12} {'-':>8}")

    print("\npattern overlap (alpha):")
    print(f"{'halfwidth':>9} {'waves':>6} {'numpy (ms)':>12} "
          f"{'numba (ms)':>12} {'speedup':>8}")
    for hw in args.halfwidths:
        basis = reciprocal_basis(hw, lattice.pitch)
        pf = PatternFourier.from_lattice(lattice, 2 * hw)
        m_idx = np.array([rv.m for rv in basis], dtype=np.int64)
        n_idx = np.array([rv.n for rv in basis], dtype=np.int64)
        c = rng.normal(size=len(basis))
        c = c / np.linalg.norm(c)
        ov_args = (c, np.zeros_like(c), m_idx, n_idx, pf.table, pf.halfwidth)

        t_np = benchmark(_kernels.pattern_overlap_numpy, ov_args, args.repeats)
        if _kernels.BACKEND == "numba":
            t_nb = benchmark(_kernels.pattern_overlap, ov_args, args.repeats)
            a_np = _kernels.pattern_overlap_numpy(*ov_args)
            a_nb = _kernels.pattern_overlap(*ov_args)
            if abs(a_np - a_nb) > 1e-12 * max(abs(a_np), 1.0):
                print("WARNING: backends disagree on the overlap!")
            print(f"{hw:>9} {len(basis):>6} {t_np:>12.3f} {t_nb:>12.3f} "
                  f"{t_np / t_nb:>7.2f}x")
        else:
            print(f"{hw:>9} {len(basis):>6} {t_np:>12.3f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
