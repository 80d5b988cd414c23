"""Numba vs numpy timings for the hot kernels.

    python3 benchmarks/bench_kernels.py

Run with IONIC_CDW_NUMBA=0 to confirm the fallback is importable without the
jit; both paths are timed explicitly here regardless of the flag.
"""
import time

import numpy as np

from ionic_cdw import _kernels
from ionic_cdw._accel import USE_NUMBA
from ionic_cdw.contours import neighbour_table
from ionic_cdw.lattice import geometric_torus


def best_of(fn, repeat=5):
    fn()  # warm-up (jit compile on the first call)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_monomial(use_numba):
    dim = 1 << 16
    modes = np.array([3, 9, 12, 1])
    daggers = np.array([True, True, False, False])
    return best_of(lambda: _kernels.monomial_action(modes, daggers, dim, use_numba))


def bench_occupations(use_numba):
    return best_of(lambda: _kernels.occupations(16, use_numba))


def bench_redelmeier(use_numba, side=4, max_size=6):
    torus = geometric_torus(side)
    nbr, deg = neighbour_table(torus)
    hist = np.zeros((max_size + 1, 4 * max_size + 1), dtype=np.int64)
    empty = np.empty((0, max_size), dtype=np.int64)

    def run():
        hist[:] = 0
        _kernels.redelmeier(nbr, deg, torus.origin, False, max_size, torus.n_sites // 2, empty, hist, use_numba)
    return best_of(run, repeat=3)


def main():
    print(f"IONIC_CDW_NUMBA default path: {'numba' if USE_NUMBA else 'numpy'}")
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fn in (("monomial_action", bench_monomial), ("occupations", bench_occupations),
                     ("redelmeier side 4", bench_redelmeier)):
        tn, tp = fn(True), fn(False)
        print(f"{name:<22}{tn:>12.2e}{tp:>12.2e}{tp / tn:>10.1f}")


if __name__ == "__main__":
    main()
