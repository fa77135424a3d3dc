"""Benchmark the numba kernels against the pure-numpy fallbacks.

Imports both kernel modules directly (bypassing the TENSORSYM_BACKEND switch),
checks that they produce identical output on every workload, and prints a
timing table.  Run as:

    python bench/compare_backends.py
"""

import time

import numpy as np

from tensorsym import _kernels_numpy

try:
    from tensorsym import _kernels_numba
except ImportError:
    _kernels_numba = None


def _sparse_system(rng, rows, cols, nnz_per_row, p):
    m = np.zeros((rows, cols), np.int64)
    for i in range(rows):
        for j in rng.integers(0, cols, nnz_per_row):
            m[i, j] = rng.integers(1, p)
    return m


def _workloads():
    rng = np.random.default_rng(0)
    yield "rref_mod  dense 300x200 gf(101)", "rref_mod", (
        rng.integers(0, 101, (300, 200)).astype(np.int64), 101)
    yield "rref_mod  sparse 3456x664 gf(5)", "rref_mod", (
        _sparse_system(rng, 3456, 664, 4, 5), 5)
    yield "rref_mod  sparse 20736x664 gf(5)", "rref_mod", (
        _sparse_system(rng, 20736, 664, 4, 5), 5)
    signs = _sparse_system(rng, 1728, 244, 3, 3)
    signs[signs == 2] = -1
    yield "rref_int  sparse 1728x244 (+-1)", "rref_int", (signs,)


def _time(fn, args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        work = tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args)
        t0 = time.perf_counter()
        out = fn(*work)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    if _kernels_numba is None:
        print("numba unavailable; nothing to compare (numpy fallback is the only backend)")
        return
    print(f"{'workload':40s} {'numba':>10s} {'numpy':>10s} {'speedup':>9s}")
    for name, kernel, args in _workloads():
        fn_nb = getattr(_kernels_numba, kernel)
        fn_np = getattr(_kernels_numpy, kernel)
        # warm the JIT before timing
        fn_nb(*tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args))
        t_nb, out_nb = _time(fn_nb, args)
        t_np, out_np = _time(fn_np, args)
        # identical results, element for element
        for a, b in zip(out_nb, out_np):
            assert np.array_equal(np.asarray(a), np.asarray(b)), name
        print(f"{name:40s} {t_nb:9.3f}s {t_np:9.3f}s {t_np / t_nb:8.1f}x")
    print("outputs identical across backends")


if __name__ == "__main__":
    main()
