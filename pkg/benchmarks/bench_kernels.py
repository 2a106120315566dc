"""Compare the numba kernels with their numpy twins.

Run ``python benchmarks/bench_kernels.py``.  Each kernel is warmed up once
(so JIT compilation is excluded) and then timed over a few repetitions; the
two paths must agree exactly on the integer kernels and to 1e-10 on ALS.
"""
from __future__ import annotations

import time

import numpy as np

from borderrank import _kernels as K
from borderrank.tensor_core import mmult_tensor


def _time(fn, *args, reps=3):
    fn(*args)
    best = np.inf
    for _ in range(reps):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    if not K.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can be timed")
    rng = np.random.default_rng(0)
    target = np.array([int(x) for x in mmult_tensor(2).flat()], dtype=np.int64)
    factors = rng.integers(-1, 2, size=(20_000, 3, 6, 4)).astype(np.int64)
    triples = K.random_triples(rng, 32)
    grid = K.segre_grid_222()
    T = rng.standard_normal((4, 4, 4))
    F = [rng.standard_normal((4, 7)) for _ in range(3)]

    def als_np():
        A, B, C = (M.copy() for M in F)
        return K.als_sweep_numpy(T, A, B, C, 0.0)[0]

    def als_jit():
        A, B, C = (M.copy() for M in F)
        return K._als_sweep_loops(T, A, B, C, 0.0)[0]

    cases = [
        ("count_exact_matches", lambda: K.count_exact_matches_numpy(factors, target),
         lambda: K._count_exact_matches_loops(factors, target)),
        ("scan_fourth_points", lambda: K.scan_fourth_points_numpy(triples, grid, 10**9),
         lambda: K._scan_loops(triples, grid, 10**9)),
        ("als_sweep", als_np, als_jit),
    ]
    print(f"{'kernel':22s} {'numpy [s]':>12s} {'numba [s]':>12s} {'speedup':>8s}")
    for name, f_np, f_jit in cases:
        t_np, out_np = _time(f_np)
        if K.HAVE_NUMBA:
            t_jit, out_jit = _time(f_jit)
            same = np.allclose(out_np, out_jit, rtol=1e-10, atol=0)
            print(f"{name:22s} {t_np:12.5f} {t_jit:12.5f} {t_np / t_jit:8.1f}"
                  + ("" if same else "  MISMATCH"))
        else:
            print(f"{name:22s} {t_np:12.5f} {'-':>12s}")


if __name__ == "__main__":
    main()
