"""Hot loops with a numba path and a pure-numpy path.

Set ``BORDERRANK_DISABLE_NUMBA=1`` to force the numpy implementations (also
used automatically when numba is not importable).  Both paths compute the
same quantities; the falsification kernels are exact integer computations in
either path.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("BORDERRANK_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:  # pragma: no cover - depends on environment
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

USE_NUMBA = HAVE_NUMBA

__all__ = [
    "USE_NUMBA",
    "als_sweep",
    "als_sweep_numpy",
    "count_exact_matches",
    "count_exact_matches_numpy",
    "scan_fourth_points",
    "scan_fourth_points_numpy",
    "segre_grid_222",
    "random_triples",
]


# ---------------------------------------------------------------------------
# ALS sweep
# ---------------------------------------------------------------------------

def als_sweep_numpy(T, A, B, C, ridge):
    """One ALS sweep in place; returns (squared residual, ok flag).

    ``ok`` is False when a normal-equation matrix is singular (ridge == 0).
    """
    r = A.shape[1]
    eye = np.eye(r)
    ok = True
    for mode in range(3):
        if mode == 0:
            M = np.einsum("ijk,jr,kr->ir", T, B, C)
            G = (B.T @ B) * (C.T @ C)
        elif mode == 1:
            M = np.einsum("ijk,ir,kr->jr", T, A, C)
            G = (A.T @ A) * (C.T @ C)
        else:
            M = np.einsum("ijk,ir,jr->kr", T, A, B)
            G = (A.T @ A) * (B.T @ B)
        G = G + ridge * eye
        if ridge == 0.0 and np.linalg.cond(G) > 1e14:
            ok = False
            return np.inf, ok
        X = np.linalg.solve(G, M.T).T
        if mode == 0:
            A[:] = X
        elif mode == 1:
            B[:] = X
        else:
            C[:] = X
    R = T - np.einsum("ir,jr,kr->ijk", A, B, C)
    return float(np.sum(R * R)), ok


@njit(cache=True)
def _mttkrp(T, A, B, C, mode):
    I, J, K = T.shape
    r = A.shape[1]
    if mode == 0:
        out = np.zeros((I, r))
    elif mode == 1:
        out = np.zeros((J, r))
    else:
        out = np.zeros((K, r))
    for i in range(I):
        for j in range(J):
            for k in range(K):
                t = T[i, j, k]
                if t == 0.0:
                    continue
                for q in range(r):
                    if mode == 0:
                        out[i, q] += t * B[j, q] * C[k, q]
                    elif mode == 1:
                        out[j, q] += t * A[i, q] * C[k, q]
                    else:
                        out[k, q] += t * A[i, q] * B[j, q]
    return out


@njit(cache=True)
def _als_sweep_loops(T, A, B, C, ridge):
    r = A.shape[1]
    for mode in range(3):
        if mode == 0:
            G = (B.T @ B) * (C.T @ C)
        elif mode == 1:
            G = (A.T @ A) * (C.T @ C)
        else:
            G = (A.T @ A) * (B.T @ B)
        for q in range(r):
            G[q, q] += ridge
        if ridge == 0.0 and np.linalg.cond(G) > 1e14:
            return np.inf, False
        M = _mttkrp(T, A, B, C, mode)
        X = np.linalg.solve(G, M.T.copy()).T
        if mode == 0:
            A[:, :] = X
        elif mode == 1:
            B[:, :] = X
        else:
            C[:, :] = X
    I, J, K = T.shape
    res = 0.0
    for i in range(I):
        for j in range(J):
            for k in range(K):
                s = T[i, j, k]
                for q in range(r):
                    s -= A[i, q] * B[j, q] * C[k, q]
                res += s * s
    return res, True


als_sweep = _als_sweep_loops if USE_NUMBA else als_sweep_numpy


# ---------------------------------------------------------------------------
# random 6-term candidates against a target
# ---------------------------------------------------------------------------

def count_exact_matches_numpy(factors, target):
    """Count samples whose sum of outer products equals ``target`` exactly.

    ``factors`` has shape (S, 3, r, n): for every sample, r triples of
    length-n integer vectors.  ``target`` is the flattened n x n x n tensor.
    """
    S, _, r, n = factors.shape
    T = np.einsum("sri,srj,srk->sijk", factors[:, 0], factors[:, 1], factors[:, 2])
    return int(np.sum(np.all(T.reshape(S, -1) == target[None, :], axis=1)))


@njit(cache=True)
def _count_exact_matches_loops(factors, target):
    S, _, r, n = factors.shape
    hits = 0
    buf = np.zeros(n * n * n, dtype=np.int64)
    for s in range(S):
        buf[:] = 0
        for q in range(r):
            for i in range(n):
                ai = factors[s, 0, q, i]
                if ai == 0:
                    continue
                for j in range(n):
                    bj = factors[s, 1, q, j]
                    if bj == 0:
                        continue
                    for k in range(n):
                        buf[(i * n + j) * n + k] += ai * bj * factors[s, 2, q, k]
        same = True
        for t in range(n * n * n):
            if buf[t] != target[t]:
                same = False
                break
        if same:
            hits += 1
    return hits


count_exact_matches = _count_exact_matches_loops if USE_NUMBA else count_exact_matches_numpy


# ---------------------------------------------------------------------------
# dependent quadruples in (2,2,2)
# ---------------------------------------------------------------------------

_P1 = np.array([[1, 0], [0, 1], [1, 1], [1, -1], [1, 2], [2, 1], [1, -2], [2, -1]], dtype=np.int64)


def segre_grid_222():
    """All 512 points ``(a, b, c)`` with factors from 8 fixed classes of P^1."""
    idx = np.array(np.meshgrid(range(8), range(8), range(8), indexing="ij")).reshape(3, -1).T
    return np.stack([_P1[idx[:, 0]], _P1[idx[:, 1]], _P1[idx[:, 2]]], axis=1)


def random_triples(rng, n):
    """Random triples of grid points; half of them share one factor."""
    pick = rng.integers(0, 8, size=(n, 3, 3))
    shared = rng.random(n) < 0.5
    which = rng.integers(0, 3, size=n)
    for t in np.nonzero(shared)[0]:
        pick[t, :, which[t]] = pick[t, 0, which[t]]
    return _P1[pick]  # (n, 3 points, 3 factors, 2)


@njit(cache=True)
def _rank_int(M):
    # fraction-free elimination on a small int64 matrix copy
    A = M.copy()
    m, n = A.shape
    rank = 0
    prev = 1
    col = 0
    while rank < m and col < n:
        piv = -1
        for r in range(rank, m):
            if A[r, col] != 0:
                piv = r
                break
        if piv < 0:
            col += 1
            continue
        if piv != rank:
            for c in range(n):
                tmp = A[rank, c]
                A[rank, c] = A[piv, c]
                A[piv, c] = tmp
        p = A[rank, col]
        for r in range(rank + 1, m):
            arc = A[r, col]
            for c in range(n):
                A[r, c] = (p * A[r, c] - arc * A[rank, c]) // prev
        prev = p
        rank += 1
        col += 1
    return rank


@njit(cache=True)
def _point_vec(a, b, c, out):
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out[i * 4 + j * 2 + k] = a[i] * b[j] * c[k]


@njit(cache=True)
def _scan_loops(triples, grid, limit):
    examined = 0
    violations = 0
    M4 = np.zeros((4, 8), dtype=np.int64)
    M3 = np.zeros((3, 8), dtype=np.int64)
    F = np.zeros((4, 2), dtype=np.int64)
    for t in range(triples.shape[0]):
        for p in range(3):
            _point_vec(triples[t, p, 0], triples[t, p, 1], triples[t, p, 2], M4[p])
        if _rank_int(M4[:3]) < 3:
            continue
        for g in range(grid.shape[0]):
            _point_vec(grid[g, 0], grid[g, 1], grid[g, 2], M4[3])
            if _rank_int(M4) != 3:
                continue
            circuit = True
            for skip in range(3):
                row = 0
                for p in range(4):
                    if p != skip:
                        M3[row] = M4[p]
                        row += 1
                if _rank_int(M3) < 3:
                    circuit = False
                    break
            if not circuit:
                continue
            examined += 1
            low = 3
            for f in range(3):
                for p in range(3):
                    F[p] = triples[t, p, f]
                F[3] = grid[g, f]
                d = _rank_int(F)
                if d < low:
                    low = d
            if low >= 2:
                violations += 1
            if examined >= limit:
                return violations, examined
    return violations, examined


def _det3(M):
    """Exact determinants of a batch (..., 3, 3) of int64 matrices."""
    return (M[..., 0, 0] * (M[..., 1, 1] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 1])
            - M[..., 0, 1] * (M[..., 1, 0] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 0])
            + M[..., 0, 2] * (M[..., 1, 0] * M[..., 2, 1] - M[..., 1, 1] * M[..., 2, 0]))


def _det4(M):
    """Exact determinants of a batch (..., 4, 4) by expansion along row 0."""
    total = np.zeros(M.shape[:-2], dtype=np.int64)
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        minor = M[..., 1:, :][..., cols]
        total += (-1) ** j * M[..., 0, j] * _det3(minor)
    return total


def scan_fourth_points_numpy(triples, grid, limit):
    """Numpy twin of the quadruple scan (same counts, same order).

    For an independent triple with a nonzero 3 x 3 minor on pivot columns
    ``P``, a fourth point ``g`` is in its span iff every 4 x 4 minor on
    ``P + {j}`` vanishes, and the quadruple is a circuit iff, in addition,
    all three Cramer numerators on ``P`` are nonzero.
    """
    from itertools import combinations
    pts = np.einsum("npi,npj,npk->npijk", triples[:, :, 0], triples[:, :, 1],
                    triples[:, :, 2]).reshape(len(triples), 3, 8)
    gv = np.einsum("gi,gj,gk->gijk", grid[:, 0], grid[:, 1], grid[:, 2]).reshape(len(grid), 8)
    combos = list(combinations(range(8), 3))
    examined = violations = 0
    for t in range(len(triples)):
        X = pts[t]
        piv = None
        for cols in combos:
            if _det3(X[:, list(cols)]) != 0:
                piv = list(cols)
                break
        if piv is None:
            continue
        inspan = np.ones(len(gv), dtype=bool)
        for j in range(8):
            if j in piv:
                continue
            M = np.empty((len(gv), 4, 4), dtype=np.int64)
            M[:, :3, :] = X[:, piv + [j]][None]
            M[:, 3, :] = gv[:, piv + [j]]
            inspan &= _det4(M) == 0
        circuit = inspan.copy()
        for i in range(3):
            M = np.repeat(X[:, piv][None], len(gv), axis=0)
            M[:, i, :] = gv[:, piv]
            circuit &= _det3(M) != 0
        for g in np.nonzero(circuit)[0]:
            examined += 1
            low = 3
            for f in range(3):
                F = np.concatenate([triples[t, :, f], grid[g, f][None]])
                d = 2 if np.any(F[:, 0][:, None] * F[:, 1][None, :]
                                - F[:, 1][:, None] * F[:, 0][None, :]) else 1
                low = min(low, d)
            if low >= 2:
                violations += 1
            if examined >= limit:
                return violations, examined
    return violations, examined


scan_fourth_points = _scan_loops if USE_NUMBA else scan_fourth_points_numpy
