"""Floating-point rank-r approximation by alternating least squares.

Everything here is evidence, not proof: a small residual at rank r only
suggests border rank <= r, and a residual floor only suggests the opposite.
The exact counterparts live in :mod:`borderrank.certify`.

The optional norm cap bounds the product ``|a| |b| |c|`` of every term.
After each sweep the three factors of a term are rebalanced to equal norms
and, if the product exceeds the cap, scaled back onto it.  Capping is what
makes a border-rank degeneration visible: the residual then decays like
``1/cap`` instead of reaching zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .tensor_core import Tensor3

__all__ = [
    "FloatTensor",
    "ALSConfig",
    "ProbeReport",
    "DegenerationSeries",
    "as_float_tensor",
    "als",
    "border_rank_probe",
    "cap_slope",
    "degeneration_residual",
    "strassen_init",
    "w_tensor",
]


@dataclass(frozen=True)
class FloatTensor:
    """Dense double-precision 3-tensor with finite entries."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValueError("need a 3-way array with positive dims")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dims(self):
        return self.data.shape


def as_float_tensor(T) -> FloatTensor:
    if isinstance(T, FloatTensor):
        return T
    if isinstance(T, Tensor3):
        return FloatTensor(T.to_float())
    return FloatTensor(np.asarray(T, dtype=float))


@dataclass(frozen=True)
class ALSConfig:
    """Settings for :func:`als`.

    ``cap`` bounds ``|a| |b| |c|`` per term; ``init`` optionally fixes the
    starting factors ``(A, B, C)`` of the first restart.
    """

    rank: int
    max_sweeps: int = 500
    tolerance: float = 1e-13
    seed: int = 0
    restarts: int = 1
    ridge: float = 0.0
    cap: Optional[float] = None
    init: Optional[tuple] = None
    max_jitter: int = 10
    line_search: bool = True

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValueError("restarts and max_sweeps must be >= 1")
        if self.cap is not None and not self.cap > 0:
            raise ValueError("cap must be positive")


@dataclass
class ProbeReport:
    """Outcome of a batch of ALS restarts (residuals are relative)."""

    best_residual: float
    residuals: list
    sweeps: list
    max_entry: list
    histories: list = field(default_factory=list)
    jitter_restarts: int = 0
    cap: Optional[float] = None
    rank: int = 0
    best_index: int = 0

    def __post_init__(self):
        if self.residuals and self.best_residual != min(self.residuals):
            raise ValueError("best_residual must equal the minimum over restarts")

    def to_records(self) -> list:
        """Flat ``key=value`` lines, one per restart plus a summary."""
        lines = [f"rank={self.rank} cap={self.cap} best={self.best_residual:.6e} "
                 f"jitter_restarts={self.jitter_restarts}"]
        for i, (r, s, m) in enumerate(zip(self.residuals, self.sweeps, self.max_entry)):
            lines.append(f"restart={i} residual={r:.6e} sweeps={s} max_entry={m:.6e}")
        return lines


def _balance(A, B, C, cap):
    na = np.linalg.norm(A, axis=0)
    nb = np.linalg.norm(B, axis=0)
    nc = np.linalg.norm(C, axis=0)
    prod = na * nb * nc
    target = np.cbrt(prod if cap is None else np.minimum(prod, cap))
    live = prod > 0
    for M, n in ((A, na), (B, nb), (C, nc)):
        s = np.ones_like(n)
        s[live] = target[live] / n[live]
        M *= s


def _residual(T, A, B, C):
    R = T - np.einsum("ir,jr,kr->ijk", A, B, C)
    return float(np.sqrt(np.sum(R * R)))


def _one_run(T, A, B, C, cfg: ALSConfig, rng):
    norm = float(np.linalg.norm(T)) or 1.0
    jitters = 0
    history = [_residual(T, A, B, C) / norm]
    sweeps = 0
    while sweeps < cfg.max_sweeps:
        saved = (A.copy(), B.copy(), C.copy())
        res2, ok = _kernels.als_sweep(T, A, B, C, float(cfg.ridge))
        if not ok:
            if jitters >= cfg.max_jitter:
                A[:], B[:], C[:] = saved
                break
            jitters += 1
            scale = 1e-3 * max(1.0, float(np.max(np.abs(saved[0]))))
            for M, S in zip((A, B, C), saved):
                M[:] = S + scale * rng.standard_normal(S.shape)
            continue
        sweeps += 1
        if cfg.cap is not None:
            _balance(A, B, C, cfg.cap)
        res = _residual(T, A, B, C) / norm
        if cfg.line_search and sweeps > 2:
            # extrapolate along the last step; keep it only if it helps
            step = sweeps ** (1.0 / 3.0)
            trial = [S + step * (M - S) for M, S in zip((A, B, C), saved)]
            if cfg.cap is not None:
                _balance(*trial, cfg.cap)
            tres = _residual(T, *trial) / norm
            if tres < res:
                A[:], B[:], C[:] = trial
                res = tres
        prev = history[-1]
        history.append(res)
        if res < cfg.tolerance or abs(prev - res) < cfg.tolerance * max(prev, 1e-300):
            break
    return history, sweeps, jitters


def _random_factors(dims, r, rng, scale=1.0):
    return [scale * rng.standard_normal((d, r)) for d in dims]


def als(T, cfg: ALSConfig):
    """Run ALS restarts; return the best terms and a :class:`ProbeReport`.

    Returns
    -------
    terms : list of (a, b, c) float arrays of the best restart
    report : ProbeReport
    """
    X = as_float_tensor(T).data
    dims = X.shape
    r = cfg.rank
    if any(r > dims[i] * dims[j] for i, j in ((0, 1), (0, 2), (1, 2))):
        raise ValueError("rank exceeds the product of two dims")
    rng = np.random.default_rng(cfg.seed)
    residuals, sweeps, max_entry, histories = [], [], [], []
    best, best_factors, jit_total = math.inf, None, 0
    for k in range(cfg.restarts):
        if k == 0 and cfg.init is not None:
            A, B, C = (np.array(M, dtype=float).copy() for M in cfg.init)
            if A.shape != (dims[0], r) or B.shape != (dims[1], r) or C.shape != (dims[2], r):
                raise ValueError("init factors have the wrong shape")
        else:
            A, B, C = _random_factors(dims, r, rng)
        if cfg.cap is not None:
            _balance(A, B, C, cfg.cap)
        hist, n, jit = _one_run(X, A, B, C, cfg, rng)
        jit_total += jit
        res = _residual(X, A, B, C) / (float(np.linalg.norm(X)) or 1.0)
        residuals.append(res)
        sweeps.append(n)
        max_entry.append(float(max(np.max(np.abs(M)) for M in (A, B, C))))
        histories.append(hist)
        if res < best:
            best, best_factors = res, (A.copy(), B.copy(), C.copy())
    terms = [(best_factors[0][:, q], best_factors[1][:, q], best_factors[2][:, q])
             for q in range(r)]
    report = ProbeReport(min(residuals), residuals, sweeps, max_entry, histories,
                         jit_total, cfg.cap, r, int(np.argmin(residuals)))
    return terms, report


def _unit(M):
    n = np.linalg.norm(M, axis=0)
    n[n == 0] = 1.0
    return M / n, n


def _capped_model(p, dims, r, cap):
    s = cap * np.sin(p[:r])
    off, units, norms = r, [], []
    for d in dims:
        U, n = _unit(p[off:off + d * r].reshape(d, r))
        units.append(U)
        norms.append(n)
        off += d * r
    return s, units, norms


def _capped_jacobian(p, dims, r, cap):
    s, (U, V, Wm), norms = _capped_model(p, dims, r, cap)
    N = dims[0] * dims[1] * dims[2]
    cols = [(cap * np.cos(p[:r]))[None, :] * np.einsum("ir,jr,kr->ijkr", U, V, Wm).reshape(N, r)]
    factors = (U, V, Wm)
    for m, d in enumerate(dims):
        Um, n = factors[m], norms[m]
        # d u / d x = (I - u u^T) / |x|, one block per term
        P = (np.eye(d)[:, :, None] - Um[:, None, :] * Um[None, :, :]) / n[None, None, :]
        rest = [factors[i] for i in range(3) if i != m]
        spec = ("xdr,jr,kr->xjkdr", "xdr,ir,kr->ixkdr", "xdr,ir,jr->ijxdr")[m]
        blk = np.einsum(spec, P, *rest) * s[None, None, None, None, :]
        cols.append(blk.reshape(N, d * r))
    return np.concatenate(cols, axis=1)


def _lm_polish(T, A, B, C, cap, max_nfev=2000):
    """Trust-region least squares on ``sum cap sin(s_q) u_q v_q w_q``.

    The parameterization enforces the norm cap exactly, so the polished
    factors are feasible; returns the new (A, B, C).
    """
    from scipy.optimize import least_squares
    dims, r = T.shape, A.shape[1]
    na, nb, nc = (np.linalg.norm(M, axis=0) for M in (A, B, C))
    prod = na * nb * nc
    sig = np.arcsin(np.clip(prod / cap, -1.0, 1.0))
    p0 = np.concatenate([sig] + [M.ravel() for M in (A, B, C)])

    def fun(p):
        s, (U, V, Wm), _ = _capped_model(p, dims, r, cap)
        return (np.einsum("r,ir,jr,kr->ijk", s, U, V, Wm) - T).ravel()

    sol = least_squares(fun, p0, jac=lambda p: _capped_jacobian(p, dims, r, cap),
                        method="trf", x_scale="jac", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_nfev)
    s, (U, V, Wm), _ = _capped_model(sol.x, dims, r, cap)
    scale = np.cbrt(np.abs(s))
    return U * scale * np.sign(s), V * scale, Wm * scale


def border_rank_probe(T, rank: int, restarts: int = 5, caps: Sequence[float] = (10, 100, 1000),
                      seed: int = 0, max_sweeps: int = 500, ridge: float = 0.0,
                      polish: bool = True, max_nfev: int = 2000,
                      normalize: bool = True) -> list:
    """Probe the best rank-``rank`` approximation under a ladder of norm caps.

    Each cap runs capped ALS from fresh random starts plus a warm start from
    the previous cap's best factors.  With ``polish`` every restart is then
    refined by a trust-region least-squares solve that keeps the cap exactly;
    plain ALS stalls in the slow "swamp" regime of degenerate problems and
    would otherwise never reach the cap.  With ``normalize`` the tensor is
    scaled to unit Frobenius norm first, so caps are relative to ``|T|``.

    Returns
    -------
    list of ProbeReport, one per cap in increasing order
    """
    X = as_float_tensor(T).data
    norm = float(np.linalg.norm(X)) or 1.0
    if normalize:
        X, norm = X / norm, 1.0
    out, warm = [], None
    for i, cap in enumerate(sorted(float(c) for c in caps)):
        starts = []
        rng = np.random.default_rng([seed, i])
        if warm is not None:
            starts.append(tuple(M.copy() for M in warm))
        starts += [tuple(_random_factors(X.shape, rank, rng)) for _ in range(restarts)]
        residuals, sweeps, max_entry, hist, jit = [], [], [], [], 0
        best, best_f = math.inf, None
        for k, init in enumerate(starts):
            cfg = ALSConfig(rank=rank, max_sweeps=max_sweeps, seed=seed * 1000 + i * 100 + k,
                            ridge=ridge, cap=cap, init=init)
            terms, rep = als(X, cfg)
            F = tuple(np.stack([t[m] for t in terms], axis=1) for m in range(3))
            if polish:
                F = _lm_polish(X, *F, cap, max_nfev=max_nfev)
            res = _residual(X, *F) / norm
            residuals.append(res)
            sweeps.append(rep.sweeps[0])
            max_entry.append(float(max(np.max(np.abs(M)) for M in F)))
            hist.append(rep.histories[0] + [res])
            jit += rep.jitter_restarts
            if res < best:
                best, best_f = res, F
        warm = best_f
        out.append(ProbeReport(min(residuals), residuals, sweeps, max_entry, hist, jit, cap,
                               rank, int(np.argmin(residuals))))
    return out


def cap_slope(reports) -> float:
    """Least-squares slope of log(best residual) against log(cap)."""
    caps = np.log([rp.cap for rp in reports])
    res = np.log([max(rp.best_residual, 1e-300) for rp in reports])
    return float(np.polyfit(caps, res, 1)[0])


def w_tensor(n: int = 2) -> Tensor3:
    """``e1 e1 e2 + e1 e2 e1 + e2 e1 e1`` in ``C^n (x) C^n (x) C^n``."""
    from .tensor_core import basis_vector, outer
    e1, e2 = basis_vector(0, n), basis_vector(1, n)
    return outer(e1, e1, e2) + outer(e1, e2, e1) + outer(e2, e1, e1)


def strassen_init():
    """Factor matrices (4 x 7 each) of the 7-term decomposition of MMult_2."""
    from .certify import strassen_terms
    terms = strassen_terms()
    A = np.array([[float(x) for x in t.a] for t in terms]).T
    B = np.array([[float(x) for x in t.b] for t in terms]).T
    C = np.array([[float(t.coeff * x) for x in t.c] for t in terms]).T
    return A, B, C


# ---------------------------------------------------------------------------
# explicit degenerations
# ---------------------------------------------------------------------------

@dataclass
class DegenerationSeries:
    """Distances from ``T`` to ``span p_i(t)`` on a grid, with a log-log fit."""

    ts: list
    residuals: list
    slope: Optional[float]
    identically_zero: bool

    def matches(self, expected: float, slack: float = 0.2) -> bool:
        if self.identically_zero:
            return False
        return self.slope is not None and abs(self.slope - expected) <= slack


def _eval_curve(jet, t: Fraction):
    acc = None
    for k, x in enumerate(jet.coefficients):
        term = x * (t ** k)
        acc = term if acc is None else acc + term
    return [v for v in acc.flat()]


def _exact_projection_residual2(vectors, target) -> Fraction:
    from .tensor_core import solve_linear, row_basis
    basis = row_basis(vectors)
    if not basis:
        return sum(x * x for x in target)
    G = [[sum(u[i] * v[i] for i in range(len(u))) for v in basis] for u in basis]
    rhs = [sum(u[i] * target[i] for i in range(len(u))) for u in basis]
    coef = solve_linear(G, rhs)
    resid = list(target)
    for c, u in zip(coef, basis):
        for i in range(len(resid)):
            resid[i] -= c * u[i]
    return sum(x * x for x in resid)


def degeneration_residual(curves, T: Tensor3, ts: Sequence = None) -> DegenerationSeries:
    """Distance from ``T`` to the span of the curve values along a grid of t.

    Parameters
    ----------
    curves : sequence of CurveJet
        Polynomial families ``p_i(t) = sum_k t^k x_k``.
    T : Tensor3
        The limit point being approximated.
    ts : sequence of rationals, optional
        Defaults to ``1/2^j`` for j = 3..8.

    The squared distance is computed exactly with rationals, then floated.
    The slope is a least-squares fit of log residual against log t.
    """
    if ts is None:
        ts = [Fraction(1, 2 ** j) for j in range(3, 9)]
    ts = [Fraction(t) for t in ts]
    target = list(T.flat())
    res = []
    for t in ts:
        vecs = [_eval_curve(c, t) for c in curves]
        res.append(math.sqrt(float(_exact_projection_residual2(vecs, target))))
    zero = all(r == 0.0 for r in res)
    slope = None
    if not zero and all(r > 0 for r in res):
        x = np.log([float(t) for t in ts])
        y = np.log(res)
        slope = float(np.polyfit(x, y, 1)[0])
    return DegenerationSeries([float(t) for t in ts], res, slope, zero)
