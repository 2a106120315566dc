"""Floating-point ALS, capped border-rank probes and explicit degenerations."""
import numpy as np
import pytest

from borderrank import _kernels
from borderrank.catalog import ComponentId, sample, witness_curves
from borderrank.numeric import (
    ALSConfig,
    FloatTensor,
    ProbeReport,
    als,
    as_float_tensor,
    border_rank_probe,
    cap_slope,
    degeneration_residual,
    strassen_init,
    w_tensor,
)
from borderrank.segre import CurveJet, polynomial_product_jet
from borderrank.tensor_core import mmult_tensor, outer

MM = mmult_tensor(2).to_float()


def rel_residual(T, terms):
    approx = sum(np.einsum("i,j,k->ijk", a, b, c) for a, b, c in terms)
    return float(np.linalg.norm(T - approx) / np.linalg.norm(T))


def random_rank(r, dims, seed):
    rng = np.random.default_rng(seed)
    return sum(np.einsum("i,j,k->ijk", *(rng.standard_normal(d) for d in dims)) for _ in range(r))


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

def test_float_tensor_validation():
    with pytest.raises(ValueError):
        FloatTensor(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        FloatTensor(np.zeros((2, 2, 2)) + np.inf)
    assert as_float_tensor(mmult_tensor(2)).dims == (4, 4, 4)


def test_config_validation():
    for bad in (dict(rank=0), dict(rank=2, tolerance=0.0), dict(rank=2, ridge=-1.0),
                dict(rank=2, cap=0.0), dict(rank=2, restarts=0)):
        with pytest.raises(ValueError):
            ALSConfig(**bad)


def test_probe_report_best_is_min():
    with pytest.raises(ValueError):
        ProbeReport(0.5, [0.1, 0.5], [1, 1], [1.0, 1.0])
    rep = ProbeReport(0.1, [0.1, 0.5], [3, 4], [1.0, 2.0], rank=2)
    assert len(rep.to_records()) == 3


def test_rank_too_large_rejected():
    with pytest.raises(ValueError):
        als(np.ones((2, 2, 2)), ALSConfig(rank=5))


# ---------------------------------------------------------------------------
# ALS behaviour
# ---------------------------------------------------------------------------

def test_rank_one_exact():
    T = outer((1, 2, 0), (3, -1, 1), (1, 1, 2)).to_float()
    terms, rep = als(T, ALSConfig(rank=1, max_sweeps=10, seed=1))
    assert rep.best_residual < 1e-12
    assert rep.sweeps[0] <= 10


@pytest.mark.parametrize("seed", range(4))
def test_monotone_without_ridge(seed):
    T = random_rank(3, (3, 3, 3), seed) + 0.1 * np.random.default_rng(seed).standard_normal((3, 3, 3))
    _, rep = als(T, ALSConfig(rank=2, max_sweeps=200, seed=seed))
    assert rep.jitter_restarts == 0
    h = np.array(rep.histories[0])
    assert np.all(np.diff(h) <= 1e-12)


def test_reported_residual_is_recomputable():
    T = random_rank(3, (3, 4, 5), 2)
    terms, rep = als(T, ALSConfig(rank=2, max_sweeps=100, restarts=3, seed=4))
    assert abs(rep.best_residual - rel_residual(T, terms)) < 1e-12
    assert rep.best_residual == min(rep.residuals)


def test_deterministic_per_seed():
    cfg = ALSConfig(rank=3, max_sweeps=50, restarts=2, seed=9)
    _, r1 = als(MM, cfg)
    _, r2 = als(MM, cfg)
    assert r1.residuals == r2.residuals


@pytest.mark.parametrize("perm", [(1, 2, 0), (2, 0, 1), (1, 0, 2)])
def test_factor_permutation_symmetry(perm):
    T = random_rank(2, (3, 3, 3), 8)
    _, r1 = als(T, ALSConfig(rank=2, max_sweeps=2000, restarts=3, seed=0))
    _, r2 = als(np.transpose(T, perm), ALSConfig(rank=2, max_sweeps=2000, restarts=3, seed=0))
    assert abs(r1.best_residual - r2.best_residual) < 1e-9


def test_strassen_initialized_rank_seven():
    _, rep = als(MM, ALSConfig(rank=7, max_sweeps=50, init=strassen_init()))
    assert rep.residuals[0] < 1e-8


def test_strassen_init_converges_fastest():
    _, s = als(MM, ALSConfig(rank=7, max_sweeps=3000, init=strassen_init()))
    _, r = als(MM, ALSConfig(rank=7, max_sweeps=3000, restarts=4, seed=0))
    converged = [n for n, res in zip(r.sweeps, r.residuals) if res < 1e-8]
    assert s.sweeps[0] <= min(converged or r.sweeps)


def test_ridge_runs_and_stays_finite():
    _, rep = als(MM, ALSConfig(rank=6, max_sweeps=100, ridge=1e-3, seed=2))
    assert np.isfinite(rep.best_residual) and rep.best_residual > 1e-3


def test_cap_bounds_term_norms():
    terms, rep = als(w_tensor().to_float(), ALSConfig(rank=2, max_sweeps=200, cap=5.0, seed=1))
    for a, b, c in terms:
        assert np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c) <= 5.0 * (1 + 1e-9)


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------

def test_w_rank_three_exact():
    reps = border_rank_probe(w_tensor(), 3, restarts=3, caps=[100])
    assert reps[0].best_residual < 1e-12


def test_w_rank_two_improves_with_cap():
    reps = border_rank_probe(w_tensor(), 2, restarts=2, caps=[10, 100], max_nfev=5000)
    assert reps[1].best_residual < reps[0].best_residual
    assert reps[1].max_entry[reps[1].best_index] > reps[0].max_entry[reps[0].best_index]
    assert cap_slope(reps) < 0


def test_cap_slope_fit():
    reps = [ProbeReport(1.0 / c, [1.0 / c], [1], [1.0], cap=c) for c in (10, 100, 1000)]
    assert abs(cap_slope(reps) + 1.0) < 1e-12


# ---------------------------------------------------------------------------
# explicit degenerations
# ---------------------------------------------------------------------------

def w_curves():
    f = [(1, 0), (0, 1)]
    return [CurveJet((outer((1, 0), (1, 0), (1, 0)),)), polynomial_product_jet(f, f, f)]


def test_w_degeneration_slope_one():
    s = degeneration_residual(w_curves(), w_tensor())
    assert s.matches(1.0)


def test_s6_0_constant_curves_zero():
    spec, T = sample(ComponentId.S6_0, 0)
    s = degeneration_residual(witness_curves(spec), T)
    assert s.identically_zero and s.slope is None


def test_j_s4_t2_degeneration_slope_one():
    for seed in range(2):
        spec, T = sample(ComponentId.J_S4_T2, seed)
        assert degeneration_residual(witness_curves(spec), T).matches(1.0)


# ---------------------------------------------------------------------------
# kernel parity
# ---------------------------------------------------------------------------

def test_sweep_numpy_matches_dispatch():
    rng = np.random.default_rng(0)
    A, B, C = (rng.standard_normal((4, 5)) for _ in range(3))
    A2, B2, C2 = A.copy(), B.copy(), C.copy()
    r1, ok1 = _kernels.als_sweep(MM, A, B, C, 0.0)
    r2, ok2 = _kernels.als_sweep_numpy(MM, A2, B2, C2, 0.0)
    assert ok1 and ok2
    assert abs(r1 - r2) < 1e-9 * max(1.0, r2)
    for X, Y in ((A, A2), (B, B2), (C, C2)):
        assert np.allclose(X, Y, atol=1e-9)


def test_six_term_count_parity():
    rng = np.random.default_rng(1)
    target = np.array([int(x) for x in mmult_tensor(2).flat()], dtype=np.int64)
    f = rng.integers(-1, 2, size=(500, 3, 6, 4)).astype(np.int64)
    assert _kernels.count_exact_matches(f, target) == _kernels.count_exact_matches_numpy(f, target)
    # all-zero factors reproduce the zero tensor: every sample is a hit
    zero = np.zeros(64, dtype=np.int64)
    g = np.zeros((3, 3, 6, 4), dtype=np.int64)
    assert _kernels.count_exact_matches(g, zero) == 3 == _kernels.count_exact_matches_numpy(g, zero)
