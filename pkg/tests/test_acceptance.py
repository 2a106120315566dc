"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every criterion prints one ``PASS``/``FAIL`` line (also collected into the
pytest terminal summary by ``conftest.py``).  Run standalone with
``python tests/test_acceptance.py`` to get just the nine lines.
"""
import time

import numpy as np
import pytest

from borderrank.catalog import ComponentId, component_membership, sample
from borderrank.certify import (
    DecompositionCandidate,
    ReductionCaseId,
    degenerate_quadruple_falsification,
    left_ideal,
    parametric_case_matrix,
    polynomial_identity_check,
    random_six_term_falsification,
    reduce_to_sigma5,
    right_ideal,
    same_subspace,
    sample_reduction_case,
    strassen_slice_bound,
    strassen_terms,
    verify_decomposition,
)
from borderrank.numeric import ALSConfig, als, border_rank_probe, cap_slope, w_tensor
from borderrank.segre import curve_jet, extract_ys, polynomial_product_jet
from borderrank.tensor_core import Fraction, matrix_rank, mmult_tensor

RESULTS = {}


def record(n, title, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = (f"criterion {n} {status}: {title} | {detail} | "
            f"{elapsed:.1f}s (budget {budget:.0f}s{'' if within else ', EXCEEDED'})")
    RESULTS[n] = line
    print(line)
    return ok and within


# ---------------------------------------------------------------------------
# the nine criteria
# ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    ok = verify_decomposition(DecompositionCandidate(strassen_terms(), mmult_tensor(2)))
    n = len(strassen_terms())
    return record(1, "Strassen exactness", ok and n == 7,
                  f"{n} terms, exact sum equal: {ok}", time.perf_counter() - t0, 1)


def criterion_2():
    t0 = time.perf_counter()
    sb = strassen_slice_bound(mmult_tensor(2))
    return record(2, "slice bound", sb.bound == 6,
                  f"bound {sb.bound} (commutator rank {sb.commutator_rank})",
                  time.perf_counter() - t0, 1)


def criterion_3():
    t0 = time.perf_counter()
    failed = []
    for cid in ComponentId:
        for seed in range(20):
            spec, _ = sample(cid, seed)
            _, _, contains = component_membership(spec)
            if not contains:
                failed.append((cid.name, seed))
    return record(3, "catalog membership", not failed,
                  f"16 components x 20 seeds, failures {failed}", time.perf_counter() - t0, 120)


def criterion_4():
    t0 = time.perf_counter()
    failed = []
    for cid in ReductionCaseId:
        for seed in range(100):
            if not reduce_to_sigma5(sample_reduction_case(cid, seed)).verified:
                failed.append((cid.value, seed))
    return record(4, "sigma_5 reductions", not failed,
                  f"4 cases x 100 seeds, failures {failed}", time.perf_counter() - t0, 60)


def criterion_5():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(100):
        polys = []
        for _f in range(3):
            lead = rng.integers(-9, 10, size=4)
            while not lead.any():
                lead = rng.integers(-9, 10, size=4)
            polys.append([tuple(int(x) for x in lead)]
                         + [tuple(int(x) for x in rng.integers(-9, 10, size=4)) for _ in range(3)])
        jet = polynomial_product_jet(*polys, order=3)
        base, ys = extract_ys(jet, "taylor")
        again = curve_jet(base, ys, convention="taylor")
        if again.coefficients != jet.coefficients:
            bad += 1
    return record(5, "jet round trip", bad == 0, f"100 degree-3 product curves, mismatches {bad}",
                  time.perf_counter() - t0, 30)


def criterion_6():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)

    def rank_one():
        while True:
            u, v = rng.integers(-5, 6, size=2), rng.integers(-5, 6, size=2)
            if u.any() and v.any():
                return tuple(int(x) for x in np.outer(u, v).flat)

    bad = 0
    for _ in range(50):
        a, b = rank_one(), rank_one()
        L, R = left_ideal(b), right_ideal(a)
        if L.dim != 2 or same_subspace(L.image_basis, R.image_basis):
            bad += 1
    return record(6, "ideal suite", bad == 0, f"50 rank-one duals, violations {bad}",
                  time.perf_counter() - t0, 10)


def criterion_7():
    t0 = time.perf_counter()
    det_ok = polynomial_identity_check(lambda x, y, z: parametric_case_matrix("ANTITRIANGULAR", x, y, z)[1],
                                       lambda x, y, z: -Fraction(x) ** 3)
    pts = [Fraction(v) for v in (-2, -1, 0, 1, 2, Fraction(1, 3))]
    rank_ok = all((matrix_rank(parametric_case_matrix("ANTITRIANGULAR", x, y, z)[0]) <= 2) == (x == 0)
                  for x in pts for y in pts for z in pts)
    return record(7, "parametric matrix", det_ok and rank_ok,
                  f"det == -x^3 identity: {det_ok}; rank<=2 iff x=0: {rank_ok}",
                  time.perf_counter() - t0, 1)


def criterion_8():
    t0 = time.perf_counter()
    M2 = mmult_tensor(2)
    _, r7 = als(M2, ALSConfig(rank=7, restarts=20, max_sweeps=3000, seed=0))
    _, r6 = als(M2, ALSConfig(rank=6, restarts=50, max_sweeps=3000, cap=1e3, seed=0))
    probes = border_rank_probe(w_tensor(), 2, restarts=3, caps=[10, 30, 100, 300, 1000],
                               seed=0, max_nfev=20000)
    slope = cap_slope(probes)
    ok7 = r7.best_residual < 1e-6
    ok6 = r6.best_residual > 1e-3
    # residual ~ O(1/cap) means log residual against log cap has slope -1
    okw = abs(abs(slope) - 1.0) <= 0.2
    detail = (f"r=7 best {r7.best_residual:.2e} (<1e-6: {ok7}); "
              f"r=6 cap 1e3 best {r6.best_residual:.3e} (>1e-3: {ok6}); "
              f"W r=2 log-log slope {slope:.3f} (|slope| in 1+-0.2: {okw}; "
              f"residuals {', '.join(f'{p.best_residual:.2e}' for p in probes)})")
    return record(8, "numerical gap", ok7 and ok6 and okw, detail, time.perf_counter() - t0, 300)


def criterion_9():
    t0 = time.perf_counter()
    hits, n6 = random_six_term_falsification(10_000, seed=0)
    viol, nq = degenerate_quadruple_falsification(100_000, seed=0)
    ok = hits == 0 and n6 == 10_000 and viol == 0 and nq == 100_000
    return record(9, "falsification runs", ok,
                  f"{hits} exact hits in {n6} six-term samples; {viol} violations in {nq} circuits",
                  time.perf_counter() - t0, 180)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.acceptance
@pytest.mark.parametrize("fn", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(fn):
    assert fn()


if __name__ == "__main__":
    for fn in CRITERIA:
        fn()
