"""Exact certificates: Strassen, reductions, ideals, parametric matrices, lemmas."""
import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy

from borderrank.certify import (
    DecompositionCandidate,
    ParametricCase,
    ReductionCaseId,
    brute_force_rank_one_combination,
    degenerate_quadruple_falsification,
    left_ideal,
    outcombos_allowed,
    outcombos_check,
    parametric_case_matrix,
    polynomial_identity_check,
    random_six_term_falsification,
    rank_one_combination_exists,
    reduce_to_sigma5,
    reduction_tensor,
    right_ideal,
    same_subspace,
    sample_reduction_case,
    strassen_slice_bound,
    strassen_terms,
    verify_decomposition,
)
from borderrank.segre import plane_contains, polynomial_product_jet
from borderrank.tensor_core import (
    Rank1Term,
    Tensor3,
    change_basis,
    matrix_rank,
    mmult_tensor,
    multilinear_rank,
    outer,
    tensor_from_terms,
)

MM = mmult_tensor(2)


def numeric_matmul_check(terms):
    # oracle: the bilinear algorithm computes X @ Y on random integer matrices
    rng = np.random.default_rng(0)
    for _ in range(5):
        X, Y = rng.integers(-9, 10, size=(2, 2)), rng.integers(-9, 10, size=(2, 2))
        out = np.zeros(4, dtype=object)
        for t in terms:
            m = sum(a * x for a, x in zip(t.a, X.flat)) * sum(b * y for b, y in zip(t.b, Y.flat))
            out = out + np.array([t.coeff * m * c for c in t.c], dtype=object)
        P = X @ Y
        # output entry (i, k) sits at flat index k*2 + i
        if any(out[k * 2 + i] != P[i, k] for i in range(2) for k in range(2)):
            return False
    return True


# ---------------------------------------------------------------------------
# Strassen
# ---------------------------------------------------------------------------

def test_strassen_seven_rank_one_terms():
    terms = strassen_terms()
    assert len(terms) == 7
    for t in terms:
        assert multilinear_rank(t.tensor()) == (1, 1, 1)


def test_strassen_sums_to_mmult():
    assert verify_decomposition(DecompositionCandidate(strassen_terms(), MM))
    assert numeric_matmul_check(strassen_terms())


def test_empty_candidate_vs_zero():
    assert verify_decomposition(DecompositionCandidate([], Tensor3.zeros((2, 2, 2))))


def test_strassen_perturbations_fail():
    terms = strassen_terms()
    for n, t in enumerate(terms):
        bumped = terms[:n] + [Rank1Term(t.coeff + 1, t.a, t.b, t.c)] + terms[n + 1:]
        assert not verify_decomposition(DecompositionCandidate(bumped, MM))


def test_six_term_falsification_small():
    hits, n = random_six_term_falsification(2000, seed=3)
    assert (hits, n) == (0, 2000)


def test_six_term_counter_detects_a_hit():
    # sanity of the counting kernel: plant the exact 7-term decomposition padded to 7 slots
    from borderrank import _kernels
    terms = strassen_terms()
    f = np.array([[[int(t.coeff * x) if k == 2 else int(x) for x in (t.a, t.b, t.c)[k]]
                   for t in terms] for k in range(3)], dtype=np.int64)[None]
    target = np.array([int(x) for x in MM.flat()], dtype=np.int64)
    assert _kernels.count_exact_matches(f, target) == 1
    assert _kernels.count_exact_matches_numpy(f, target) == 1


# ---------------------------------------------------------------------------
# slice bound
# ---------------------------------------------------------------------------

def test_slice_bound_mmult():
    sb = strassen_slice_bound(MM)
    assert sb.bound == 6 and sb.commutator_rank == 4


def test_slice_bound_basis_invariant():
    rng = np.random.default_rng(7)

    def inv():
        while True:
            M = rng.integers(-3, 4, size=(4, 4))
            if round(np.linalg.det(M)) != 0:
                return M

    for _ in range(3):
        assert strassen_slice_bound(change_basis(MM, inv(), inv(), inv())).bound == 6


def test_slice_bound_rank_one_diagnostic():
    T = outer((1, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 0))
    sb = strassen_slice_bound(T)
    assert sb.bound == 0 and sb.diagnostic


def test_slice_bound_random_tensor():
    rng = np.random.default_rng(0)
    for seed in range(3):
        T = Tensor3(rng.integers(-5, 6, size=(4, 4, 4)))
        assert strassen_slice_bound(T, seed=seed).bound >= 6


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("cid", list(ReductionCaseId), ids=lambda c: c.value)
def test_reductions_verify(cid):
    for seed in range(10):
        w = reduce_to_sigma5(sample_reduction_case(cid, seed))
        assert w.verified
        assert len(w.curves) == 5
        assert w.limit.dimension == 5
        assert w.x == reduction_tensor(w.case)


@pytest.mark.parametrize("cid", list(ReductionCaseId), ids=lambda c: c.value)
def test_reduction_plane_misses_generic_point(cid):
    w = reduce_to_sigma5(sample_reduction_case(cid, 0))
    assert not plane_contains(w.limit, MM)


def test_ex42_witness_is_osculating_point():
    # the case tensor is the t^3 coefficient of one product curve with a cubic C-factor
    case = sample_reduction_case(ReductionCaseId.EX_4_2_COINCIDENT, 4)
    w = reduce_to_sigma5(case)
    A, B = w.substitutions["A(t)"], w.substitutions["B(t)"]
    G = [w.substitutions[f"gamma{i}"] for i in range(4)]
    jet = polynomial_product_jet(A, B, G, order=3)
    assert jet.coefficients[3] == w.x


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------

def rank_one_dual(rng):
    while True:
        u, v = rng.integers(-4, 5, size=2), rng.integers(-4, 5, size=2)
        if u.any() and v.any():
            return tuple(int(x) for x in np.outer(u, v).flat)


def test_left_ideal_rank_one_dim_two():
    assert left_ideal((1, 0, 0, 0)).dim == 2


def test_ideal_invertible_dim_four():
    assert left_ideal((1, 0, 0, 1)).dim == 4
    assert right_ideal((0, 1, -1, 0)).dim == 4


def test_zero_generator_rejected():
    with pytest.raises(ValueError):
        left_ideal((0, 0, 0, 0))


def test_left_ideal_matches_matrix_products():
    # oracle: the span of X b over all X, with entries laid out as the C factor
    rng = np.random.default_rng(1)
    for _ in range(10):
        b = rank_one_dual(rng)
        Bm = np.array(b, dtype=object).reshape(2, 2)
        imgs = []
        for n in range(4):
            X = np.zeros((2, 2), dtype=object)
            X.flat[n] = 1
            P = X.dot(Bm)
            imgs.append(tuple(P[i, k] for k in range(2) for i in range(2)))
        assert same_subspace(left_ideal(b).image_basis, imgs)


def test_ideal_suite_random():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = rank_one_dual(rng), rank_one_dual(rng)
        L, R = left_ideal(b), right_ideal(a)
        assert L.dim == 2 and R.dim == 2
        assert not same_subspace(L.image_basis, R.image_basis)


def test_ideal_dims_only_two_or_four():
    for d in itertools.product(range(-1, 2), repeat=4):
        if not any(d):
            continue
        rank = matrix_rank(np.array(d, dtype=object).reshape(2, 2))
        assert left_ideal(d).dim == (2 if rank == 1 else 4)


# ---------------------------------------------------------------------------
# parametric matrices
# ---------------------------------------------------------------------------

def test_antitriangular_determinant_identity_symbolic():
    x, y, z = sympy.symbols("x y z")
    M = sympy.Matrix([[x + y + z, x + y, x], [x + y, x, 0], [x, 0, 0]])
    assert sympy.expand(M.det()) == -x ** 3
    assert polynomial_identity_check(lambda *v: parametric_case_matrix("ANTITRIANGULAR", *v)[1],
                                     lambda x, y, z: -Fraction(x) ** 3)


def test_antitriangular_rank_drop_iff_x_zero():
    pts = [Fraction(v) for v in (-2, -1, 0, 1, Fraction(1, 2), 3)]
    for x, y, z in itertools.product(pts, repeat=3):
        M, d = parametric_case_matrix(ParametricCase.ANTITRIANGULAR, x, y, z)
        assert (matrix_rank(M) <= 2) == (x == 0)
        assert d == -x ** 3


def test_antitriangular_at_zero_has_rank_two():
    M, _ = parametric_case_matrix("ANTITRIANGULAR", 0, 1, 1)
    assert matrix_rank(M) == 2


def test_diagonal_case_rank_two():
    M, d = parametric_case_matrix("DIAGONAL", 1, 1, 0)
    assert matrix_rank(M) == 2 and d == 0


def test_block_case_determinant():
    for x, y, z in itertools.product(range(-2, 3), repeat=3):
        _, d = parametric_case_matrix("BLOCK_A", x, y, z)
        assert d == -x * y * y


# ---------------------------------------------------------------------------
# small lemmas
# ---------------------------------------------------------------------------

def test_rank_one_combination_small():
    e1, e2 = (1, 0, 0), (0, 1, 0)
    assert rank_one_combination_exists([(e1, e1), (e1, e2)])
    assert not rank_one_combination_exists([(e1, e1), (e2, e2)])
    with pytest.raises(ValueError):
        rank_one_combination_exists([(e1, e1), (e2, e1)])


def test_rank_one_combination_matches_brute_force():
    rng = np.random.default_rng(3)
    for trial in range(30):
        s = int(rng.integers(2, 4))
        B = [tuple(int(x) for x in rng.integers(-2, 3, size=3)) for _ in range(s)]
        if matrix_rank(B) < s:
            continue
        if trial % 2:
            base = tuple(int(x) for x in rng.integers(1, 3, size=3))
            A = [tuple(int(m) * x for x in base) for m in rng.integers(1, 3, size=s)]
        else:
            A = [tuple(int(x) for x in rng.integers(-2, 3, size=3)) for _ in range(s)]
            if any(not any(a) for a in A):
                continue
        pairs = list(zip(A, B))
        assert rank_one_combination_exists(pairs) == brute_force_rank_one_combination(pairs)


def test_outcombos_r4_shared_ab():
    a, b = (1, 0, 0), (0, 1, 0)
    cs = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)]
    rep = outcombos_check([Rank1Term(1, a, b, c) for c in cs])
    assert rep.dims == (1, 1, 3) and rep.allowed


def test_outcombos_r5_planar_section():
    # five points a (x) beta_i (x) gamma_i on a 1 x 2 x 2 Segre, dependent in dim 4
    a = (1, 0)
    pts = [((1, 0), (1, 0)), ((0, 1), (0, 1)), ((1, 1), (1, 1)),
           ((1, -1), (1, -1)), ((1, 2), (1, 2))]
    rep = outcombos_check([Rank1Term(1, a, b, c) for b, c in pts])
    assert rep.dims == (1, 2, 2) and rep.allowed


def test_outcombos_rejects_independent():
    with pytest.raises(ValueError):
        outcombos_check([Rank1Term(1, (1, 0), (1, 0), (1, 0)), Rank1Term(1, (0, 1), (0, 1), (0, 1))])


def test_outcombos_table():
    assert outcombos_allowed(4, (1, 2, 2))
    assert not outcombos_allowed(4, (2, 2, 2))
    assert outcombos_allowed(5, (2, 2, 2))
    assert not outcombos_allowed(5, (2, 2, 3))


def brute_circuits_222(triple, grid):
    # oracle: plain Fraction ranks of every candidate quadruple
    def vec(p):
        return [Fraction(int(x)) for x in np.einsum("i,j,k->ijk", *p).flat]

    out = []
    base = [vec(p) for p in triple]
    if matrix_rank(base) < 3:
        return out
    for g in grid:
        rows = base + [vec(g)]
        if matrix_rank(rows) != 3:
            continue
        if any(matrix_rank([rows[i] for i in range(4) if i != s]) < 3 for s in range(3)):
            continue
        low = min(matrix_rank([list(p[f]) for p in list(triple) + [g]]) for f in range(3))
        out.append(low)
    return out


def test_quadruple_scan_matches_bruteforce():
    from borderrank import _kernels
    rng = np.random.default_rng(5)
    grid = _kernels.segre_grid_222()
    triples = _kernels.random_triples(rng, 12)
    exp_v = exp_e = 0
    for t in triples:
        lows = brute_circuits_222(t, grid)
        exp_e += len(lows)
        exp_v += sum(1 for l in lows if l >= 2)
    for fn in (_kernels.scan_fourth_points, _kernels.scan_fourth_points_numpy):
        assert fn(triples, grid, 10 ** 9) == (exp_v, exp_e)
    assert exp_e > 0


def test_quadruple_falsification_small():
    v, e = degenerate_quadruple_falsification(5000, seed=1)
    assert v == 0 and e == 5000
