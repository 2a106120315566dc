"""Differential geometry of the Segre variety Seg(PA x PB x PC).

Tangent directions at ``x = a1 (x) b1 (x) c1`` are stored as data triples
``(a2, b2, c2)`` standing for ``a1 b1 c2 + a1 b2 c1 + a2 b1 c1``.  The splitting
of the ambient space is the one adapted to the base point: the second and
third fundamental forms are the six-term "one factor per slot" sums, with no
correction terms.

Two normalizations of the Taylor coefficients of a curve are supported:

``"lemma"``
    ``x_k = sum over multisets {k_1..k_j} of k with j >= 2 of F_j(y_k1..y_kj)
    + y_k`` with raw forms (no factorials).  Summing ``x_0..x_k`` reproduces
    the normal forms with the constants 2 and 6.
``"taylor"``
    the same sum with each term divided by the product of the factorials of
    the part multiplicities.  These are the honest Taylor coefficients of a
    product curve ``a(t) (x) b(t) (x) c(t)`` whose level-``u`` data is
    ``(a_u, b_u, c_u)``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Sequence

import numpy as np

from .tensor_core import (
    Tensor3,
    Vector,
    _lcm_den,
    as_vector,
    in_span,
    matrix_rank,
    outer,
    rank_one_factors,
    rref,
    solve_linear,
    to_rational,
)

__all__ = [
    "SegrePoint",
    "TangentData",
    "CurveJet",
    "LimitPlaneResult",
    "tangent_vector",
    "second_fundamental_form",
    "third_fundamental_form",
    "curve_jet",
    "extract_tangent_data",
    "extract_ys",
    "tangential_point",
    "polynomial_product_jet",
    "wedge_taylor_first_term",
    "wedge_expansion",
    "first_order_limit_plane",
    "plane_contains",
    "realize_weight_table",
    "weighted_cluster_curves",
    "printed_weight",
]

CONVENTIONS = ("lemma", "taylor")


def _zero(dim):
    return tuple(Fraction(0) for _ in range(dim))


@dataclass(frozen=True)
class SegrePoint:
    """The decomposable tensor ``a (x) b (x) c`` with all factors nonzero."""

    a: Vector
    b: Vector
    c: Vector

    def __post_init__(self):
        for name in "abc":
            v = as_vector(getattr(self, name))
            if all(x == 0 for x in v):
                raise ValueError(f"factor {name} of a Segre point must be nonzero")
            object.__setattr__(self, name, v)

    @property
    def dims(self):
        return (len(self.a), len(self.b), len(self.c))

    def tensor(self) -> Tensor3:
        return outer(self.a, self.b, self.c)


@dataclass(frozen=True)
class TangentData:
    """Tangent direction ``a1 b1 c2 + a1 b2 c1 + a2 b1 c1`` at ``base``.

    Missing components are zero.  An all-zero direction is allowed (it is
    the zero tangent vector) and ``is_zero`` reports it.
    """

    base: SegrePoint
    a2: Vector = None
    b2: Vector = None
    c2: Vector = None

    def __post_init__(self):
        for name, dim in zip(("a2", "b2", "c2"), self.base.dims):
            v = getattr(self, name)
            v = _zero(dim) if v is None else as_vector(v)
            if len(v) != dim:
                raise ValueError(f"{name} has dim {len(v)}, expected {dim}")
            object.__setattr__(self, name, v)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.a2 + self.b2 + self.c2)

    def scaled(self, s) -> "TangentData":
        s = to_rational(s)
        return TangentData(self.base, *(tuple(s * x for x in v) for v in (self.a2, self.b2, self.c2)))

    def __add__(self, other: "TangentData") -> "TangentData":
        _same_base(self, other)
        return TangentData(
            self.base,
            *(tuple(x + y for x, y in zip(u, v)) for u, v in
              ((self.a2, other.a2), (self.b2, other.b2), (self.c2, other.c2))),
        )

    def slot(self, i):
        return (self.a2, self.b2, self.c2)[i]


@dataclass(frozen=True)
class CurveJet:
    """Truncated expansion ``x_0 + t x_1 + ... + t^k x_k``; ``x_0`` is rank one."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if not coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        dims = coeffs[0].dims
        if any(x.dims != dims for x in coeffs):
            raise ValueError("jet coefficients have inconsistent dims")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def dims(self):
        return self.coefficients[0].dims

    def is_rank_one_start(self) -> bool:
        from .tensor_core import multilinear_rank
        return multilinear_rank(self.coefficients[0]) == (1, 1, 1)


@dataclass
class LimitPlaneResult:
    """Lowest nonvanishing wedge term of r curves and the plane it spans."""

    vanishing_order: int
    plane_basis: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def dimension(self):
        return len(self.plane_basis)


def _same_base(*ds):
    base = ds[0].base
    for d in ds[1:]:
        if d.base != base:
            raise ValueError("tangent data live at different base points")


def tangent_vector(y: TangentData) -> Tensor3:
    """The tangent tensor ``a1 b1 c2 + a1 b2 c1 + a2 b1 c1``."""
    p = y.base
    return outer(p.a, p.b, y.c2) + outer(p.a, y.b2, p.c) + outer(y.a2, p.b, p.c)


def second_fundamental_form(v: TangentData, w: TangentData) -> Tensor3:
    """``II(v,w) = a1b2c3 + a1b3c2 + a2b1c3 + a3b1c2 + a2b3c1 + a3b2c1``."""
    _same_base(v, w)
    p = v.base
    return (outer(p.a, v.b2, w.c2) + outer(p.a, w.b2, v.c2)
            + outer(v.a2, p.b, w.c2) + outer(w.a2, p.b, v.c2)
            + outer(v.a2, w.b2, p.c) + outer(w.a2, v.b2, p.c))


def third_fundamental_form(u: TangentData, v: TangentData, w: TangentData) -> Tensor3:
    """``III(u,v,w)``: one factor from each argument, summed over the 6 slot orders."""
    _same_base(u, v, w)
    out = Tensor3.zeros(u.base.dims)
    for x, y, z in permutations((u, v, w)):
        out = out + outer(x.a2, y.b2, z.c2)
    return out


def _multiset_partitions(m: int):
    """Partitions of m into at least two positive parts, as sorted tuples."""
    def rec(n, maxpart):
        if n == 0:
            yield ()
            return
        for p in range(min(n, maxpart), 0, -1):
            for rest in rec(n - p, p):
                yield (p,) + rest
    for part in rec(m, m):
        if len(part) >= 2:
            yield part


def _fubini(parts, ys):
    data = [ys[p - 1] for p in parts]
    if len(parts) == 2:
        return second_fundamental_form(*data)
    if len(parts) == 3:
        return third_fundamental_form(*data)
    return None  # F_j vanishes on the Segre for j >= 4


def _part_factor(parts, convention):
    if convention == "lemma":
        return Fraction(1)
    den = 1
    for mult in Counter(parts).values():
        den *= math.factorial(mult)
    return Fraction(1, den)


def curve_jet(base: SegrePoint, ys: Sequence[TangentData], k: int = None,
              convention: str = "lemma") -> CurveJet:
    """Taylor coefficients ``x_0..x_k`` built from the data ``y_1..y_k``.

    Parameters
    ----------
    base : SegrePoint
    ys : sequence of TangentData
        ``ys[m-1]`` is ``y_m``; all must live at ``base``.
    k : int, optional
        Order; defaults to ``len(ys)`` and must equal it.
    convention : {"lemma", "taylor"}
        See the module docstring.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    ys = list(ys)
    if k is None:
        k = len(ys)
    if len(ys) != k:
        raise ValueError(f"need exactly {k} tangent data, got {len(ys)}")
    for y in ys:
        if y.base != base:
            raise ValueError("tangent data must live at the base point")
    coeffs = [base.tensor()]
    for m in range(1, k + 1):
        x = tangent_vector(ys[m - 1])
        for parts in _multiset_partitions(m):
            term = _fubini(parts, ys)
            if term is not None:
                x = x + term * _part_factor(parts, convention)
        coeffs.append(x)
    return CurveJet(tuple(coeffs))


def tangential_point(jet: CurveJet) -> Tensor3:
    """``x_0 + x_1 + ... + x_k``."""
    out = jet.coefficients[0]
    for x in jet.coefficients[1:]:
        out = out + x
    return out


def extract_tangent_data(base: SegrePoint, v: Tensor3) -> TangentData:
    """Solve ``tangent_vector(y) == v`` for some data ``y`` at ``base``.

    Raises
    ------
    ValueError
        If ``v`` is not tangent at ``base``.
    """
    dA, dB, dC = base.dims
    cols = []
    for f, d in enumerate((dA, dB, dC)):
        for i in range(d):
            e = [Fraction(0)] * d
            e[i] = Fraction(1)
            y = TangentData(base, *(e if g == f else None for g in range(3)))
            cols.append(tangent_vector(y).flat())
    A = np.array(cols, dtype=object).T
    sol = solve_linear(A, v.flat())
    if sol is None:
        raise ValueError("tensor is not a tangent vector at the base point")
    return TangentData(base, sol[:dA], sol[dA:dA + dB], sol[dA + dB:])


def extract_ys(jet: CurveJet, convention: str = "lemma") -> tuple:
    """Invert :func:`curve_jet`: recover a base point and data ``y_1..y_k``."""
    a, b, c = rank_one_factors(jet.coefficients[0])
    base = SegrePoint(a, b, c)
    ys = []
    for m in range(1, jet.order + 1):
        rest = jet.coefficients[m]
        for parts in _multiset_partitions(m):
            term = _fubini(parts, ys + [None])
            if term is not None:
                rest = rest - term * _part_factor(parts, convention)
        ys.append(extract_tangent_data(base, rest))
    return base, tuple(ys)


def polynomial_product_jet(a_coeffs, b_coeffs, c_coeffs, order: int = None) -> CurveJet:
    """Taylor coefficients of ``a(t) (x) b(t) (x) c(t)`` for polynomial factors.

    ``a_coeffs[i]`` is the coefficient vector of ``t^i``.  By default the jet
    is exact (order = sum of the three degrees).
    """
    factors, scale = [], 1
    for coeffs in (a_coeffs, b_coeffs, c_coeffs):
        vecs = [as_vector(v) for v in coeffs]
        den = _lcm_den(x for v in vecs for x in v)
        scale *= den
        factors.append(np.array([[int(x * den) for x in v] for v in vecs], dtype=object))
    A, B, C = factors
    full = len(A) + len(B) + len(C) - 3
    order = full if order is None else order
    dims = (A.shape[1], B.shape[1], C.shape[1])
    coeffs = []
    for m in range(order + 1):
        acc = np.zeros(dims, dtype=object)
        for i in range(min(m, len(A) - 1) + 1):
            for j in range(min(m - i, len(B) - 1) + 1):
                l = m - i - j
                if l >= len(C):
                    continue
                acc += np.multiply.outer(np.multiply.outer(A[i], B[j]), C[l])
        out = np.empty(dims, dtype=object)
        for idx, v in np.ndenumerate(acc):
            out[idx] = Fraction(int(v), scale)
        coeffs.append(Tensor3._wrap(out))
    return CurveJet(tuple(coeffs))


# ---------------------------------------------------------------------------
# limit planes
# ---------------------------------------------------------------------------

def _integer_curve(jet: CurveJet) -> np.ndarray:
    """Coefficient matrix (order+1, N) of a jet scaled to integer entries."""
    flat = [x.flat() for x in jet.coefficients]
    den = _lcm_den(v for row in flat for v in row)
    out = np.empty((len(flat), len(flat[0])), dtype=object)
    for m, row in enumerate(flat):
        out[m, :] = [int(v * den) for v in row]
    return out


def _content(row):
    g = 0
    for v in row:
        if v:
            g = math.gcd(g, int(v))
            if g == 1:
                break
    return g


def _first_relation(L):
    """Integer vector lam != 0 with sum_i lam_i L[i] = 0, or None."""
    r = L.shape[0]
    aug = np.concatenate([L, np.eye(r, dtype=int).astype(object)], axis=1)
    R, piv = rref(aug)
    N = L.shape[1]
    for i in range(r):
        if all(x == 0 for x in R[i, :N]):
            lam = [R[i, N + j] for j in range(r)]
            den = _lcm_den(lam)
            lam = [int(x * den) for x in lam]
            if any(lam):
                return lam
    return None


def wedge_taylor_first_term(curves: Sequence[CurveJet]) -> LimitPlaneResult:
    """Lowest-order term of ``x_1(t) ^ ... ^ x_r(t)`` and its r-plane.

    The jets are read as the polynomial curves they describe.  The wedge is
    computed by valuation-reducing the coefficient rows: while the constant
    terms are dependent, a relation is used to replace one curve by a
    combination that vanishes at ``t = 0`` and is divided by ``t``.  Each such
    step raises the power of ``t`` factored out of the wedge by one, and the
    row operations are invertible for ``t != 0``, so the final constant terms
    span the limit plane and the accumulated powers give the vanishing order.
    If the accumulated order exceeds the sum of the jet orders the wedge is
    identically zero and the result is flagged degenerate.
    """
    curves = list(curves)
    if not curves:
        return LimitPlaneResult(0, [], False)
    dims = curves[0].dims
    if any(c.dims != dims for c in curves):
        raise ValueError("curves live in different ambient spaces")
    rows = [_integer_curve(c) for c in curves]
    bound = sum(c.order for c in curves)
    shifts = [0] * len(rows)

    def strip(i):
        P = rows[i]
        while P.shape[0] and not any(P[0]):
            P = P[1:]
            shifts[i] += 1
        rows[i] = P
        return P.shape[0] > 0

    while True:
        if not all(strip(i) for i in range(len(rows))) or sum(shifts) > bound:
            return LimitPlaneResult(sum(shifts), [], True)
        L = np.array([P[0] for P in rows], dtype=object)
        lam = _first_relation(L)
        if lam is None:
            break
        j = max((i for i, x in enumerate(lam) if x), key=lambda i: (shifts[i], i))
        deg = max(P.shape[0] for P in rows)
        acc = np.zeros((deg, L.shape[1]), dtype=object)
        for i, x in enumerate(lam):
            if x:
                acc[: rows[i].shape[0]] += x * rows[i]
        # the pivot curve's own shift is the one that is incremented
        g = math.gcd(*(_content(r) for r in acc)) if acc.size else 1
        if g > 1:
            acc = acc // g
        rows[j] = acc
    basis = [Tensor3._wrap(np.array([Fraction(int(v)) for v in P[0]], dtype=object).reshape(dims))
             for P in rows]
    return LimitPlaneResult(sum(shifts), basis, False)


def _wedge_vec(form: dict, v, maxlen=None) -> dict:
    out = {}
    nz = [(j, x) for j, x in enumerate(v) if x != 0]
    for I, cI in form.items():
        for j, x in nz:
            if j in I:
                continue
            pos = sum(1 for i in I if i > j)
            J = tuple(sorted(I + (j,)))
            val = (-cI if pos % 2 else cI) * x
            out[J] = out.get(J, 0) + val
    return {k: v for k, v in out.items() if v != 0}


def wedge_expansion(curves: Sequence[CurveJet], upto: int = None) -> list:
    """Explicit coefficients of ``x_1(t) ^ ... ^ x_r(t)`` by exterior algebra.

    Intended as an independent reference for small configurations.  All
    coefficient vectors are first expressed in coordinates of the span they
    generate, so the cost depends on that span's dimension, not the ambient
    one.  Returns a list, index ``m`` holding ``(pivots, {I: coeff})`` for the
    coefficient of ``t^m``; ``pivots`` are the ambient coordinates used.
    """
    curves = list(curves)
    upto = sum(c.order for c in curves) if upto is None else upto
    allvecs = [x.flat() for c in curves for x in c.coefficients]
    _, piv = rref(allvecs)
    polys = [[tuple(x.flat()[p] for p in piv) for x in c.coefficients] for c in curves]
    # partial[m] = degree-i form coefficient of t^m
    partial = [dict() for _ in range(upto + 1)]
    partial[0] = {(): Fraction(1)}
    for poly in polys:
        nxt = [dict() for _ in range(upto + 1)]
        for m, form in enumerate(partial):
            if not form:
                continue
            for k, v in enumerate(poly):
                if m + k > upto or all(x == 0 for x in v):
                    continue
                w = _wedge_vec(form, v)
                tgt = nxt[m + k]
                for I, x in w.items():
                    tgt[I] = tgt.get(I, 0) + x
        partial = [{I: x for I, x in f.items() if x != 0} for f in nxt]
    return [(tuple(piv), f) for f in partial]


def expansion_plane_contains(curves: Sequence[CurveJet], p: Tensor3, upto: int = None):
    """Reference membership test through :func:`wedge_expansion`.

    Returns ``(order, contains)`` where ``order`` is the first nonvanishing
    power and ``contains`` tells whether ``omega ^ p == 0`` for that
    coefficient ``omega`` (which is decomposable, so this is plane
    membership).  ``(None, None)`` if every computed coefficient vanishes.
    """
    coeffs = wedge_expansion(curves, upto)
    for m, (piv, form) in enumerate(coeffs):
        if form:
            flat = p.flat()
            allvecs = [x.flat() for c in curves for x in c.coefficients]
            if not in_span(allvecs, flat):
                return m, False
            coords = tuple(flat[q] for q in piv)
            return m, not _wedge_vec(form, coords)
    return None, None


def first_order_limit_plane(curves: Sequence[CurveJet]):
    """Closed-form limit when the first derivatives already suffice.

    Suppose ``x_1(0)..x_p(0)`` are independent and the remaining starting
    points satisfy ``x_s(0) = sum_j c_s^j x_j(0)``.  Then the coefficient of
    ``t^(r-p)`` in the wedge is, up to sign,
    ``x_1(0) ^ ... ^ x_p(0) ^ prod_s (sum_j c_s^j x_j'(0) - x_s'(0))``.
    Returns ``(r - p, basis)`` when that r-vector is nonzero and ``None``
    otherwise (the limit then needs higher-order terms).
    """
    starts = [c.coefficients[0].flat() for c in curves]
    derivs = [c.coefficients[1].flat() if c.order >= 1 else tuple(0 for _ in starts[0])
              for c in curves]
    indep = []
    for i, v in enumerate(starts):
        if matrix_rank([starts[j] for j in indep] + [v]) > len(indep):
            indep.append(i)
    rest = [i for i in range(len(curves)) if i not in indep]
    basis = [starts[i] for i in indep]
    M = np.array([starts[i] for i in indep], dtype=object).T
    for s in rest:
        coef = solve_linear(M, starts[s])
        vec = [-x for x in derivs[s]]
        for cj, j in zip(coef, indep):
            vec = [u + cj * w for u, w in zip(vec, derivs[j])]
        basis.append(tuple(vec))
    if matrix_rank(basis) < len(curves):
        return None
    dims = curves[0].dims
    return len(rest), [Tensor3(np.array(v, dtype=object).reshape(dims)) for v in basis]


def plane_contains(result: LimitPlaneResult, p: Tensor3) -> bool:
    """Exact membership of ``p`` in the span of ``result.plane_basis``."""
    if p.is_zero():
        return True
    return in_span([x.flat() for x in result.plane_basis], p.flat())


# ---------------------------------------------------------------------------
# weighted osculating realizations
# ---------------------------------------------------------------------------

def printed_weight(triple) -> int:
    """Weight of ``a_u b_v c_w`` in the tangential normal forms.

    Product of the factorials of the multiplicities of the nonzero levels
    among ``(u, v, w)``; e.g. 2 for (0,1,1), 6 for (1,1,1), 1 for (1,2,3).
    """
    out = 1
    for lvl, mult in Counter(x for x in triple if x > 0).items():
        out *= math.factorial(mult)
    return out


def _poly_mul(p, q, K):
    out = [Fraction(0)] * (K + 1)
    for i, x in enumerate(p):
        if x == 0:
            continue
        for j, y in enumerate(q[: K + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def _prime_exponents(q: Fraction) -> dict:
    out = Counter()
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        n = abs(n)
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] += sign
                n //= d
            d += 1
        if n > 1:
            out[n] += sign
    return out


def realize_weight_table(K: int, weights: dict):
    """Find a product curve whose osculating span carries a weighted point.

    We look for polynomials ``f_u(s) = sum_{m >= u} F[u][m] s^m`` with
    ``f_0(0) = 1`` and scalars ``lam[0..K]`` such that for all level triples
    ``u + v + w <= K``::

        sum_m lam[m] * [s^m] (f_u f_v f_w) = weights[sorted(u, v, w)]

    Then for any level vectors ``a_u, b_u, c_u`` the curve
    ``(sum_u f_u a_u) (x) (sum_u f_u b_u) (x) (sum_u f_u c_u)`` has Taylor
    coefficients ``X_m`` with ``sum_m lam[m] X_m = sum W(u,v,w) a_u b_v c_w``.

    The top level fixes ``lam[K]`` and the diagonal ``F[u][u]`` (with the
    gauge ``F[1][1] = 1``) multiplicatively; every lower level is linear in
    ``lam[L]`` and the offset-``K-L`` entries of F and is solved exactly.

    Returns
    -------
    F : list of list of Fraction, shape (K+1, K+1)
    lam : list of Fraction
    """
    W = {tuple(sorted(k)): to_rational(v) for k, v in weights.items()}
    triples = {L: [t for t in combinations_with_replacement(range(K + 1), 3) if sum(t) == L]
               for L in range(K + 1)}
    F = [[Fraction(0)] * (K + 1) for _ in range(K + 1)]
    lam = [Fraction(0)] * (K + 1)
    F[0][0] = Fraction(1)
    if K == 0:
        lam[0] = W.get((0, 0, 0), Fraction(0))
        return F, lam
    # top level: lam_K * D_u D_v D_w = W, solved on prime exponents
    top = triples[K]
    unknown = list(range(2, K + 1))  # D_2..D_K ; D_0 = D_1 = 1
    vals = [W.get(t, Fraction(0)) for t in top]
    if any(v <= 0 for v in vals):
        raise ValueError("top-level weights must be positive")
    A = [[1] + [t.count(u) for u in unknown] for t in top]
    exps = [_prime_exponents(v) for v in vals]
    primes = sorted(set().union(*exps))
    sol = {p: solve_linear(A, [e.get(p, 0) for e in exps]) for p in primes}
    if any(s is None or any(x.denominator != 1 for x in s) for s in sol.values()):
        raise ValueError("weight table has no rational realization at the top level")

    def value(idx):
        out = Fraction(1)
        for p, s in sol.items():
            out *= Fraction(p) ** int(s[idx])
        return out

    lam[K] = value(0)
    F[1][1] = Fraction(1)
    for n, u in enumerate(unknown):
        F[u][u] = value(n + 1)

    def coeff(t, m):
        prod_ = [Fraction(1)] + [Fraction(0)] * K
        for u in t:
            prod_ = _poly_mul(prod_, F[u], K)
        return prod_[m]

    for d in range(1, K + 1):
        L = K - d
        rows, rhs = [], []
        for t in triples[L]:
            known = sum(lam[m] * coeff(t, m) for m in range(L + 1, K + 1))
            row = [coeff(t, L)]
            for x in range(L + 1):
                c = Fraction(0)
                for pos, u in enumerate(t):
                    if u == x:
                        others = [t[q] for q in range(3) if q != pos]
                        c += F[others[0]][others[0]] * F[others[1]][others[1]]
                row.append(lam[K] * c)
            rows.append(row)
            rhs.append(W.get(t, Fraction(0)) - known)
        x = solve_linear(rows, rhs)
        if x is None:
            raise ValueError(f"weight table has no realization at level {L}")
        lam[L] = x[0]
        for u in range(L + 1):
            F[u][u + d] = x[1 + u]
    # final consistency check over every triple
    for L in range(K + 1):
        for t in triples[L]:
            got = sum(lam[m] * coeff(t, m) for m in range(L, K + 1))
            if got != W.get(t, Fraction(0)):
                raise AssertionError("realization failed self-check")
    return F, lam


def weighted_cluster_curves(levels, weights: dict, speeds) -> tuple:
    """Curves through one base point whose limit span carries a weighted point.

    Parameters
    ----------
    levels : sequence of (a_u, b_u, c_u)
        Level-``u`` vectors; ``levels[0]`` is the base point.
    weights : dict
        Weight table ``{sorted triple: weight}`` for triples of levels; the
        target point is ``sum W(u,v,w) a_u b_v c_w`` over ordered triples.
    speeds : sequence of int
        Distinct scalars ``j``; each yields the curve ``t -> X(j t)``.

    Returns
    -------
    (curves, lam) : tuple of CurveJet, list of Fraction
        The exact polynomial point curves and the combination coefficients.
    """
    K = len(levels) - 1
    F, lam = realize_weight_table(K, weights)
    polys = []
    for f in range(3):
        dim = len(as_vector(levels[0][f]))
        coeffs = [[Fraction(0)] * dim for _ in range(K + 1)]
        for u in range(K + 1):
            v = as_vector(levels[u][f])
            for m in range(K + 1):
                if F[u][m]:
                    coeffs[m] = [x + F[u][m] * y for x, y in zip(coeffs[m], v)]
        polys.append(coeffs)
    curves = []
    for j in speeds:
        j = Fraction(j)
        scaled = [[[j ** m * x for x in coeffs[m]] for m in range(K + 1)] for coeffs in polys]
        curves.append(polynomial_product_jet(*scaled))
    return tuple(curves), lam
