"""Exact dense multilinear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Vectors are tuples of Fractions, matrices are 2-D numpy object
arrays of Fractions, and order-3 tensors are :class:`Tensor3` instances.

Matrix multiplication convention
--------------------------------
``mmult_tensor(n)`` lives in ``C^{n^2} (x) C^{n^2} (x) C^{n^2}`` with a 1 at
``((i,j), (j,k), (k,i))`` where a pair ``(r,s)`` maps to the flat index
``r*n + s``.  As a trilinear form this is ``trace(X Y Z)``, so the tensor is
invariant under cyclic permutation of the three factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Fraction",
    "Vector",
    "Rank1Term",
    "Tensor3",
    "to_rational",
    "as_vector",
    "basis_vector",
    "outer",
    "tensor_from_terms",
    "mmult_tensor",
    "flattening",
    "multilinear_rank",
    "contract",
    "matrix_rank",
    "as_matrix",
    "rref",
    "nullspace",
    "left_nullspace",
    "row_basis",
    "in_span",
    "solve_linear",
    "change_basis",
    "factor_index",
    "rank_one_factors",
]

Vector = tuple  # tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# scalars and vectors
# ---------------------------------------------------------------------------

def to_rational(x) -> Fraction:
    """Convert ``x`` to an exact Fraction.

    Accepts Python/numpy integers, Fractions and strings ``"p"`` or ``"p/q"``.
    Floats are rejected because they silently carry binary rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def as_vector(entries: Iterable) -> Vector:
    v = tuple(to_rational(x) for x in entries)
    if not v:
        raise ValueError("vectors must have positive dimension")
    return v


def basis_vector(i: int, dim: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(dim))


def _lcm_den(values) -> int:
    den = 1
    for x in values:
        d = x.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rank1Term:
    """The decomposable tensor ``coeff * a (x) b (x) c``."""

    coeff: Fraction
    a: Vector
    b: Vector
    c: Vector

    def __post_init__(self):
        object.__setattr__(self, "coeff", to_rational(self.coeff))
        for name in "abc":
            object.__setattr__(self, name, as_vector(getattr(self, name)))

    @property
    def dims(self):
        return (len(self.a), len(self.b), len(self.c))

    def tensor(self) -> "Tensor3":
        return tensor_from_terms([self], self.dims)


class Tensor3:
    """Immutable dense order-3 tensor with Fraction entries.

    Parameters
    ----------
    data : array_like
        Anything numpy can turn into a 3-D array; entries are converted with
        :func:`to_rational`.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.asarray(data, dtype=object)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ValueError(f"expected a non-empty 3-D array, got shape {arr.shape}")
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = to_rational(x)
        out.flags.writeable = False
        self._data = out

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Tensor3":
        # internal fast path: arr already holds Fractions
        obj = cls.__new__(cls)
        arr = np.array(arr, dtype=object, copy=True)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, dims) -> "Tensor3":
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ValueError(f"bad dims {dims}")
        arr = np.empty(dims, dtype=object)
        arr.fill(Fraction(0))
        return cls._wrap(arr)

    @property
    def dims(self) -> tuple:
        return tuple(self._data.shape)

    @property
    def array(self) -> np.ndarray:
        """Read-only object array view of the entries."""
        return self._data

    def __getitem__(self, idx) -> Fraction:
        return self._data[idx]

    def __add__(self, other: "Tensor3") -> "Tensor3":
        self._check(other)
        return Tensor3._wrap(self._data + other._data)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        self._check(other)
        return Tensor3._wrap(self._data - other._data)

    def __neg__(self) -> "Tensor3":
        return Tensor3._wrap(-self._data)

    def __mul__(self, s) -> "Tensor3":
        return Tensor3._wrap(self._data * to_rational(s))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and bool(np.all(self._data == other._data))

    __hash__ = None

    def _check(self, other):
        if not isinstance(other, Tensor3):
            raise TypeError("expected Tensor3")
        if other.dims != self.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {other.dims}")

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self._data.flat)

    def nonzero(self) -> dict:
        """Map ``(i, j, k) -> value`` over the nonzero entries."""
        return {idx: x for idx, x in np.ndenumerate(self._data) if x != 0}

    def flat(self) -> tuple:
        return tuple(self._data.flat)

    def to_float(self) -> np.ndarray:
        return np.array([float(x) for x in self._data.flat]).reshape(self.dims)

    def __repr__(self):
        nz = self.nonzero()
        body = ", ".join(f"{k}: {v}" for k, v in list(nz.items())[:6])
        more = "" if len(nz) <= 6 else f", ... ({len(nz)} nonzero)"
        return f"Tensor3(dims={self.dims}, {{{body}{more}}})"


def outer(a, b, c, coeff=1) -> Tensor3:
    a, b, c = as_vector(a), as_vector(b), as_vector(c)
    coeff = to_rational(coeff)
    arr = np.empty((len(a), len(b), len(c)), dtype=object)
    for i, j, k in product(range(len(a)), range(len(b)), range(len(c))):
        arr[i, j, k] = coeff * a[i] * b[j] * c[k]
    return Tensor3._wrap(arr)


def rank_one_factors(T: Tensor3) -> tuple:
    """Vectors ``(a, b, c)`` with ``T == a (x) b (x) c``.

    Raises
    ------
    ValueError
        If T is zero or not decomposable.
    """
    nz = T.nonzero()
    if not nz:
        raise ValueError("zero tensor has no rank-one factorization")
    i, j, k = next(iter(nz))
    arr = T.array
    piv = arr[i, j, k]
    a = tuple(arr[:, j, k])
    b = tuple(x / piv for x in arr[i, :, k])
    c = tuple(x / piv for x in arr[i, j, :])
    if outer(a, b, c) != T:
        raise ValueError("tensor is not decomposable")
    return a, b, c


def tensor_from_terms(terms: Sequence[Rank1Term], dims) -> Tensor3:
    """Materialize ``sum_t coeff_t a_t (x) b_t (x) c_t``.

    Raises
    ------
    ValueError
        If a term's factor dimensions disagree with ``dims``.
    """
    dims = tuple(int(d) for d in dims)
    out = np.empty(dims, dtype=object)
    out.fill(Fraction(0))
    for n, t in enumerate(terms):
        if t.dims != dims:
            raise ValueError(f"term {n} has dims {t.dims}, expected {dims}")
        if t.coeff == 0:
            continue
        for i, ai in enumerate(t.a):
            if ai == 0:
                continue
            ca = t.coeff * ai
            for j, bj in enumerate(t.b):
                if bj == 0:
                    continue
                cab = ca * bj
                for k, ck in enumerate(t.c):
                    if ck != 0:
                        out[i, j, k] += cab * ck
    return Tensor3._wrap(out)


def mmult_tensor(n: int) -> Tensor3:
    """Structure tensor of n x n matrix multiplication (see module docstring)."""
    if n < 1:
        raise ValueError("n must be positive")
    N = n * n
    arr = np.empty((N, N, N), dtype=object)
    arr.fill(Fraction(0))
    for i, j, k in product(range(n), repeat=3):
        arr[i * n + j, j * n + k, k * n + i] = Fraction(1)
    return Tensor3._wrap(arr)


# ---------------------------------------------------------------------------
# flattenings, contractions
# ---------------------------------------------------------------------------

def factor_index(factor) -> int:
    if isinstance(factor, str) and factor.upper() in ("A", "B", "C"):
        return "ABC".index(factor.upper())
    if factor in (0, 1, 2):
        return int(factor)
    raise ValueError(f"factor must be one of A, B, C (got {factor!r})")


def flattening(T: Tensor3, factor) -> np.ndarray:
    """Matrix of T as a map from the chosen factor's dual to the other two.

    Rows are indexed by the chosen factor, columns by the remaining pair in
    row-major order.
    """
    f = factor_index(factor)
    arr = np.moveaxis(T.array, f, 0)
    return np.array(arr.reshape(arr.shape[0], -1), dtype=object)


def contract(T: Tensor3, dual, factor) -> np.ndarray:
    """Plug ``dual`` into one slot of T, returning the remaining bilinear map.

    For ``factor="B"`` the result is ``M[i, k] = sum_j T[i, j, k] dual[j]``;
    the other factors are analogous with the surviving indices kept in order.
    """
    f = factor_index(factor)
    d = as_vector(dual)
    if len(d) != T.dims[f]:
        raise ValueError(f"dual has dim {len(d)}, factor {'ABC'[f]} has dim {T.dims[f]}")
    arr = np.moveaxis(T.array, f, 0)
    out = np.empty(arr.shape[1:], dtype=object)
    out.fill(Fraction(0))
    for n, x in enumerate(d):
        if x != 0:
            out = out + arr[n] * x
    return out


def multilinear_rank(T: Tensor3) -> tuple:
    return tuple(matrix_rank(flattening(T, f)) for f in range(3))


def change_basis(T: Tensor3, P, Q, R) -> Tensor3:
    """Apply ``P (x) Q (x) R`` to T (``P`` acts on the A factor, etc.)."""
    P, Q, R = (as_matrix(M) for M in (P, Q, R))
    arr = T.array
    out = np.tensordot(P, arr, axes=([1], [0]))
    out = np.tensordot(Q, out, axes=([1], [1])).transpose(1, 0, 2)
    out = np.tensordot(out, R, axes=([2], [1]))
    return Tensor3(out)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def as_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_rational(x)
    return out


def _integer_rows(M) -> list:
    rows = []
    for row in np.asarray(M, dtype=object):
        row = [to_rational(x) for x in row]
        den = _lcm_den(row)
        rows.append([int(x * den) for x in row])
    return rows


def matrix_rank(M) -> int:
    """Exact rank by fraction-free (Bareiss) elimination.

    Each row is first scaled to integers; Bareiss' update keeps every
    intermediate an exact integer (a minor of the scaled matrix).
    """
    A = [r for r in _integer_rows(M) if any(r)]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank, prev, col = 0, 1, 0
    while rank < m and col < n:
        piv = next((r for r in range(rank, m) if A[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, m):
            arc = A[r][col]
            row_r, row_p = A[r], A[rank]
            A[r] = [(p * row_r[c] - arc * row_p[c]) // prev for c in range(n)]
        prev = p
        rank += 1
        col += 1
    return rank


def rref(M) -> tuple:
    """Reduced row echelon form over Q. Returns ``(R, pivot_columns)``."""
    A = [list(r) for r in as_matrix(M)]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    R = np.empty((m, n), dtype=object)
    for i in range(m):
        R[i, :] = A[i]
    return R, pivots


def nullspace(M) -> list:
    """Basis (list of vectors) of ``{x : M x = 0}``."""
    M = as_matrix(M)
    n = M.shape[1]
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -R[i, f]
        basis.append(tuple(x))
    return basis


def left_nullspace(M) -> list:
    return nullspace(as_matrix(M).T)


def row_basis(rows) -> list:
    """Rows of the RREF spanning the same space as ``rows`` (possibly empty)."""
    rows = list(rows)
    if not rows:
        return []
    R, piv = rref(rows)
    return [tuple(R[i]) for i in range(len(piv))]


def in_span(basis, v) -> bool:
    """True iff ``v`` lies in the span of the vectors in ``basis``."""
    v = as_vector(v)
    if all(x == 0 for x in v):
        return True
    basis = list(basis)
    if not basis:
        return False
    return matrix_rank(basis + [v]) == matrix_rank(basis)


def solve_linear(A, b):
    """One exact solution of ``A x = b`` (free variables set to 0) or None."""
    A = as_matrix(A)
    b = as_vector(b)
    aug = np.concatenate([A, np.array(b, dtype=object).reshape(-1, 1)], axis=1)
    R, piv = rref(aug)
    n = A.shape[1]
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i, n]
    return tuple(x)
