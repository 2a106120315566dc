"""The sixteen components of sigma_6(Seg(P3 x P3 x P3)) minus sigma_5.

Each component has a normal form: a sum of monomials ``a_i b_j c_k`` in the
free vectors of a :class:`ComponentSpec`.  The monomial sums are stored as
text, transcribed verbatim (constants 2 and 6, zero placeholders and
redundant double-parenthesized terms included), and parsed on import.

Witness curves
--------------
For every component, :func:`witness_curves` returns six exact polynomial
curves on the Segre variety whose limiting 6-plane contains the normal form.
Tangential pieces with printed weights are realized by the osculating spans
of product curves built in :func:`borderrank.segre.weighted_cluster_curves`;
several points along one such curve (at distinct speeds) limit to its
osculating plane.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .segre import (
    CurveJet,
    LimitPlaneResult,
    plane_contains,
    printed_weight,
    wedge_taylor_first_term,
    weighted_cluster_curves,
)
from .tensor_core import Tensor3, as_vector, outer

__all__ = [
    "ComponentId",
    "ComponentSpec",
    "DegenerateWitnessError",
    "NORMAL_FORMS",
    "parse_monomials",
    "normal_form",
    "sample",
    "witness_curves",
    "component_membership",
    "vector_count",
]


class ComponentId(enum.Enum):
    S6_0 = 1
    J_S4_T2 = 2
    J_S3_T3 = 3
    J_T3_T3 = 4
    J_S2_T2_T2 = 5
    J_T2_T2_T2 = 6
    J_S2_T4 = 7
    J_T2_T4 = 8
    J_X_T2_T3 = 9
    J_X_T5 = 10
    J_X_T5P = 11
    T6 = 12
    T6P = 13
    T6PP = 14
    EX1 = 15
    EX2 = 16

    @classmethod
    def parse(cls, name) -> "ComponentId":
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown component {name!r}; choose from "
                             f"{', '.join(c.name for c in cls)}") from None


class DegenerateWitnessError(ValueError):
    """The spec is too special for the witness construction's spans."""


_T2 = "(a{0}b{0}c{1}+a{0}b{1}c{0}+a{1}b{0}c{0})"

NORMAL_FORMS = {
    ComponentId.S6_0: "a1b1c1+a2b2c2+a3b3c3+a4b4c4+a5b5c5+a6b6c6",
    ComponentId.J_S4_T2:
        "a1b1c1+a2b2c2+a3b3c3+a4b4c4+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
    ComponentId.J_S3_T3:
        "a1b1c1+a2b2c2+a3b3c3+a4b4c4+(a4b4c5+a4b5c4+a5b4c4)"
        "+[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]",
    ComponentId.J_T3_T3:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)"
        "+[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]"
        "+a4b4c4+(a4b4c5+a4b5c4+a5b4c4)"
        "+[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]",
    ComponentId.J_S2_T2_T2:
        "a1b1c1+a2b2c2+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)"
        "+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
    ComponentId.J_T2_T2_T2:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)"
        "+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
    ComponentId.J_S2_T4:
        "a1b1c1+a2b2c2+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)"
        "+[(a3b3c5+a3b5c3+a5b3c3)+2(a3b4c4+a4b3c4+a4b4c3)]"
        "+[(a3b3c6+a3b6c3+a6b3c3)+6a4b4c4"
        "+(a3b4c5+a3b5c4+a4b3c5+a5b3c4+a4b5c3+a5b4c3)]",
    ComponentId.J_T2_T4:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)"
        "+[(a3b3c5+a3b5c3+a5b3c3)+2(a3b4c4+a4b3c4+a4b4c3)]"
        "+[(a3b3c6+a3b6c3+a6b3c3)+6a4b4c4"
        "+(a3b4c5+a3b5c4+a4b3c5+a5b3c4+a4b5c3+a5b4c3)]",
    ComponentId.J_X_T2_T3:
        "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)+a4b4c4"
        "+(a4b4c5+a4b5c4+a5b4c4)"
        "+[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]",
    ComponentId.J_X_T5:
        "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)"
        "+[(a2b2c4+a2b4c2+a4b2c2)+2(a2b3c3+a3b2c3+a3b3c2)]"
        "+[(a2b2c5+a2b5c2+a5b2c2)+6a3b3c3"
        "+(a2b3c4+a2b4c3+a3b2c4+a4b2c3+a3b4c2+a4b3c2)]"
        "+[(a2b2c6+a2b6c2+a6b2c2)+2(a4b3c3+a3b4c3+a3b3c4)"
        "+(a2b3c5+a2b5c3+a3b2c5+a5b2c3+a3b5c2+a5b3c2)"
        "+2(a2b4c4+a4b2c4+a4b4c2)]",
    ComponentId.J_X_T5P:
        "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)"
        "+[(a2b2c4+a2b4c2+a4b2c2)+2(a2b3c3+a3b2c3+a3b3c2)]"
        "+(a2b2c5+a2b5c2+a5b2c2)"
        "+[(a2b2c6+a2b6c2+a6b2c2)+2(a2b5c5+a5b2c5+a5b5c2)]",
    ComponentId.T6:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)"
        "+[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]"
        "+[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2"
        "+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]"
        "+[(a1b1c5+a1b5c1+a5b1c1)+2(a2b2c3+a2b3c2+a3b2c2)"
        "+(a1b2c4+a1b4c2+a2b1c4+a4b1c2+a2b4c1+a4b2c1)"
        "+2(a1b3c3+a3b1c3+a3b3c1)]"
        "+[(a1b1c6+a1b6c1+a6b1c1)"
        "+2(a2b2c4+a2b4c2+a4b2c2)"
        "+2(a2b3c3+a3b2c3+a3b3c2)"
        "+(a1b2c5+a1b5c2+a2b1c5+a5b1c2+a2b5c1+a5b2c1)"
        "+(a1b3c4+a1b4c3+a3b1c4+a4b1c3+a3b4c1+a4b3c1)]",
    ComponentId.T6P:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)"
        "+[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]"
        "+[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2"
        "+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]"
        "+(a1b1c5+a1b5c1+a5b1c1)"
        "+[(a1b1c6+a1b6c1+a6b1c1)+2(a1b5c5+a5b1c5+a5b5c1)]",
    ComponentId.T6PP:
        "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)"
        "+[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]"
        "+[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2"
        "+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]"
        "+[(a1b1c5+a1b5c1+a5b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]"
        "+[(a1b1c6+a1b6c1+a6b1c1)+6a2b2c2"
        "+(a1b2c5+a1b5c2+a2b1c5+a5b1c2+a2b5c1+a5b2c1)]",
    ComponentId.EX1:
        "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)+0]"
        "+[(a1b1c4)+0+(a1b3c2+a3b1c2)]"
        "+[(a1b1c5+a1b5c1+a5b1c1)+0+(a1b3c3+a3b1c3+a3b3c1)+0]"
        "+((a1b1c2))+((a1b1c4+a1b3c2+a3b1c2))"
        "+[(a7b1c2+a1b7c2+a1b1c7)+(a1b3c4+a3b1c4+a3b3c2)]",
    ComponentId.EX2:
        "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)+0]"
        "+[(a1b1c4+a1b4c1+a4b1c1)+0+(a1b3c2+a3b1c2)]"
        "+((a1b1c2))+(a1b1c5+a1b5c2+a5b1c2)"
        "+[(a1b1c6+a1b6c2+a6b1c2)+2(a1b5c5+a5b1c5+a5b5c2)]",
}

_TOKEN = re.compile(r"\s*(?:(a(\d+)b(\d+)c(\d+))|(\d+)|([+()\[\]]))")


def parse_monomials(text: str) -> dict:
    """Parse a sum like ``"a1b1c1+2(a1b2c2+a2b1c2)+0"``.

    Returns ``{(i, j, k): coefficient}`` with 1-based indices; repeated
    monomials accumulate.  Grouping is by ``()`` or ``[]`` with an optional
    integer multiplier in front; a bare integer is a scalar term and must be 0.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"unparseable input at {text[pos:pos + 12]!r}")
        if m.group(1):
            tokens.append(("mono", tuple(int(m.group(g)) for g in (2, 3, 4))))
        elif m.group(5):
            tokens.append(("int", int(m.group(5))))
        else:
            tokens.append(("sym", m.group(6)))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr(closer):
        acc = {}
        while True:
            for k, v in term().items():
                acc[k] = acc.get(k, 0) + v
            kind, val = peek()
            if kind == "sym" and val == "+":
                take()
                continue
            if closer is None and kind == "end":
                return acc
            if kind == "sym" and val == closer:
                take()
                return acc
            raise ValueError(f"unexpected token {val!r}")

    def term():
        kind, val = peek()
        mult = 1
        if kind == "int":
            take()
            nk, nv = peek()
            if nk == "end" or (nk == "sym" and nv in "+)]"):
                if val != 0:
                    raise ValueError("nonzero scalar term in a tensor sum")
                return {}
            mult = val
            kind, val = peek()
        if kind == "mono":
            take()
            return {val: mult}
        if kind == "sym" and val in "([":
            take()
            inner = expr(")" if val == "(" else "]")
            return {k: mult * v for k, v in inner.items()}
        raise ValueError(f"unexpected token {val!r}")

    return {k: v for k, v in expr(None).items() if v != 0}


_PARSED = {cid: parse_monomials(text) for cid, text in NORMAL_FORMS.items()}


def vector_count(cid: ComponentId) -> int:
    mono = _PARSED[ComponentId.parse(cid)]
    return max(max(k) for k in mono)


@dataclass(frozen=True)
class ComponentSpec:
    """A component id and its free vectors ``a_1..a_n, b_1..b_n, c_1..c_n``.

    ``n`` is 6, except 7 for EX1.  Zeros and repetitions are allowed.
    """

    id: ComponentId
    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self):
        cid = ComponentId.parse(self.id)
        object.__setattr__(self, "id", cid)
        n = vector_count(cid)
        for name in "abc":
            vecs = tuple(as_vector(v) for v in getattr(self, name))
            if len(vecs) != n:
                raise ValueError(f"{cid.name} needs {n} {name}-vectors, got {len(vecs)}")
            if len({len(v) for v in vecs}) != 1:
                raise ValueError(f"{name}-vectors have inconsistent dimensions")
            object.__setattr__(self, name, vecs)

    @property
    def dims(self):
        return (len(self.a[0]), len(self.b[0]), len(self.c[0]))

    def vec(self, i):
        """Level vector ``(a_i, b_i, c_i)`` (1-based)."""
        return (self.a[i - 1], self.b[i - 1], self.c[i - 1])


def normal_form(spec: ComponentSpec) -> Tensor3:
    """The displayed monomial sum for ``spec.id`` evaluated on its vectors."""
    out = np.zeros(spec.dims, dtype=object)
    for (i, j, k), coeff in _PARSED[spec.id].items():
        out += np.multiply.outer(np.multiply.outer(np.array(spec.a[i - 1], dtype=object),
                                                   np.array(spec.b[j - 1], dtype=object)),
                                 np.array(spec.c[k - 1], dtype=object)) * coeff
    return Tensor3(out)


def sample(cid, seed: int, dims=(4, 4, 4)):
    """Random small-integer spec (entries in [-9, 9]) and its normal form."""
    cid = ComponentId.parse(cid)
    rng = np.random.default_rng([int(seed), cid.value])
    n = vector_count(cid)
    vecs = [[tuple(int(x) for x in rng.integers(-9, 10, size=d)) for _ in range(n)] for d in dims]
    spec = ComponentSpec(cid, *vecs)
    return spec, normal_form(spec)


# ---------------------------------------------------------------------------
# witness construction
# ---------------------------------------------------------------------------

def _table(K, weight):
    return {t: weight(t) for t in itertools.combinations_with_replacement(range(K + 1), 3)
            if sum(t) <= K}


def _printed(K):
    return _table(K, printed_weight)


def _true(K):
    return _table(K, lambda t: 1)


# collapsed weights of the doubled tau_4-type form: level vectors
# (x, y1, y2 + y2', y3 + y3')
_DOUBLE_TAU4 = {(0, 0, 0): 1, (0, 0, 1): 1, (0, 0, 2): 1, (0, 1, 1): 4,
                (0, 0, 3): 1, (1, 1, 1): 12, (0, 1, 2): 1}


def _vsum(u, v):
    return tuple(tuple(x + y for x, y in zip(p, q)) for p, q in zip(u, v))


def _zero_like(v):
    return tuple(0 for _ in v)


def _cluster(levels, weights, speeds):
    curves, _ = weighted_cluster_curves(levels, weights, speeds)
    return list(curves)


def _points(spec, idx):
    return [c for i in idx for c in _cluster([spec.vec(i)], {(0, 0, 0): 1}, [0])]


def witness_curves(spec: ComponentSpec, check: bool = False) -> list:
    """Six exact polynomial curves whose limit plane contains the normal form.

    Parameters
    ----------
    spec : ComponentSpec
    check : bool
        If true, compute the limit and raise :class:`DegenerateWitnessError`
        when the spans collapse (wedge identically zero or plane dimension
        below 6).
    """
    cid = spec.id
    v = spec.vec
    P = _printed
    if cid is ComponentId.S6_0:
        curves = _points(spec, range(1, 7))
    elif cid is ComponentId.J_S4_T2:
        curves = _points(spec, range(1, 5)) + _cluster([v(5), v(6)], P(1), range(2))
    elif cid is ComponentId.J_S3_T3:
        curves = _points(spec, range(1, 4)) + _cluster([v(4), v(5), v(6)], P(2), range(3))
    elif cid is ComponentId.J_T3_T3:
        curves = (_cluster([v(1), v(2), v(3)], P(2), range(3))
                  + _cluster([v(4), v(5), v(6)], P(2), range(3)))
    elif cid is ComponentId.J_S2_T2_T2:
        curves = (_points(spec, (1, 2)) + _cluster([v(3), v(4)], P(1), range(2))
                  + _cluster([v(5), v(6)], P(1), range(2)))
    elif cid is ComponentId.J_T2_T2_T2:
        curves = [c for i in (1, 3, 5) for c in _cluster([v(i), v(i + 1)], P(1), range(2))]
    elif cid is ComponentId.J_S2_T4:
        curves = _points(spec, (1, 2)) + _cluster([v(3), v(4), v(5), v(6)], P(3), range(4))
    elif cid is ComponentId.J_T2_T4:
        curves = (_cluster([v(1), v(2)], P(1), range(2))
                  + _cluster([v(3), v(4), v(5), v(6)], P(3), range(4)))
    elif cid is ComponentId.J_X_T2_T3:
        curves = (_points(spec, (1,)) + _cluster([v(2), v(3)], P(1), range(2))
                  + _cluster([v(4), v(5), v(6)], P(2), range(3)))
    elif cid is ComponentId.J_X_T5:
        curves = _points(spec, (1,)) + _cluster([v(i) for i in range(2, 7)], P(4), range(5))
    elif cid is ComponentId.J_X_T5P:
        # two second-order branches through the same point
        curves = (_points(spec, (1,)) + _cluster([v(2), v(3), v(4)], P(2), range(3))
                  + _cluster([v(2), v(5), v(6)], P(2), (1, 2)))
    elif cid is ComponentId.T6:
        curves = _cluster([v(i) for i in range(1, 7)], P(5), range(6))
    elif cid is ComponentId.T6P:
        curves = (_cluster([v(1), v(2), v(3), v(4)], P(3), range(4))
                  + _cluster([v(1), v(5), v(6)], P(2), (1, 2)))
    elif cid is ComponentId.T6PP:
        # the two third-order branches share y_1, so the sum collapses onto
        # one weighted third-order point with data (y1, y2+y2', y3+y3');
        # six points on its realizing curve span a plane containing it
        levels = [v(1), v(2), _vsum(v(3), v(5)), _vsum(v(4), v(6))]
        curves = _cluster(levels, _DOUBLE_TAU4, range(6))
    elif cid is ComponentId.EX1:
        a, b, c = spec.a, spec.b, spec.c
        z = _zero_like
        p_levels = [v(1), (z(a[1]), z(b[1]), c[1]), v(3), (z(a[3]), z(b[3]), c[3]), v(5)]
        q_levels = [(a[0], b[0], c[1]), (a[2], b[2], c[3]), v(7)]
        curves = _cluster(p_levels, _true(4), range(5)) + _cluster(q_levels, _true(2), (1,))
    elif cid is ComponentId.EX2:
        a, b, c = spec.a, spec.b, spec.c
        z = _zero_like
        p_levels = [v(1), (z(a[1]), z(b[1]), c[1]), v(3), v(4)]
        q_levels = [(a[0], b[0], c[1]), v(5), v(6)]
        curves = _cluster(p_levels, _true(3), range(4)) + _cluster(q_levels, P(2), (1, 2))
    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(cid)
    assert len(curves) == 6
    if check:
        res = wedge_taylor_first_term(curves)
        if res.degenerate or res.dimension < 6:
            raise DegenerateWitnessError(f"{cid.name}: limit spans collapse for this spec")
    return curves


def component_membership(spec: ComponentSpec):
    """Build the witness, its limit plane, and test the normal form.

    Returns
    -------
    (curves, result, contains) : list of CurveJet, LimitPlaneResult, bool
    """
    curves = witness_curves(spec)
    res = wedge_taylor_first_term(curves)
    if res.degenerate or res.dimension < 6:
        raise DegenerateWitnessError(f"{spec.id.name}: limit spans collapse for this spec")
    return curves, res, plane_contains(res, normal_form(spec))
