"""Text file formats for tensors, term lists and curve jets.

All three are YAML documents.  Scalars are written as decimal strings
(``"3"``, ``"-7/2"``) so round trips are bit exact::

    dims: [2, 2, 2]
    entries:
      - {i: 0, j: 0, k: 1, value: "1"}

    terms:
      - {coeff: "1", a: ["1", "0"], b: ["1", "0"], c: ["0", "1"]}

    curves:
      - blocks:
          - {order: 0, dims: [2, 2, 2], entries: [...]}
          - {order: 1, dims: [2, 2, 2], entries: [...]}

Omitted tensor entries are zero.  Parse failures raise :class:`FormatError`
naming the offending field and, when known, its line.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import yaml

from .segre import CurveJet
from .tensor_core import Rank1Term, Tensor3, to_rational

__all__ = [
    "FormatError",
    "scalar_text",
    "tensor_to_doc",
    "tensor_from_doc",
    "terms_to_doc",
    "terms_from_doc",
    "curves_to_doc",
    "curves_from_doc",
    "load_document",
    "dump_document",
    "load_tensor",
    "load_curves",
]

_LINE = "__line__"


class FormatError(ValueError):
    """Malformed input document."""

    def __init__(self, field: str, message: str, line: int = None):
        self.field, self.line = field, line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}field '{field}': {message}")


class _LineLoader(yaml.SafeLoader):
    """Safe loader that records the source line of every mapping."""


def _construct_mapping(loader, node, deep=False):
    mapping = yaml.SafeLoader.construct_mapping(loader, node, deep=deep)
    mapping[_LINE] = node.start_mark.line + 1
    return mapping


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k != _LINE}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def scalar_text(x) -> str:
    x = to_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _scalar(v, field, line):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise FormatError(field, f"expected a decimal string like '3' or '-7/2', got {v!r}", line)
    try:
        return to_rational(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(field, str(exc), line) from None


def _get(doc, key, field, line):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(field, "missing", line)
    return doc[key]


def _int(v, field, line, lo=None, hi=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(field, f"expected an integer, got {v!r}", line)
    if (lo is not None and v < lo) or (hi is not None and v >= hi):
        raise FormatError(field, f"value {v} out of range", line)
    return v


def _line(doc):
    return doc.get(_LINE) if isinstance(doc, dict) else None


# ---------------------------------------------------------------------------
# tensors and term lists
# ---------------------------------------------------------------------------

def tensor_to_doc(T: Tensor3) -> dict:
    entries = [{"i": int(i), "j": int(j), "k": int(k), "value": scalar_text(v)}
               for (i, j, k), v in sorted(T.nonzero().items())]
    return {"dims": [int(d) for d in T.dims], "entries": entries}


def tensor_from_doc(doc, field: str = "") -> Tensor3:
    import numpy as np
    line = _line(doc)
    pre = f"{field}." if field else ""
    dims = _get(doc, "dims", pre + "dims", line)
    if not isinstance(dims, list) or len(dims) != 3:
        raise FormatError(pre + "dims", "expected three positive integers", line)
    dims = [_int(d, f"{pre}dims[{n}]", line, lo=1) for n, d in enumerate(dims)]
    entries = doc.get("entries", []) or []
    if not isinstance(entries, list):
        raise FormatError(pre + "entries", "expected a list", line)
    arr = np.empty(dims, dtype=object)
    arr.fill(Fraction(0))
    seen = set()
    for n, e in enumerate(entries):
        ef, el = f"{pre}entries[{n}]", _line(e) or line
        if not isinstance(e, dict):
            raise FormatError(ef, "expected a mapping with i, j, k, value", el)
        idx = tuple(_int(_get(e, key, f"{ef}.{key}", el), f"{ef}.{key}", el, 0, dims[p])
                    for p, key in enumerate("ijk"))
        if idx in seen:
            raise FormatError(ef, f"duplicate entry {idx}", el)
        seen.add(idx)
        arr[idx] = _scalar(_get(e, "value", f"{ef}.value", el), f"{ef}.value", el)
    return Tensor3(arr)


def terms_to_doc(terms) -> dict:
    return {"terms": [{"coeff": scalar_text(t.coeff),
                       "a": [scalar_text(x) for x in t.a],
                       "b": [scalar_text(x) for x in t.b],
                       "c": [scalar_text(x) for x in t.c]} for t in terms]}


def terms_from_doc(doc) -> list:
    line = _line(doc)
    terms = _get(doc, "terms", "terms", line)
    if not isinstance(terms, list):
        raise FormatError("terms", "expected a list", line)
    out = []
    for n, t in enumerate(terms):
        tf, tl = f"terms[{n}]", _line(t) or line
        coeff = _scalar(_get(t, "coeff", tf + ".coeff", tl), tf + ".coeff", tl)
        vecs = []
        for key in "abc":
            v = _get(t, key, f"{tf}.{key}", tl)
            if not isinstance(v, list) or not v:
                raise FormatError(f"{tf}.{key}", "expected a nonempty list", tl)
            vecs.append(tuple(_scalar(x, f"{tf}.{key}[{m}]", tl) for m, x in enumerate(v)))
        try:
            out.append(Rank1Term(coeff, *vecs))
        except ValueError as exc:
            raise FormatError(tf, str(exc), tl) from None
    return out


# ---------------------------------------------------------------------------
# curve jets
# ---------------------------------------------------------------------------

def curves_to_doc(curves) -> dict:
    return {"curves": [{"blocks": [dict(order=k, **tensor_to_doc(x))
                                   for k, x in enumerate(c.coefficients)]} for c in curves]}


def curves_from_doc(doc) -> list:
    line = _line(doc)
    curves = _get(doc, "curves", "curves", line)
    if not isinstance(curves, list) or not curves:
        raise FormatError("curves", "expected a nonempty list", line)
    out = []
    for n, c in enumerate(curves):
        cf, cl = f"curves[{n}]", _line(c) or line
        blocks = _get(c, "blocks", cf + ".blocks", cl)
        if not isinstance(blocks, list) or not blocks:
            raise FormatError(cf + ".blocks", "expected a nonempty list", cl)
        by_order = {}
        for m, b in enumerate(blocks):
            bf, bl = f"{cf}.blocks[{m}]", _line(b) or cl
            k = _int(_get(b, "order", bf + ".order", bl), bf + ".order", bl, lo=0)
            if k in by_order:
                raise FormatError(bf + ".order", f"duplicate order {k}", bl)
            by_order[k] = tensor_from_doc(b, bf)
        top = max(by_order)
        dims = by_order[min(by_order)].dims
        coeffs = [by_order.get(k, Tensor3.zeros(dims)) for k in range(top + 1)]
        if 0 not in by_order:
            raise FormatError(cf + ".blocks", "order 0 block is required", cl)
        try:
            out.append(CurveJet(tuple(coeffs)))
        except ValueError as exc:
            raise FormatError(cf, str(exc), cl) from None
    return out


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def load_document(path, text: str = None):
    """Parse a YAML file (or ``text``) keeping line numbers on mappings."""
    if text is None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise FormatError("<file>", f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = yaml.load(text, Loader=_LineLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise FormatError("<document>", getattr(exc, "problem", None) or str(exc),
                          mark.line + 1 if mark else None) from None
    if not isinstance(doc, dict):
        raise FormatError("<document>", "expected a mapping at top level", 1)
    return doc


def dump_document(doc, path=None) -> str:
    text = yaml.safe_dump(_strip(doc), sort_keys=False, default_flow_style=None, width=100)
    if path is not None:
        Path(path).write_text(text)
    return text


def load_tensor(path, text: str = None) -> Tensor3:
    """A tensor file, or a term-list file summed to a tensor."""
    doc = load_document(path, text)
    if "terms" in doc and "entries" not in doc:
        from .tensor_core import tensor_from_terms
        terms = terms_from_doc(doc)
        dims = doc.get("dims") or (terms[0].dims if terms else None)
        if dims is None:
            raise FormatError("dims", "an empty term list needs explicit dims", _line(doc))
        try:
            return tensor_from_terms(terms, tuple(dims))
        except ValueError as exc:
            raise FormatError("terms", str(exc), _line(doc)) from None
    return tensor_from_doc(doc)


def load_curves(path, text: str = None) -> list:
    return curves_from_doc(load_document(path, text))
