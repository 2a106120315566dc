"""File formats and the command-line interface."""
import numpy as np
import pytest

from borderrank.catalog import ComponentId, sample
from borderrank.certify import strassen_terms
from borderrank.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, run_verification
from borderrank.formats import (
    FormatError,
    curves_from_doc,
    curves_to_doc,
    dump_document,
    load_curves,
    load_document,
    load_tensor,
    scalar_text,
    tensor_from_doc,
    tensor_to_doc,
    terms_from_doc,
    terms_to_doc,
)
from borderrank.segre import CurveJet, polynomial_product_jet
from borderrank.tensor_core import Fraction, Tensor3, mmult_tensor, outer, tensor_from_terms
from borderrank.numeric import w_tensor


def w_curves():
    f = [(1, 0), (0, 1)]
    return [CurveJet((outer((1, 0), (1, 0), (1, 0)),)), polynomial_product_jet(f, f, f)]


# ---------------------------------------------------------------------------
# formats
# ---------------------------------------------------------------------------

def test_scalar_text():
    assert scalar_text(Fraction(-7, 2)) == "-7/2"
    assert scalar_text(3) == "3"
    big = Fraction(3 ** 80, 7)
    assert Fraction(scalar_text(big)) == big


def test_tensor_round_trip_exact():
    rng = np.random.default_rng(0)
    arr = np.empty((2, 3, 2), dtype=object)
    for idx in np.ndindex(arr.shape):
        arr[idx] = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 9)))
    T = Tensor3(arr)
    text = dump_document(tensor_to_doc(T))
    assert load_tensor(None, text) == T
    assert dump_document(tensor_to_doc(load_tensor(None, text))) == text


def test_terms_round_trip():
    terms = strassen_terms()
    doc = load_document(None, dump_document(terms_to_doc(terms)))
    back = terms_from_doc(doc)
    assert tensor_from_terms(back, (4, 4, 4)) == mmult_tensor(2)
    assert load_tensor(None, dump_document(terms_to_doc(terms))) == mmult_tensor(2)


def test_curves_round_trip():
    spec, _ = sample(ComponentId.T6, 0)
    from borderrank.catalog import witness_curves
    curves = witness_curves(spec)
    back = load_curves(None, dump_document(curves_to_doc(curves)))
    assert [c.coefficients for c in back] == [c.coefficients for c in curves]


def test_omitted_entries_are_zero():
    T = load_tensor(None, "dims: [2, 2, 2]\nentries:\n  - {i: 1, j: 0, k: 1, value: '5/3'}\n")
    assert T[1, 0, 1] == Fraction(5, 3)
    assert len(T.nonzero()) == 1


@pytest.mark.parametrize("text, field, line", [
    ("dims: [2, 2]\n", "dims", 1),
    ("dims: [2, 2, 2]\nentries:\n  - {i: 0, j: 0, k: 0, value: 'x'}\n", "entries[0].value", 3),
    ("dims: [2, 2, 2]\nentries:\n  - {i: 0, j: 5, k: 0, value: '1'}\n", "entries[0].j", 3),
    ("dims: [2, 2, 2]\nentries:\n  - {i: 0, j: 0, k: 0, value: 1.5}\n", "entries[0].value", 3),
    ("dims: [2, 2, 2]\nentries:\n  - {i: 0, j: 0, k: 0}\n", "entries[0].value", 3),
    ("dims: [2, 2, 2]\nentries:\n  - {i: 0, j: 0, k: 0, value: '1'}\n"
     "  - {i: 0, j: 0, k: 0, value: '2'}\n", "entries[1]", 4),
])
def test_bad_tensor_names_line_and_field(text, field, line):
    with pytest.raises(FormatError) as info:
        load_tensor(None, text)
    assert info.value.field == field
    assert info.value.line == line
    assert f"line {line}" in str(info.value) and field in str(info.value)


def test_bad_yaml_syntax():
    with pytest.raises(FormatError) as info:
        load_tensor(None, "dims: [2, 2\n")
    assert info.value.line is not None


def test_bad_curves():
    with pytest.raises(FormatError):
        curves_from_doc({"curves": []})
    doc = curves_to_doc(w_curves())
    doc["curves"][0]["blocks"][0]["order"] = 3
    with pytest.raises(FormatError) as info:
        curves_from_doc(doc)
    assert "order 0" in str(info.value)


def test_missing_file():
    with pytest.raises(FormatError):
        load_tensor("/nonexistent/tensor.yaml")


# ---------------------------------------------------------------------------
# cli
# ---------------------------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    mm = tmp_path / "mmult2.yaml"
    dump_document(tensor_to_doc(mmult_tensor(2)), mm)
    w = tmp_path / "w.yaml"
    dump_document(tensor_to_doc(w_tensor()), w)
    wc = tmp_path / "wcurves.yaml"
    dump_document(curves_to_doc(w_curves()), wc)
    bad = tmp_path / "bad.yaml"
    bad.write_text("dims: [4, 4, 4]\nentries:\n  - {i: 0, j: 0, k: 9, value: '1'}\n")
    return {"mm": str(mm), "w": str(w), "wc": str(wc), "bad": str(bad), "dir": tmp_path}


def test_cli_ranks(files, capsys):
    assert main(["ranks", files["mm"]]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "(4,4,4)"


def test_cli_limit(files, capsys):
    assert main(["limit", files["wc"], "--contains", files["w"]]) == EXIT_OK
    out = capsys.readouterr().out
    assert "vanishing_order=1" in out and "contains=True" in out


def test_cli_limit_not_contained(files, capsys):
    other = files["dir"] / "other.yaml"
    dump_document(tensor_to_doc(outer((0, 1), (0, 1), (0, 1))), other)
    assert main(["limit", files["wc"], "--contains", str(other)]) == EXIT_FAIL


def test_cli_als_rank_seven(files, capsys):
    assert main(["als", files["mm"], "--rank", "7", "--restarts", "20"]) == EXIT_OK
    best = float(capsys.readouterr().out.split("best=")[1].split()[0])
    assert best < 1e-6


def test_cli_probe(files, capsys):
    assert main(["probe", files["w"], "--rank", "3", "--restarts", "2", "--caps", "10,100"]) == EXIT_OK
    assert "slope" in capsys.readouterr().out


def test_cli_component_reproducible(files, capsys):
    out1, out2 = files["dir"] / "c1.yaml", files["dir"] / "c2.yaml"
    assert main(["component", "J_S4_T2", "--seed", "3", "--out", str(out1)]) == EXIT_OK
    assert main(["component", "J_S4_T2", "--seed", "3", "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    doc = load_document(out1)
    assert tensor_from_doc(doc["tensor"]) == sample("J_S4_T2", 3)[1]
    assert len(curves_from_doc(doc)) == 6


def test_cli_bad_input_exit_two(files, capsys):
    assert main(["ranks", files["bad"]]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "line 3" in err and "entries[0].k" in err
    assert main(["ranks", "/nonexistent.yaml"]) == EXIT_USAGE
    assert main(["component", "NOPE"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["als", files["mm"]])  # missing --rank
    assert info.value.code == EXIT_USAGE


def test_verify_report_records():
    rep = run_verification(seeds=1, log=lambda *a: None)
    by = {r.claim: r for r in rep.records}
    assert rep.exact_ok
    assert by["mmult_slice_bound"].status == "pass" and by["mmult_slice_bound"].detail == "bound 6"
    assert sum(1 for c in by if c.startswith("component:")) == 16
    assert sum(1 for c in by if c.startswith("reduction:")) == 4
    assert by["six_term_search"].status == "evidence"
    assert by["quadruple_search"].status == "evidence"
    assert all(r.status in ("pass", "fail") for r in rep.records if r.claim not in
               ("six_term_search", "quadruple_search"))


def test_verify_corrupted_strassen_fails(tmp_path, capsys):
    out = tmp_path / "report.yaml"
    code = main(["verify-paper", "--seeds", "1", "--corrupt-strassen", "--out", str(out),
                 "--witness-dir", str(tmp_path / "w")])
    assert code == EXIT_FAIL
    doc = load_document(out)
    rec = [r for r in doc["records"] if r["claim"] == "strassen_exact"][0]
    assert rec["status"] == "fail"
    assert (tmp_path / "w" / "strassen_terms.yaml").exists()
