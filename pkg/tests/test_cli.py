import subprocess
import sys

import pytest

from s1sp.algebra import paper_countermodel, parse_models, to_model_text
from s1sp.cli import run
from s1sp.kripke import parse_kripke
from s1sp.proofs import parse_proof_text
from s1sp.syntax import parse

SCHEME_3 = "[](x1->x2) -> []([]x1->[]x2)"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cm_file(tmp_path):
    p = tmp_path / "two_atom.model"
    p.write_text(to_model_text(paper_countermodel()))
    return str(p)


def test_parse(capsys):
    code, out, _ = call(capsys, "parse", "x1 == x2", "--sugar")
    assert code == 0 and out == "x1 == x2\n"
    code, out, _ = call(capsys, "parse", "T")
    assert out == "x0 -> x0\n"


def test_parse_error_has_column(capsys):
    code, _, err = call(capsys, "parse", "x1 -> (x2")
    assert code == 2 and "column 10" in err


def test_check_model(capsys, cm_file):
    code, out, _ = call(capsys, "check-model", "--paper-countermodel")
    assert code == 0
    assert all(f"condition {i}: ok" in out for i in range(1, 7))
    code2, out2, _ = call(capsys, "check-model", "--model", cm_file)
    assert (code2, out2) == (code, out)
    code, out, _ = call(capsys, "check-model", "--paper-countermodel", "--class", "s3")
    assert code == 1 and "condition 3': FAIL at ({2}, {1,2})" in out


def test_valid_reports_witness(capsys):
    code, out, _ = call(capsys, "valid", SCHEME_3, "--paper-countermodel")
    assert code == 1
    assert "x1=2 x2=3  # x1={2} x2={1,2}" in out
    code, out, _ = call(capsys, "valid", "[]x1 -> x1", "--paper-countermodel")
    assert code == 0


def test_eval(capsys):
    code, out, _ = call(capsys, "eval", "[](x1 -> x2)", "--paper-countermodel", "--assign", "x1=2", "x2={1,2}")
    assert code == 0 and out.startswith("1  # {1}")
    code, _, err = call(capsys, "eval", "x1", "--paper-countermodel", "--assign", "x1=9")
    assert code == 2


def test_consequence(capsys):
    code, _, _ = call(capsys, "consequence", "--hyp", "[](x1->x2)", "--hyp", "[]x1", "[]x2", "--paper-countermodel")
    assert code == 0
    code, out, _ = call(capsys, "consequence", "--hyp", "[](x1->x2)", "[]([]x1->[]x2)", "--paper-countermodel")
    assert code == 1 and "x1=2 x2=3" in out


def test_find_countermodel(capsys):
    code, out, _ = call(capsys, "find-countermodel", SCHEME_3, "--atoms", "2", "--class", "base")
    assert code == 1
    (M,) = parse_models(out)
    assert M.atoms == 2
    code, out, _ = call(capsys, "find-countermodel", SCHEME_3, "--atoms", "3", "--class", "s3")
    assert code == 0 and "no countermodel" in out


def test_enumerate(capsys):
    code, out, _ = call(capsys, "enumerate", "--atoms", "2", "--count")
    assert (code, out) == (0, "8\n")
    code, out, _ = call(capsys, "enumerate", "--atoms", "2", "--class", "s4", "--emit")
    assert len(parse_models(out)) == 4


def test_proof_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "emit-fixture", "lemma3")
    assert code == 0
    f = tmp_path / "lemma3.prf"
    f.write_text(out)
    code, out, _ = call(capsys, "check-proof", str(f), "--system", "s1+sp")
    assert code == 0 and "conclusion: [](x0 -> x1) -> ([]x0 -> []x1)" in out
    code, out, _ = call(capsys, "check-proof", str(f), "--system", "s1")
    assert code == 1 and "sp-disabled" in out


def test_emit_fixtures(capsys, tmp_path):
    code, out, _ = call(capsys, "emit-fixture", "lemma2", "--args", "[]x3")
    assert code == 0 and parse_proof_text(out).derivation.conclusion == parse("[][]x3 <-> ([]x3 == T)")
    code, out, _ = call(capsys, "emit-fixture", "s3-identity", "--axiom", "e")
    f = tmp_path / "e.prf"
    f.write_text(out)
    assert call(capsys, "check-proof", str(f))[0] == 0
    code, out, _ = call(capsys, "emit-fixture", "s3-identity")
    assert out.count("system S3") == 8
    code, _, err = call(capsys, "emit-fixture", "lemma2", "--args", "x1", "x2")
    assert code == 2


def test_deduce(capsys, tmp_path):
    f = tmp_path / "mp.prf"
    f.write_text("0 hyp x1\n1 hyp x1 -> x2\n2 mp 0 1 : x2\n")
    code, out, _ = call(capsys, "deduce", str(f), "--discharge", "x1", "--system", "s1")
    assert code == 0
    pf = parse_proof_text(out)
    assert pf.derivation.conclusion == parse("x1 -> x2")
    assert pf.hypotheses == [parse("x1 -> x2")]


def test_bad_proof_file(capsys, tmp_path):
    f = tmp_path / "bad.prf"
    f.write_text("0 taut T\n1 an 0 : [](x0 -> \n")
    code, _, err = call(capsys, "check-proof", str(f), "--system", "s1")
    assert code == 2 and "line 2" in err and "column" in err
    code, _, err = call(capsys, "check-proof", str(tmp_path / "missing.prf"), "--system", "s1")
    assert code == 2
    good = tmp_path / "nosys.prf"
    good.write_text("0 taut T\n")
    assert call(capsys, "check-proof", str(good))[0] == 2


def test_bad_model_file(capsys, tmp_path):
    f = tmp_path / "bad.model"
    f.write_text("atoms 2\ndesignated 0\nbox 0 0\nbox 1 x\n")
    code, _, err = call(capsys, "valid", "x1", "--model", str(f))
    assert code == 2 and "line 4" in err
    assert call(capsys, "valid", "x1")[0] == 2


def test_kripke_search(capsys):
    code, out, _ = call(capsys, "kripke-search", "(x0==x1)->([]x0==[]x1)", "--max-worlds", "3")
    assert code == 1
    K = parse_kripke(out)
    assert K.worlds == 3 and len(K.normal) == 3 and not K.is_transitive()
    code, out, _ = call(capsys, "kripke-search", "[]x0 -> x0", "--max-worlds", "2")
    assert code == 0


def test_usage_errors(capsys):
    assert call(capsys)[0] == 2
    assert call(capsys, "enumerate")[0] == 2
    assert call(capsys, "enumerate", "--atoms", "9", "--count")[0] == 2


def test_output_is_stable(capsys):
    runs = [call(capsys, "find-countermodel", "[]x1 -> [][]x1", "--atoms", "2") for _ in range(2)]
    assert runs[0] == runs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "s1sp", "valid", SCHEME_3, "--paper-countermodel"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and "x1={2} x2={1,2}" in proc.stdout
