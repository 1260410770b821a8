import json
from pathlib import Path

import pytest

from nonsimple import certify as C
from nonsimple.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_roots(capsys):
    code, out, _ = call(capsys, "solve-roots", "--z", d("minus1.phm"), "--p", "2,1")
    assert code == 0
    assert "2 solutions" in out and "rho12=1/4" in out and "rho12=3/4" in out
    code, out, _ = call(capsys, "solve-roots", "--z", d("minus1.phm"), "--p", "2,1", "--format", "json")
    assert json.loads(out)["count"] == 2


def test_certify_power_text_and_json(capsys, tmp_path):
    out_file = tmp_path / "c.json"
    code, out, _ = call(capsys, "certify-power", "--z", d("minus1.phm"), "--p", "2,1", "--out", str(out_file))
    assert code == 0 and "not simple" in out
    code, again, _ = call(capsys, "certify-power", "--z", d("minus1.phm"), "--p", "2,1", "--format", "json")
    assert again == out_file.read_text()
    assert call(capsys, "validate", "--cert", str(out_file))[0] == 0


def test_precondition_exit_code(capsys):
    code, _, err = call(capsys, "certify-power", "--z", d("minus1.phm"), "--p", "1,1")
    assert code == 3 and err.startswith("error:")


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.phm"
    bad.write_text("n=2\n2 1 1/2\n")
    assert call(capsys, "certify-power", "--z", str(bad), "--p", "2,1")[0] == 2
    assert call(capsys, "certify-power", "--z", str(tmp_path / "missing"), "--p", "2,1")[0] == 2
    assert call(capsys, "certify-power", "--z", d("minus1.phm"), "--p", "a,b")[0] == 2
    assert call(capsys, "no-such-command")[0] == 2


def test_certify_general(capsys, tmp_path):
    out_file = tmp_path / "g.json"
    code, out, _ = call(capsys, "certify-general", "--target", d("final_target.pres"),
                        "--family", d("final_plus.pres"), "--family", d("final_minus.pres"),
                        "--max-depth", "4", "--out", str(out_file))
    assert code == 0 and "1/4" in out and "3/4" in out
    assert call(capsys, "validate", "--cert", str(out_file))[0] == 0
    code, out, _ = call(capsys, "certify-general", "--target", d("final_target.pres"),
                        "--family", d("final_plus.pres"))
    assert code == 1 and out.startswith("unknown")


def test_certify_quotient(capsys, tmp_path):
    out_file = tmp_path / "q.json"
    code, out, _ = call(capsys, "certify-quotient", "--pres", d("bz.pres"), "--added", d("bz_added.rels"),
                        "--out", str(out_file))
    assert code == 0 and "provenance: computational, cited" in out
    assert call(capsys, "validate", "--cert", str(out_file))[0] == 0
    # reuse the embedded certificate explicitly
    inner = tmp_path / "inner.json"
    inner.write_text(C.dumps(json.loads(out_file.read_text())["legs"][1]["certificate"]))
    code, _, _ = call(capsys, "certify-quotient", "--pres", d("bz.pres"), "--added", d("bz_added.rels"),
                      "--quotient-cert", str(inner))
    assert code == 0
    assert call(capsys, "certify-quotient", "--pres", d("bz.pres"))[0] == 3


def test_torus_simple(capsys):
    code, out, _ = call(capsys, "torus-simple", "--theta", d("minus1.phm"))
    assert code == 0 and "[2, 0]" in out and "not simple" in out
    code, out, _ = call(capsys, "torus-simple", "--theta", d("symbolic.phm"), "--format", "json")
    assert json.loads(out)["legs"][2]["simple"] is True


def test_nf(capsys):
    code, out, _ = call(capsys, "nf", "--word", "u2^2 * u1^3", "--rho", d("quarter.phm"))
    assert code == 0 and out.strip() == "(1/2) u1^3 * u2^2"
    code, out, _ = call(capsys, "nf", "--word", "u2^2 * u1^3", "--rho", d("quarter.phm"), "--format", "json")
    assert json.loads(out) == {"coeff": "1/2", "exponents": [3, 2]}


def test_witness_check(capsys):
    assert call(capsys, "witness-check", "--pres", d("final_plus.pres"))[0] == 0
    assert call(capsys, "witness-check", "--pres", d("final_plus.pres"),
                "--witness", "u -> (1/20) W^2, v -> (0) W^-5")[0] == 1


def test_validate_tampered(capsys, tmp_path):
    code, out, _ = call(capsys, "certify-power", "--z", d("minus1.phm"), "--p", "2,1", "--format", "json")
    data = json.loads(out)
    data["legs"][1]["rho_prime"] = data["legs"][1]["rho"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = call(capsys, "validate", "--cert", str(bad))
    assert code == 1 and "conflict phases equal" in out
    bad.write_text("{not json")
    assert call(capsys, "validate", "--cert", str(bad))[0] == 2


@pytest.mark.parametrize("argv", [
    ["certify-power", "--z", d("symbolic.phm"), "--p", "3,2"],
    ["certify-power", "--z", d("zero.phm"), "--p", "2,2", "--names", "a,b"],
    ["torus-simple", "--theta", d("zero.phm")],
])
def test_written_certificates_validate(capsys, tmp_path, argv):
    out_file = tmp_path / "c.json"
    assert call(capsys, *argv, "--out", str(out_file))[0] == 0
    assert C.validate_certificate(json.loads(out_file.read_text()))
