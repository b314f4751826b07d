import json

import pytest

from bmwkz import io
from bmwkz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_monodromy_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["monodromy", "--m", "4", "--seed", "3", "--out", str(a)]) == 0
    assert main(["monodromy", "--m", "4", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert len(data["T"]) == 2 and len(data["T"][0]) == 4


def test_phi_word(capsys):
    code, out, _ = run(capsys, "phi", "--m", "3", "--word", "E1")
    assert code == 0
    re, im = json.loads(out)["phi"]
    assert abs(re - 1) < 1e-7 and abs(im) < 1e-7


def test_algebra_report_and_export(capsys, tmp_path):
    exp = tmp_path / "c.json"
    code, out, _ = run(capsys, "algebra", "--dihedral", "3", "--export", str(exp))
    assert code == 0
    rep = json.loads(out)
    assert rep["dimension"] == 15 and rep["hecke_dimension"] == 6 and "seconds" not in rep
    basis, c = io.import_structure(exp)
    assert len(basis) == 15 and c.shape == (15, 15, 15)


def test_algebra_from_coxeter_file(capsys, tmp_path):
    f = tmp_path / "b2.json"
    f.write_text('{"m": [[1, 4], [4, 1]]}')
    code, out, _ = run(capsys, "algebra", "--coxeter", str(f))
    assert code == 0 and json.loads(out)["dimension"] == 16


def test_brauer(capsys):
    code, out, _ = run(capsys, "brauer", "--m", "6")
    rep = json.loads(out)
    assert code == 0 and rep["dimension"] == 30 and rep["matches"] == ["2m+m^2/2"]


def test_missing_params_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--params", "/nonexistent/params.json"])
    assert exc.value.code == 2


def test_verify_rejects_resonant_parameters(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text('{"kappa": 0.05, "classes": [{"k": 1.3, "alpha": 0}]}')
    code, out, err = run(capsys, "verify", "--params", str(f), "--m-list", "3")
    assert code != 0
    rep = json.loads(out)
    assert rep["first_failure"] == "projector-rank m=3"
    assert "projector-rank m=3" in err


def test_verify_small_config(capsys):
    code, out, _ = run(capsys, "verify", "--m-list", "3", "--draws", "2")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert all({"anchor", "residual", "threshold"} <= set(c) for c in rep["checks"])


def test_negative_tolerance_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["monodromy", "--m", "3", "--tol", "-1"])
    assert exc.value.code == 2


def test_json_encoding_is_stable():
    obj = {"b": [1 + 2j, 0.1], "a": (float("inf"), True, None)}
    text = io.dumps(obj)
    assert text == io.dumps(obj)
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
