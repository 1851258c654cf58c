import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nagano.cli import run

FORM22 = [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1]


def plane(rows):
    rows = np.asarray(rows, dtype=float)
    return {"n": rows.shape[0], "k": rows.shape[1], "basis": rows.ravel().tolist()}


@pytest.fixture
def pair_file(tmp_path):
    doc = {
        "domain": {"kind": "symmetric", "p": 2, "q": 2, "n": 4, "form": FORM22},
        "x": plane([[1, 0], [0, 1], [0, 0], [0, 0]]),
        "y": plane([[1, 0], [0, 1], [0.5, 0], [0, 0.25]]),
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(doc))
    return str(path)


def call(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_kob_reports_closed_form(pair_file):
    code, out, _ = call(["kob", pair_file, "--dual-samples", "200"])
    report = json.loads(out)
    assert code == 0
    assert report["exact"] == pytest.approx(np.log(5), abs=1e-12)
    assert report["lower"] <= report["exact"] + 1e-8 <= report["upper"] + 2e-8
    assert report["seed"] == 0


def test_chain_and_carat(pair_file):
    code, out, _ = call(["chain", pair_file])
    data = json.loads(out)
    assert code == 0 and data["chain"]["segment_lengths"] == pytest.approx([np.log(3), np.log(5 / 3)])
    code, out, _ = call(["carat", pair_file, "--dual-samples", "100", "--seed", "4"])
    data = json.loads(out)
    assert code == 0 and data["seed"] == 4 and data["lower"] <= np.log(5) + 1e-8


def test_table_real_type_has_nine_rows():
    code, out, _ = call(["table", "--real-type"])
    assert code == 0 and json.loads(out)["count"] == 9
    code, out, _ = call(["table", "--format", "text"])
    assert "Gr_p(R^{p+q})" in out


def test_table_instantiate():
    code, out, _ = call(["table", "--id", "iv", "--bind", "p=1,q=3"])
    assert json.loads(out)["row"]["space"] == "P(R^4)"


def test_check_photon_on_non_photon_pair(monkeypatch):
    doc = {"p": 2, "q": 2, "x": plane([[1, 0], [0, 1], [0, 0], [0, 0]]), "y": plane([[0, 0], [0, 0], [1, 0], [0, 1]])}
    code, out, _ = call(["check-photon", "-"], json.dumps(doc), monkeypatch)
    data = json.loads(out)
    assert code == 0 and data["arithmetic_distance"] == 2 and data["residual"] is None


def test_check_photon_on_photon_pair(monkeypatch):
    doc = {"p": 2, "q": 2, "x": plane([[1, 0], [0, 1], [0, 0], [0, 0]]), "y": plane([[1, 0], [0, 0], [0, 1], [0, 0]])}
    code, out, _ = call(["check-photon", "-"], json.dumps(doc), monkeypatch)
    data = json.loads(out)
    assert data["arithmetic_distance"] == 1 and data["residual"] < 1e-12


def test_hyperbolicity_csv(pair_file):
    code, out, _ = call(["hyperbolicity", pair_file, "--format", "csv", "--scales", "2,4", "--quadruples", "5"])
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "scale,delta,gap,seed"
    assert [float(line.split(",")[1]) for line in lines[1:]] == pytest.approx([2, 4], abs=1e-8)


def test_probe(pair_file):
    code, out, _ = call(["probe", pair_file, "--samples", "20"])
    data = json.loads(out)
    assert code == 0 and data["r_proper"]["pass"] and data["photon_convexity"]["max_components"] == 1


@pytest.mark.parametrize(
    "argv,stdin,code_name",
    [
        (["kob", "-"], "{not json", "validation_error"),
        (["kob", "-"], json.dumps({"x": 1}), "validation_error"),
        (["kob", "-"], json.dumps({"domain": {"kind": "symmetric", "p": 1, "q": 1, "form": [1, 0, 0, 1]}, "x": plane([[1], [0]]), "y": plane([[1], [0]])}), "validation_error"),
        (["kob", "-"], json.dumps({"domain": {"kind": "symmetric", "p": 1, "q": 1, "form": [1, 0, 0, -1]}, "x": plane([[0], [1]]), "y": plane([[1], [0]])}), "not_in_domain"),
        (["table", "--id", "nope"], None, "unknown_pair"),
        (["table", "--id", "iv", "--bind", "p=0,q=1"], None, "binding_out_of_range"),
    ],
)
def test_errors_exit_2_with_json(argv, stdin, code_name, monkeypatch):
    code, out, err = call(argv, stdin if stdin is not None else None, monkeypatch if stdin is not None else None)
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["code"] == code_name and set(payload) == {"code", "message", "context"}


def test_missing_file():
    code, _, err = call(["kob", "/nonexistent/input.json"])
    assert code == 2 and json.loads(err)["code"] == "validation_error"


def test_tolerance_override_is_validated(pair_file):
    code, _, err = call(["chain", pair_file, "--rank-rel", "0.1"])
    assert code == 2


def test_console_entry_point(pair_file):
    result = subprocess.run([sys.executable, "-m", "nagano", "chain", pair_file], capture_output=True, text=True)
    assert result.returncode == 0
    assert json.loads(result.stdout)["closed_form"] == pytest.approx(np.log(5))
