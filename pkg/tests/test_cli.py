import json
import subprocess
import sys

import numpy as np
import pytest

from fovprod import cli
from fovprod.matcore import write_matrix


@pytest.fixture
def mats(tmp_path):
    def make(name, M):
        p = tmp_path / f"{name}.json"
        write_matrix(p, np.asarray(M, dtype=complex))
        return str(p)
    return make


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_range_json(mats, capsys):
    code, out = run(["range", mats("t", np.diag([1, 1j, -1])), "--angles", "64"], capsys)
    assert code == 0
    d = json.loads(out.out)
    assert d["m"] == 64 and len(d["eigenvalues"]) == 3


def test_range_text(mats, capsys):
    code, out = run(["range", mats("j", [[0, 2], [0, 0]]), "--format", "text"], capsys)
    assert code == 0 and "radialoid=False" in out.out


def test_check_intro_violated(mats, capsys):
    code, out = run(["check", mats("a", np.diag([1, -1])), mats("b", [[0, 1], [1, 0]])], capsys)
    assert code == 1
    assert json.loads(out.out)["overall"] == "Violated"


def test_check_psd_contained(mats, capsys):
    code, _ = run(["check", mats("a", np.diag([2, 1])), mats("b", [[0, 1], [1, 0]])], capsys)
    assert code == 0


def test_check_borderline_exit_2(mats, capsys):
    B = np.exp(0.3j) * np.array([[1, 0, 0], [0, 0, 2], [0, 0, 0]])
    code, _ = run(["check", mats("a", np.eye(3)), mats("b", B), "--tol", "1e-12"], capsys)
    assert code == 2


def test_check_dimension_mismatch(mats, capsys):
    code, _ = run(["check", mats("a", np.eye(2)), mats("b", np.eye(3))], capsys)
    assert code == 64


def test_classify_exit_codes(mats, capsys):
    assert run(["classify", mats("p", np.diag([2, 1]))], capsys)[0] == 0
    code, out = run(["classify", mats("t", np.diag([1, 1j, -1]))], capsys)
    assert code == 1
    assert json.loads(out.out)["corner_hypothesis"] == "Holds"


def test_witness_cube_root(mats, capsys):
    A = np.diag([1, np.exp(2j * np.pi / 3)])
    code, out = run(["witness", mats("w", A)], capsys)
    assert code == 0
    d = json.loads(out.out)
    assert d["construction"] == "LemmaDisk" and d["result"] == "Certificate"


def test_witness_psd_exit_1(mats, capsys):
    assert run(["witness", mats("p", np.eye(2))], capsys)[0] == 1


def test_repro_intro(capsys):
    code, out = run(["repro", "intro-hermitian", "--format", "text"], capsys)
    assert code == 0 and "PASS" in out.out


def test_repro_additive_params(capsys):
    code, out = run(["repro", "additive", "--M", "9", "--eps", "0.04"], capsys)
    assert code == 0
    assert json.loads(out.out)["params"] == {"M": 9.0, "eps": 0.04}


def test_usage_errors(mats, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["range", str(bad)], capsys)[0] == 64
    assert run(["range", str(tmp_path / "missing.json")], capsys)[0] == 64
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 64
    assert run(["range", mats("a", np.eye(2)), "--grid", "3"], capsys)[0] == 64
    assert run(["range", mats("a", np.eye(2)), "--tol", "0"], capsys)[0] == 64
    assert run(["repro", "additive", "--format", "svg"], capsys)[0] == 64


def test_out_file_and_json_round_trip(mats, tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out = run(["range", mats("t", np.diag([1, -1])), "--angles", "32", "--out", str(target)], capsys)
    assert code == 0 and out.out == ""
    d = json.loads(target.read_text())
    assert d["m"] == 32
    assert not list(tmp_path.glob(".fovprod-*"))


def test_svg_is_deterministic(mats, capsys):
    p = mats("t", np.diag([1, 1j, -1]))
    _, a = run(["range", p, "--format", "svg"], capsys)
    _, b = run(["range", p, "--format", "svg"], capsys)
    assert a.out == b.out
    assert a.out.startswith("<svg") and a.out.rstrip().endswith("</svg>")


def test_module_entry_point(mats):
    r = subprocess.run([sys.executable, "-m", "fovprod", "range", mats("t", np.eye(2)), "--angles", "16"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["m"] == 16
