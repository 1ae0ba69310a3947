import json
import subprocess
import sys

import pytest

from stable_hhh.cli import SCHEMA, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_three_cycle(capsys):
    code, out, _ = call(capsys, "compute", "--n", "3", "--perm", "(1 2 3)", "--t-max", "4", "--q-window=-12:6")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == SCHEMA
    assert rep["shift"] == {"q": -4, "t": 2}
    assert rep["cycle_type"] == [3]
    assert rep["series_matches_ring"] is True
    assert rep["poincare_closed_form"].startswith("q^-4*t^2*")
    assert len(rep["exterior_degrees"]) == 3


def test_output_is_deterministic_apart_from_meta(capsys, tmp_path):
    argv = ["compute", "--n", "2", "--cycle-type", "1,1", "--t-max", "3", "--q-window=-8:4"]
    _, a, _ = call(capsys, *argv)
    out = tmp_path / "r.json"
    assert run(argv + ["--out", str(out)]) == 0
    b = out.read_text(encoding="utf-8")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "meta"}
    assert strip(a) == strip(b)
    assert list(json.loads(b)) == sorted(json.loads(b))


def test_series_expand(capsys):
    code, out, _ = call(capsys, "series-expand", "--n", "2", "--cycle-type", "2", "--t-max", "1", "--q-window=-4:0")
    rep = json.loads(out)
    assert code == 0 and rep["nonnegative"]
    assert {"q": -2, "t": 1, "a": 0, "dim": 1} in rep["expansion"]


def test_mf_simplify(capsys):
    code, out, _ = call(capsys, "mf", "simplify", "--n", "2")
    rep = json.loads(out)
    assert code == 0
    assert rep["steps"][-1]["rows"] == [
        {"a": "y2 - x2", "b": "y1*u2 - x2*u2", "label": 2, "shift": {"q": -2, "t": 1, "a": 0}}
    ]


def test_e_ring(capsys):
    code, out, _ = call(capsys, "e-ring", "--n", "2")
    rep = json.loads(out)
    assert code == 0 and rep["isomorphism"]["pass"]


def test_verify_identities(capsys):
    code, out, _ = call(capsys, "verify", "identities", "--n", "3")
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert all(c["pass"] for c in rep["checks"])


def test_verify_homology(capsys):
    code, out, _ = call(
        capsys, "verify", "homology", "--n", "3", "--perm", "(1 3)", "--t-max", "4", "--q-window=-14:6", "--method", "slices"
    )
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["mismatch_count"] == 0


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["compute", "--n", "0"], "--n must be at least 1"),
        (["compute", "--n", "3", "--perm", "(1 2"], "position 0"),
        (["compute", "--n", "3", "--perm", "(1 x 2)"], "token 'x' at position 3"),
        (["compute", "--n", "3", "--perm", "(1 4)"], "outside 1..3"),
        (["compute", "--n", "3", "--cycle-type", "2,2"], "does not partition"),
        (["compute", "--n", "3", "--q-window=4:-4"], "out of order"),
        (["compute"], "required"),
        (["frobnicate"], "invalid choice"),
    ],
)
def test_usage_errors_exit_1(argv, needle):
    proc = subprocess.run([sys.executable, "-m", "stable_hhh.cli", *argv], capture_output=True, text=True)
    assert proc.returncode == 1
    assert needle in proc.stderr


def test_console_script_installed():
    proc = subprocess.run(["stable-hhh", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "stable-hhh" in proc.stdout


def test_failing_verification_exits_2(capsys, monkeypatch):
    from stable_hhh import cli
    from stable_hhh.oracle import CompareReport

    def broken(table, expected, window):
        return CompareReport(window, [{"degree": {"q": 0, "t": 0, "a": 0}, "oracle": 1, "expected": 0}], 1)

    monkeypatch.setattr(cli, "compare", broken)
    code, out, _ = call(capsys, "verify", "homology", "--n", "2", "--t-max", "2", "--q-window=-6:2")
    assert code == 2 and json.loads(out)["pass"] is False
