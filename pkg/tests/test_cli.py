import io
import json
import subprocess
import sys

import pytest

from uebk import cli


def run(argv, stdin=b"", monkeypatch=None):
    if monkeypatch is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
    return cli.main(argv)


def test_construct_to_file(tmp_path):
    out = tmp_path / "b.json"
    assert cli.main(["construct", "--dims", "3,3", "--k", "2", "--variant", "v3", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["members"]) == 8


def test_same_argv_same_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["construct", "--dims", "4,5", "--k", "2", "--seed", "9", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_example_lift_verify_files(tmp_path, capsys):
    ex, lifted = tmp_path / "ex.json", tmp_path / "lift.json"
    assert cli.main(["example", "--name", "eq14", "--out", str(ex)]) == 0
    assert cli.main(["lift", "--in", str(ex), "--dims", "3", "--out", str(lifted)]) == 0
    code = cli.main(["verify", "--in", str(lifted), "--mode", "cert"])
    assert code == 0
    assert "Certified" in capsys.readouterr().out


def test_verify_negative_control_exit_code(tmp_path, capsys):
    ex = tmp_path / "eq4.json"
    assert cli.main(["example", "--name", "eq4", "--out", str(ex)]) == 0
    assert cli.main(["verify", "--in", str(ex)]) == 2
    out = capsys.readouterr().out
    assert "member 0: no_form" in out and "result: FAIL" in out


def test_verify_indeterminate_exit_code(tmp_path):
    ex = tmp_path / "tiles.json"
    cli.main(["example", "--name", "tiles", "--out", str(ex)])
    assert cli.main(["verify", "--in", str(ex), "--mode", "cert"]) == 3


def test_verify_embeds_report(tmp_path):
    ex, out = tmp_path / "ex.json", tmp_path / "out.json"
    cli.main(["suebk3", "--dims", "3,5,2", "--k", "2", "--out", str(ex)])
    assert cli.main(["verify", "--in", str(ex), "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["verification"]["unextendibility"] == "Certified"
    assert len(obj["members"]) == 24


def test_inspect(tmp_path, capsys):
    ex = tmp_path / "ex.json"
    cli.main(["example", "--name", "umeb23", "--out", str(ex)])
    assert cli.main(["inspect", "--in", str(ex)]) == 0
    out = capsys.readouterr().out
    assert "4 members" in out and "Schmidt number 2" in out


def test_stdin_stdout(monkeypatch, capsysbinary):
    assert cli.main(["example", "--name", "eq6"]) == 0
    data = capsysbinary.readouterr().out
    assert run(["inspect"], data, monkeypatch) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--bogus"],
        ["frobnicate"],
        [],
        ["construct", "--dims", "2,2"],
        ["construct", "--dims", "2,2,2", "--k", "2"],
        ["construct", "--dims", "x", "--k", "2"],
        ["verify", "--mode", "maybe"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    assert cli.main(argv) == 64
    assert "usage" in capsys.readouterr().err


def test_invalid_input_exit_1(tmp_path, capsys):
    assert cli.main(["construct", "--dims", "3,3", "--k", "5"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert cli.main(["verify", "--in", str(bad)]) == 1
    assert "error" in capsys.readouterr().err


def test_shell_pipeline():
    py = [sys.executable, "-m", "uebk"]
    ex = subprocess.run(py + ["example", "--name", "eq14"], capture_output=True, check=True)
    lifted = subprocess.run(py + ["lift", "--dims", "3"], input=ex.stdout, capture_output=True, check=True)
    ver = subprocess.run(py + ["verify", "--mode", "cert"], input=lifted.stdout, capture_output=True)
    assert ver.returncode == 0, ver.stdout.decode() + ver.stderr.decode()
