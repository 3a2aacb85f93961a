import json
import subprocess
import sys
from collections import Counter

import pytest

from qschmidt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line and not line.startswith(" ")) >= 28


def test_list_json_filter(capsys):
    code, out, _ = run(capsys, "list", "--filter", "rr", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and [r["id"] for r in rows] == ["rr-weighted", "rr-weighted-finite", "rr-hat"]


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "schmidt", "--degree", "20")
    assert code == 0 and out.startswith("PASS  schmidt") and "1 pass, 0 fail" in out


def test_verify_json_schema_and_show(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "sign-E-finite", "--N", "4",
                       "--kind", "psi", "--format", "json")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 1
    assert list(reports[0]) == ["id", "params", "status", "checked_bound", "elapsed_ms"]
    assert json.loads(json.dumps(reports)) == reports
    code, out, _ = run(capsys, "verify", "--identity", "sign-E-finite", "--N", "4",
                       "--kind", "psi", "--show")
    assert "lhs = 1 + q + q^3 + q^4" in out


def test_verify_signed_family(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "general-rts-finite", "--r", "1", "--t", "1",
                       "--s", "1", "--eps", "-1", "--N", "5")
    assert code == 0 and "2 pass" in out


def _text_key(line):
    status, fid, *rest = line.split()
    params = tuple(tok for tok in rest if "=" in tok and not tok.startswith("bound="))
    return status.lower(), fid, params


def test_text_and_json_agree(capsys):
    argv = ["verify", "--identity", "finite-schmidt-new", "--degree", "10", "--workers", "1"]
    _, text, _ = run(capsys, *argv)
    _, js, _ = run(capsys, *argv, "--format", "json")
    from_text = Counter(_text_key(line) for line in text.splitlines()
                        if line.startswith(("PASS", "FAIL", "ERROR")))
    from_json = Counter((r["status"], r["id"], tuple(f"{k}={v}" for k, v in r["params"].items()))
                        for r in json.loads(js))
    assert from_text == from_json and sum(from_json.values()) == 22


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--identity", "uap", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())[0]["status"] == "pass"


@pytest.mark.parametrize("argv", [
    ["verify", "--N", "-1"],
    ["verify", "--degree", "x"],
    ["verify", "--workers", "0"],
    ["verify", "--eps", "2"],
    ["verify", "--format", "xml"],
    ["frobnicate"],
])
def test_argument_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--identity", "no-such-family"],
    ["verify", "--identity", "iz-psi", "--sub", "q,q"],
    ["verify", "--identity", "general-rts", "--r", "0", "--t", "0"],
    ["table", "--identity", "schmidt", "--n", "3"],
    ["table", "--identity", "hook-count", "--n", "3"],
    ["bijection", "--partition", "2,1", "--j", "1"],
    ["bijection", "--partition", "1,2", "--j", "3"],
])
def test_parameter_errors_exit_2(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_tables(capsys):
    code, out, _ = run(capsys, "table", "--identity", "hook-count", "--n", "4", "--N", "4")
    assert code == 0 and "counts: 5 = 5" in out
    code, out, _ = run(capsys, "table", "--identity", "two-color", "--n", "4", "--N", "3",
                       "--format", "json")
    data = json.loads(out)
    assert data["counts"] == [15, 15] and data["equal"]
    code, out, _ = run(capsys, "table", "--identity", "hook-count", "--n", "0", "--N", "1")
    rows = out.split("right\n")[1].split("\n\n")[0].splitlines()
    assert rows == ["∅     ∅"]


def test_bijection(capsys):
    code, out, _ = run(capsys, "bijection", "--partition", "5,5,3,2,2,1", "--j", "8", "--N", "14")
    assert code == 0 and "pi_d      = 13,10,9,7,4,1" in out
    code, out, _ = run(capsys, "bijection", "--partition", "", "--j", "3")
    assert "pi_o      = 1,1,1" in out
    code, out, _ = run(capsys, "bijection", "--partition", "2,1", "--j", "2", "--format", "json")
    data = json.loads(out)
    assert data["pi_o"] == [5, 3] and data["pi_d"] == [4, 3, 1] and data["consistent"]


def test_failure_exit_code(monkeypatch, capsys):
    import qschmidt.cli as cli
    from qschmidt.registry import verify

    def failing(suite, workers):
        for inst in suite:
            yield verify(inst.perturbed(1, q=2))

    monkeypatch.setattr(cli, "iter_verify", failing)
    code, out, _ = run(capsys, "verify", "--identity", "schmidt", "--degree", "5")
    assert code == 1 and "first mismatch at q^2: lhs=2 rhs=3" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qschmidt", "verify", "--identity", "uap"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
