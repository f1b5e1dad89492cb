import json
import subprocess
import sys

import pytest

from retractkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,code,needle", [
    (["analyze", "S(4)"], 0, "monolith of order 4"),
    (["analyze", "C(1)"], 0, "order 1"),
    (["analyze", "A(5)"], 0, "2 normal subgroups"),
    (["law", "check", "S(4)", "[[x,y]^3,y^3,y^2] = 1"], 0, "holds"),
    (["law", "check", "S(4)", "x^2 = 1"], 1, "x = (2 3 4)"),
    (["law", "check", "S(4)", "[x, y] = 1", "--convention", "opposite"], 1, "fails"),
    (["solve", "S(3)", "x^2 = <(1 2 3)>"], 0, "x = (1 3 2)"),
    (["solve", "S(4)", "x^2 = <(1 2)>"], 1, "no solution"),
    (["solve", "S(4)", "x^2 y^2 = <(1 2)>", "--budget", "10"], 1, "exhausted"),
    (["retract", "direct(S4,C3)", "S4"], 0, "kernel order 3"),
    (["retract", "S3", "A3"], 1, "no retraction"),
    (["retract", "S4", "<(1 2)>", "--method", "brute"], 0, "kernel order 12"),
    (["closedness", "S3", "A3"], 1, "[x, y] = (1 2 3)"),
    (["closedness", "direct(S4,V4)", "S4"], 0, "no counterexample"),
    (["variety", "Q8", "S4"], 0, "member"),
    (["variety", "C5", "S4"], 1, "x^12 = 1"),
    (["variety", "Q8", "S4", "--k-max", "1"], 1, "unknown"),
])
def test_commands(capsys, argv, code, needle):
    got, out, _ = run(capsys, *argv)
    assert got == code
    assert needle in out


@pytest.mark.parametrize("argv", [
    ["law", "check", "S(4)", "x^2 ="],
    ["law", "check", "S(4)", "x^2 = y"],
    ["analyze", "Nope"],
    ["solve", "S(3)", "x = <(1 2 3 4)>"],
    ["retract", "S3", "C4"],
    ["analyze", "S(8)"],
    ["frobnicate"],
    [],
    ["analyze"],
    ["analyze", "S3", "--threads", "0"],
    ["analyze", "G", "--catalog", "/nonexistent/catalog.txt"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_json_output(capsys):
    code, out, _ = run(capsys, "--format", "json", "analyze", "S(4)")
    data = json.loads(out)
    assert code == 0 and data["schema_version"] == 1 and data["passed"]
    assert data["checks"][0]["details"]["monolith_order"] == 4
    code, again, _ = run(capsys, "analyze", "S(4)", "--format", "json")
    assert again == out


def test_catalog_flag(tmp_path, capsys):
    path = tmp_path / "groups.txt"
    path.write_text("G = gens(4): (1 2), (1 2 3 4)\nH = direct(G, C3)\n")
    code, out, _ = run(capsys, "--catalog", str(path), "retract", "H", "G")
    assert code == 0 and "kernel order 3" in out


def test_shipped_names(capsys):
    code, out, _ = run(capsys, "analyze", "SD16")
    assert code == 0 and "order 16" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "retractkit", "solve", "S(3)", "x^2 = <(1 2 3)>"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "x = (1 3 2)" in proc.stdout


def test_verify_paper_flipped(capsys):
    code, out, _ = run(capsys, "verify-paper", "--flip-convention", "--format", "json")
    data = json.loads(out)
    assert code == 0
    law = next(c for c in data["checks"] if c["name"].startswith("s4_law: [["))
    assert set(law["details"]) == {"standard", "opposite"}
    assert data["info"]["convention"] == "opposite"
