import json
import subprocess
import sys

import pytest

from cbkit.cli import main

COLLINEAR3 = {"field": {"kind": "prime", "p": 101}, "points": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"]]}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_cb_check_collinear(tmp_path, capsys):
    path = tmp_path / "collinear3.json"
    path.write_text(json.dumps(COLLINEAR3))
    code, doc, _ = run(["cb-check", "--m", "1", "--points", str(path)], capsys)
    assert code == 0
    assert doc["schema"] == "cbkit/1" and doc["command"] == "cb-check"
    assert doc["result"]["holds"] is True
    assert doc["config"]["seed"] == 0


def test_cb_check_failure_has_reproducer(capsys):
    pts = json.dumps({"points": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    code, doc, _ = run(["cb-check", "--m", "1", "--points", pts], capsys)
    assert code == 1
    assert doc["result"]["holds"] is False and "reproducer" in doc["result"]
    assert doc["result"]["witness_form"] is not None


def test_bounds_quadric(capsys):
    code, doc, _ = run(["bounds", "--family", "quadric", "--n", "2", "--d", "4"], capsys)
    assert code == 0 and doc["result"]["exact"] == 4


def test_invalid_inputs_exit_2(capsys):
    assert main(["bounds", "--family", "cubic", "--n", "7", "--d", "3"]) == 2
    assert main(["nope"]) == 2
    assert main(["cb-check", "--points", "/does/not/exist.json"]) == 2
    assert main(["project", "--kind", "quadric_line", "--field", "rationals", "--n", "2", "--d", "2"]) == 2
    assert capsys.readouterr().out == ""


def test_search_fault_injection(tmp_path, capsys):
    job = tmp_path / "line_bound.json"
    job.write_text(json.dumps({"mode": "line_bound", "trials": 60, "corrupt_implication": True}))
    code, doc, _ = run(["search", "--job", str(job)], capsys)
    assert code == 1
    assert doc["result"]["violations"] and doc["result"]["violations"][0]["points"]["points"]


def test_other_subcommands(capsys):
    code, doc, _ = run(["classify", "--points", json.dumps(COLLINEAR3)], capsys)
    assert code == 0 and doc["result"]["kind"] == "line"
    code, doc, _ = run(["pencil", "--diag", "1,2,3,4,5,6"], capsys)
    assert code == 0 and doc["result"]["discriminant"]["smooth"] is True
    code, doc, _ = run(["project", "--kind", "product_point", "--dims", "1,2", "--degrees", "3,4"], capsys)
    assert code == 0 and doc["result"]["degree"]["symbolic_degree"] == 3
    code, doc, _ = run(["embed", "--plucker", "2,4", "--rows", "[[1,0,0,0],[0,1,0,0]]"], capsys)
    assert doc["result"]["point"] == ["1", "0", "0", "0", "0", "0"]


@pytest.mark.parametrize("argv", [
    ["search", "--mode", "conic_bound", "--trials", "80", "--seed", "3"],
    ["project", "--kind", "quadric_line", "--n", "2", "--d", "3", "--task", "verify", "--samples", "3"],
    ["pencil", "--diag", "1,2,3,4,5,6", "--output", "pretty"],
])
def test_byte_reproducible_subprocess(argv):
    cmd = [sys.executable, "-m", "cbkit.cli"] + argv
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
