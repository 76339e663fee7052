import io
import json
import pathlib
import subprocess
import sys

import pytest

from deformary.cli import HANDLERS, cli_run

TASKS = pathlib.Path(__file__).resolve().parent.parent / "tasks"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code, rep = cli_run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("path", sorted(TASKS.glob("*.json")), ids=lambda p: p.stem)
def test_task_files_pass(path):
    doc = json.loads(path.read_text())
    code, out, err = run([doc["task"], "--input", str(path)])
    assert code == 0, out + err
    rep = json.loads(out)
    assert rep["task"] == doc["task"]


def test_every_command_has_a_task_file():
    tasks = {json.loads(p.read_text())["task"] for p in TASKS.glob("*.json")}
    assert set(HANDLERS) - tasks <= {"inf-ring", "schoof-example", "verify-all"}


def test_inf_ring_without_input():
    code, out, _ = run(["inf-ring", "--case", "3"])
    assert code == 0
    assert "2*a + a^2 + b*c" in out


def test_schoof_flag():
    code, out, _ = run(["schoof-example", "--g", "2", "--degree", "2"])
    assert code == 0 and json.loads(out)


def test_failed_verdict_exits_one(tmp_path):
    doc = json.loads((TASKS / "fl_ext_swap.json").read_text())
    doc["inputs"]["expected"] = 3
    p = tmp_path / "t.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(["fl-ext", "--input", str(p)])
    assert code == 1
    assert not json.loads(out)["ok"]


@pytest.mark.parametrize("content", ["{not json", json.dumps({"version": "deformary/1", "task": "hom"}),
                                     json.dumps({"version": "x"})])
def test_malformed_inputs_exit_two(tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, out, err = run(["fl-ext", "--input", str(p)])
    assert code == 2 and out == "" and "malformed input" in err


def test_missing_file_and_missing_input():
    assert run(["fl-ext", "--input", "/nonexistent.json"])[0] == 2
    assert run(["fl-ext"])[0] == 2
    assert run(["inf-ring", "--case", "3", "--degree", "0"])[0] == 2


def test_output_file_and_determinism(tmp_path):
    path = str(TASKS / "universal_two_blocks.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["universal", "--input", path, "--output", str(a)])[1] == ""
    run(["universal", "--input", path, "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_summary():
    code, out, _ = run(["fl-ext", "--input", str(TASKS / "fl_ext_swap.json"), "--summary"])
    assert code == 0
    assert "PASS" in out and not out.lstrip().startswith("{")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "deformary", "inf-ring", "--case", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "2*a + c + a^2 + b*c" in proc.stdout
