"""End-to-end tests of the command-line interface: exit codes, report
formats, and determinism."""

import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "cosymp.cli"]

SPACE_5D = {
    "dim": 5,
    "mode": "exact",
    "b": [["0", "1", "0", "0", "0"], ["-1", "0", "0", "0", "0"],
          ["0", "0", "0", "0", "0"], ["0", "0", "0", "0", "1"],
          ["0", "0", "0", "-1", "0"]],
    "psi": ["0", "0", "1", "0", "0"],
}


def run(*args):
    return subprocess.run(CMD + list(args), capture_output=True, text=True)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_validate_reports_reeb(tmp_path):
    path = write(tmp_path, "s.json", {"space": SPACE_5D})
    r = run("validate", "--input", path, "--format", "json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["dim"] == 5 and obj["reeb"] == ["0", "0", "1", "0", "0"]


def test_validate_degenerate_space_exits_one(tmp_path):
    bad = {"dim": 3, "mode": "exact",
           "b": [["0", "0", "0"]] * 3, "psi": ["0", "0", "1"]}
    path = write(tmp_path, "bad.json", {"space": bad})
    r = run("validate", "--input", path)
    assert r.returncode == 1


def test_missing_input_exits_two():
    r = run("validate", "--input", "/nonexistent/space.json")
    assert r.returncode == 2


def test_malformed_json_exits_two(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    r = run("validate", "--input", str(path))
    assert r.returncode == 2


def test_unknown_subcommand_exits_two():
    r = run("frobnicate")
    assert r.returncode == 2


def test_bad_tolerance_exits_two(tmp_path):
    path = write(tmp_path, "s.json", {"space": SPACE_5D})
    r = run("validate", "--input", path, "--tol-lin", "-1")
    assert r.returncode == 2


def test_orthogonal_subcommand(tmp_path):
    path = write(tmp_path, "o.json", {
        "space": SPACE_5D,
        "subspace": {"basis": [["0", "1", "0", "0", "0"],
                               ["0", "0", "1", "0", "0"],
                               ["0", "0", "0", "1", "0"]]}})
    r = run("orthogonal", "--input", path, "--format", "json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["dim"] == 2


def test_classify_subcommand(tmp_path):
    path = write(tmp_path, "c.json", {
        "space": SPACE_5D,
        "subspace": {"basis": [["1", "0", "0", "0", "0"],
                               ["0", "0", "0", "1", "0"]]}})
    r = run("classify", "--input", path, "--format", "json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["lagrangian_like"] is True


def test_extend_rejects_nonisotropic_with_exit_one(tmp_path):
    path = write(tmp_path, "e.json", {
        "space": SPACE_5D,
        "subspace": {"basis": [["0", "1", "0", "0", "0"],
                               ["0", "0", "1", "0", "0"]]}})
    r = run("extend", "--input", path)
    assert r.returncode == 1
    assert "NotIsotropic" in r.stderr


def test_darboux_subcommand(tmp_path):
    path = write(tmp_path, "s.json", {"space": SPACE_5D})
    r = run("darboux", "--input", path, "--format", "json")
    assert r.returncode == 0
    assert json.loads(r.stdout)["relations_exact"] is True


def test_check_graph_scaling_fails_mathematically():
    r = run("check-graph", "--builtin", "scaling")
    assert r.returncode == 1


def test_weinstein_translation_builtin():
    r = run("weinstein", "--builtin", "translation", "--format", "json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert abs(obj["periods"][1] - 0.1) < 1e-9


def test_fixed_points_translation_exits_one():
    r = run("fixed-points", "--builtin", "translation")
    assert r.returncode == 1


def test_corpus_is_byte_deterministic():
    r1 = run("corpus", "--format", "json")
    r2 = run("corpus", "--format", "json")
    assert r1.returncode == 0
    assert r1.stdout == r2.stdout


def test_text_and_json_formats_differ_but_agree(tmp_path):
    path = write(tmp_path, "s.json", {"space": SPACE_5D})
    rt = run("validate", "--input", path, "--format", "text")
    rj = run("validate", "--input", path, "--format", "json")
    assert rt.returncode == rj.returncode == 0
    assert rt.stdout != rj.stdout
    assert "5" in rt.stdout and json.loads(rj.stdout)["dim"] == 5
