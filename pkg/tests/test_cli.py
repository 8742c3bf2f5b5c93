import json
import subprocess
import sys

import pytest

from tim.cli import main


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "tim.cli", *map(str, args)], capture_output=True, text=True
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_bound_fixture_c(topology_files):
    code, out, err = run("bound", topology_files["c"])
    assert code == 0
    obj = json.loads(out)
    assert obj["value"] == "3/8" and obj["class"] == "General"
    assert "0.375" in err


def test_synth_then_verify(topology_files, tmp_path):
    s = tmp_path / "s.json"
    assert main(["synth", str(topology_files["b"]), "--seed", "7", "--out", str(s)]) == 0
    report = tmp_path / "r.json"
    code = main(["verify", str(topology_files["b"]), str(s), "--target", "2/5", "--out", str(report)])
    assert code == 0
    assert json.loads(report.read_text())["achieved"] == "2/5"
    # asking for more than the scheme delivers fails verification
    assert main(["verify", str(topology_files["b"]), str(s), "--target", "1/2", "--out", str(report)]) == 1


def test_synth_general_class(topology_files):
    assert run("synth", topology_files["c"])[0] == 3


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"K":2,"interferers":{"2":[1],"2":[1]}}')
    assert main(["bound", str(bad)]) == 2
    assert main(["bound", str(tmp_path / "missing.json")]) == 2


def test_unknown_flag_is_an_error(topology_files):
    assert run("bound", topology_files["a"], "--bogus")[0] == 2


def test_outputs_are_byte_identical(topology_files, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"s{k}.json"
        main(["synth", str(topology_files["b"]), "--seed", "3", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].endswith(b"\n") and b"\r" not in outs[0]


def test_analyze_with_dot(topology_files, tmp_path):
    out, dot = tmp_path / "a.json", tmp_path / "g.dot"
    assert main(["analyze", str(topology_files["b"]), "--out", str(out), "--dot", str(dot)]) == 0
    obj = json.loads(out.read_text())
    assert obj["delta_min"] == 1 and obj["B"] == [1] and obj["L_min_odd"] == "inf"
    assert dot.read_text().startswith("digraph")


def test_export_dot_styles(topology_files, tmp_path):
    dot = tmp_path / "g.dot"
    assert main(["export-dot", str(topology_files["c"]), "--out", str(dot)]) == 0
    lines = dot.read_text().splitlines()
    alignment = [ln for ln in lines if "dir=none" in ln]
    conflict = [ln for ln in lines if "dashed" in ln]
    assert len(alignment) == 3 and all("solid" in ln for ln in alignment)
    assert len(conflict) == 6 and all("->" in ln and "red" in ln for ln in conflict)


def test_survey_command(tmp_path):
    out = tmp_path / "s.jsonl"
    code, stdout, _ = run("survey", "--k", "3", "--exhaustive", "--out", out)
    assert code == 0
    assert len(out.read_text().splitlines()) == 64
    assert json.loads(stdout)["flagged"] == 0
    code, stdout, stderr = run("survey", "--k", "5", "--random", "10", "--density", "1/4")
    assert code == 0
    assert len(stdout.splitlines()) == 10
    assert json.loads(stderr)["records"] == 10


@pytest.mark.parametrize("target", ["abc", "1/0"])
def test_bad_target_rejected(topology_files, target):
    assert run("verify", topology_files["a"], topology_files["a"], "--target", target)[0] == 2
