import json
import subprocess
import sys
from pathlib import Path

import pytest

from tropinv.cli import main

INPUTS = Path(__file__).resolve().parents[1] / "demos" / "inputs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tree_on_cubic(capsys):
    code, out, _ = run(capsys, "tree", "--input", str(INPUTS / "cubic.json"))
    assert code == 0
    rep = json.loads(out)
    assert rep["type"] == "II" and rep["branch_heights"] == ["0", "1"]


def test_output_is_deterministic(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "tree", "--input", str(INPUTS / "quintic_f1.json"))
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["type"] == "VI.2.2"


def test_compare_pass(capsys):
    for name in ("quintic_f1.json", "quintic_f2.json", "genus2.json", "picard.json"):
        code, out, _ = run(capsys, "compare", "--input", str(INPUTS / name))
        assert code == 0 and json.loads(out)["result"] == "PASS"


def test_compare_needs_roots(capsys):
    code, _, err = run(capsys, "compare", "--input", str(INPUTS / "cubic.json"))
    assert code == 2 and "roots" in err


def test_genus2_preset(capsys):
    code, out, _ = run(capsys, "skeleton", "--input", str(INPUTS / "genus2.json"))
    assert code == 0
    rep = json.loads(out)
    s = rep["skeleta"][0]
    assert rep["d"] == 5 and s["n"] == 2 and s["genus"] == 2
    assert s["minimal"]["betti"] == 2


def test_picard_preset(capsys, tmp_path):
    dot = tmp_path / "s.dot"
    code, out, _ = run(capsys, "skeleton", "--input", str(INPUTS / "picard.json"), "--dot", str(dot))
    assert code == 0
    s = json.loads(out)["skeleta"][0]
    assert s["n"] == 3 and s["genus"] == 3
    assert dot.read_text().startswith("graph minimal_n3 {")


def test_skeleton_n_override_and_text(capsys):
    code, out, _ = run(capsys, "skeleton", "--input", str(INPUTS / "cubic.json"), "--n", "2,3,4", "--text")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "type II" and len(lines) == 4


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--input", str(INPUTS / "quintic_f1.json"))
    assert code == 0
    rep = json.loads(out)["invariants"]
    assert set(rep) == {"K2", "K3"} and len(rep["K2"]["b"]) == 11


def test_genpoly_rerun_is_byte_identical(capsys, tmp_path):
    code, out, _ = run(capsys, "genpoly", "--d", "4", "--cache", str(tmp_path))
    assert code == 0
    path = Path(json.loads(out)["file"])
    first = path.read_bytes()
    code, _, _ = run(capsys, "genpoly", "--d", "4", "--cache", str(tmp_path))
    assert code == 0 and path.read_bytes() == first
    assert json.loads(out)["degree"] == 6


@pytest.mark.parametrize("d,rows", [(3, 2), (4, 5), (5, 18)])
def test_halfspaces(capsys, d, rows):
    code, out, _ = run(capsys, "halfspaces", "--d", str(d))
    assert code == 0 and len(json.loads(out)["rows"]) == rows
    code, out, _ = run(capsys, "halfspaces", "--d", str(d), "--text")
    assert len(out.strip().splitlines()) == rows


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "tree", "--input", str(INPUTS / "bad.json"))
    assert code == 2 and "line 2" in err and "column 26" in err
    code, _, _ = run(capsys, "tree", "--input", str(tmp_path / "missing.json"))
    assert code == 2
    (tmp_path / "rep.json").write_text('{"roots": ["1", "1"]}')
    code, _, _ = run(capsys, "tree", "--input", str(tmp_path / "rep.json"))
    assert code == 2
    (tmp_path / "big.json").write_text(json.dumps({"roots": [str(k) for k in range(7)]}))
    code, _, _ = run(capsys, "tree", "--input", str(tmp_path / "big.json"))
    assert code == 3
    code, _, _ = run(capsys, "halfspaces", "--d", "7")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["tree"])
    assert exc.value.code == 2


def test_json_option_writes_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "tree", "--input", str(INPUTS / "cubic.json"), "--json", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["type"] == "II"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "tropinv.cli", "halfspaces", "--d", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and '"rows"' in res.stdout
