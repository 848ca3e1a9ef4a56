from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from stateforms.cli import main
from stateforms.forms import parse_form
from stateforms.relations import equivalent
from stateforms.report import SuiteReport

GOLDEN = json.loads((Path(__file__).parent / "golden" / "dumps.json").read_text())


@pytest.mark.parametrize("case", GOLDEN, ids=lambda c: " ".join(c["args"][1:]))
def test_dump_matches_golden(case, capsys):
    assert main(case["args"]) == 0
    assert capsys.readouterr().out == case["output"] + "\n"


@pytest.mark.parametrize("case", [c for c in GOLDEN if not c["output"].startswith("[")],
                         ids=lambda c: " ".join(c["args"][1:]))
def test_dump_parses_back(case):
    n = int(case["args"][case["args"].index("--n") + 1])
    from stateforms.cli import dump_text
    selector = case["args"][1]
    idx = case["args"][case["args"].index("--indices") + 1] if "--indices" in case["args"] else None
    text = case["output"]
    assert dump_text(selector, n, idx) == text
    parsed = parse_form(text, n)
    from stateforms.bimodule import X_tensor, gamma_simple
    if selector == "gamma":
        key = tuple(int(x) - 1 for x in idx.split(","))
        assert parsed == gamma_simple(n)[key]
    elif selector == "X":
        key = tuple(int(x) - 1 for x in idx.split(","))
        assert equivalent(parsed, X_tensor(gamma_simple(n))[key])


def test_dump_all_indices(capsys):
    assert main(["dump", "gamma", "--n", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 16 and lines[0].startswith("1,1,1,1: ")


@pytest.mark.parametrize("argv", [
    ["dump", "nonsense"],
    ["dump", "gamma", "--indices", "1,2"],
    ["dump", "gamma", "--indices", "1,1,1,9"],
    ["dump", "phi:E[1,"],
    ["dump", "defect:E[1,2]"],
    ["verify", "nonsense"],
    ["verify"],
    ["verify", "calculus", "--n", "1"],
    ["verify", "calculus", "--suite", "cochain"],
    ["verify", "holomorphic", "--module", "missing.json"],
    ["verify", "calculus", "--calculus", "derham"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_verify_writes_round_tripping_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["verify", "--suite", "connection", "--n", "2", "--report", str(path), "--quiet"])
    assert code == 0
    assert "passed" in capsys.readouterr().out
    text = path.read_text()
    rep = SuiteReport.from_json(text)
    assert rep.to_json() + "\n" == text
    assert rep.suite == "connection" and rep.ok


def test_verify_json_output(capsys):
    assert main(["verify", "ksgns", "--json", "--seed", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["seed"] == 3 and data["summary"]["failed"] == 0


def test_verify_d_calculus_exits_nonzero(capsys):
    assert main(["verify", "cochain", "--n", "2", "--calculus", "d", "--quiet"]) == 1


def test_verify_custom_module_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 2, "dim": 2, "L": [[[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]],
                                                       [[["0", "0"], ["1", "0"]], [["0", "0"], ["0", "1"]]]]}))
    assert main(["verify", "holomorphic", "--module", str(path), "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["module"] == str(path)
    # only the fixed counterexample check is off, because 2-forms collapse at n = 2
    assert [c["check_id"] for c in data["checks"] if c["status"] != c["expected"]] == ["holomorphic.counterexample"]


def test_relation_stats(tmp_path, capsys):
    path = tmp_path / "stats.json"
    assert main(["verify", "calculus", "--samples", "10", "--relation-stats", str(path), "--quiet"]) == 0
    assert json.loads(path.read_text())


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "stateforms", "dump", "phi:E[1,2]"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "v1*cv2\n"
