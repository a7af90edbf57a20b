"""CLI behaviour and the golden-report corpus.

Set HFLAB_REGEN_GOLDEN=1 to rewrite tests/golden from the current code.
"""

import json
import os
import subprocess
import sys

import pytest

from hflab.cli import main
from hflab.scenario import bundled_names, load_scenario, parse_scenario, ScenarioError

from conftest import GOLDEN

REGEN = os.environ.get("HFLAB_REGEN_GOLDEN") == "1"
EXPECTED_EXIT = {"bad_datum": 1, "mut_broken_cocycle": 1, "mut_wrong_antipode": 1,
                 "mut_zeroed_block": 1}


def comparable(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in ("timing", "versions")}


def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out), "--quiet"])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def check_golden(name: str, doc: dict):
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if not path.exists():
        pytest.fail(f"missing golden file {path.name}; regenerate with HFLAB_REGEN_GOLDEN=1")
    assert doc == json.loads(path.read_text())


def test_bundled_corpus_size():
    names = bundled_names()
    assert len([n for n in names if not n.startswith("mut_") and n != "bad_datum"]) >= 8


@pytest.mark.parametrize("name", bundled_names())
def test_bundled_scenario_matches_golden(name, tmp_path):
    code, report = run_cli(["run", name], tmp_path)
    assert code == EXPECTED_EXIT.get(name, 0)
    assert report["status"] == ("pass" if code == 0 else "fail")
    check_golden(name, comparable(report))


def test_reports_are_deterministic(tmp_path):
    _, a = run_cli(["run", "twisted_theta2"], tmp_path, "a.json")
    _, b = run_cli(["run", "twisted_theta2", "--jobs", "4"], tmp_path, "b.json")
    assert json.dumps(comparable(a), sort_keys=True) == json.dumps(comparable(b), sort_keys=True)


def test_check_order_is_declared_order(tmp_path):
    _, rep = run_cli(["run", "sweedler_z", "--jobs", "3"], tmp_path)
    assert [c["name"] for c in rep["checks"]] == load_scenario("sweedler_z").checks


def test_invalid_datum_reports_offender(tmp_path):
    code, rep = run_cli(["run", "bad_datum"], tmp_path)
    assert code == 1
    entry = {e["name"]: e for e in rep["checks"][0]["entries"]}["centrality_N_equals_M"]
    assert entry["status"] == "fail" and entry["evidence"]["offending"]


def test_malformed_json_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["run", str(p)]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_schema_violation_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"datum": {"theta": 1, "conductor": 2, "exponents": [[1]]},
                             "checks": ["frobnicate"]}))
    assert main(["run", str(p)]) == 2
    assert "schema violation" in capsys.readouterr().err


def test_missing_eps_in_support_exit_2(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"datum": {"theta": 1, "conductor": 2, "exponents": [[1]]},
                             "gamma_generators": [{"t": ["2"]}], "support": [{"t": ["2"]}],
                             "checks": ["exact_sequence"]}))
    assert main(["run", str(p), "--quiet", "--out", str(tmp_path / "o.json")]) == 2


def test_missing_file_exit_2():
    assert main(["run", "/nonexistent/scenario.json"]) == 2


def test_parse_scenario_default_support():
    sc = parse_scenario({"datum": {"theta": 1, "conductor": 2, "exponents": [[1]]},
                         "gamma_generators": [{"t": ["2"], "s": ["1"]}]})
    assert len(sc.support) == 3 and sc.support[0].is_identity
    with pytest.raises(ScenarioError):
        parse_scenario({"datum": {}, "extra": 1})


def test_validate_subcommand(tmp_path):
    code, rep = run_cli(["validate", "sweedler_z"], tmp_path)
    assert code == 0 and [c["name"] for c in rep["checks"]] == ["validate"]


def test_growth_subcommand_z2(tmp_path):
    code, rep = run_cli(["growth", "group_z"], tmp_path)
    assert code == 0
    entries = {e["name"]: e for e in rep["checks"][0]["entries"]}
    assert entries["classified"]["evidence"]["label"] == "polynomial(2)"


def test_trivial_twist_equals_verify(tmp_path):
    _, v = run_cli(["verify", "sweedler_z"], tmp_path, "v.json")
    _, t = run_cli(["twist", "sweedler_z"], tmp_path, "t.json")
    assert comparable(v) == comparable(t)


def test_fiber_subcommand_golden(tmp_path):
    out = tmp_path / "fiber.json"
    assert main(["fiber", "sweedler_z", "--char", "eps", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["hopf"]["dim"] == 4
    check_golden("fiber_sweedler_eps", doc)


def test_fiber_bad_char_exit_2(capsys):
    assert main(["fiber", "sweedler_z", "--char", '{"t": ["0"]}']) == 2


def test_summary_table(capsys):
    assert main(["validate", "sweedler_z"]) == 0
    out = capsys.readouterr().out
    assert "scenario sweedler_z (validate): PASS" in out


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hflab", "scenarios"], capture_output=True,
                          text=True, check=True)
    assert "sweedler_z" in proc.stdout.split()
