import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from simplexeq.cli import (JOBS_ENV, REPORT_SCHEMA, SuiteConfig, build_parser, dumps_report,
                           load_config, main, plan, run_suite)
from simplexeq.errors import ConfigError

ROOT = Path(__file__).resolve().parents[1]
SMALL = ["--solution", "odouble:Z2", "--solution", "group:Z3", "--solution", "interval:1",
         "--samples", "50", "--quiet"]


def strip_timing(report: dict) -> dict:
    return {**report, "checks": [{k: v for k, v in c.items() if k != "ms"}
                                 for c in report["checks"]]}


def run_cli(tmp_path, *args):
    out = tmp_path / "report.json"
    code = main(["verify", *args, "--out", str(out)])
    return code, json.loads(out.read_text())


def test_small_suite_passes_and_matches_schema(tmp_path):
    code, report = run_cli(tmp_path, *SMALL)
    assert code == 0
    jsonschema.validate(report, REPORT_SCHEMA)
    assert {c["status"] for c in report["checks"]} == {"pass"}
    names = [c["name"] for c in report["checks"]]
    assert names[0] == "odouble:Z2:hopf" and "group:Z3:cross-backend" in names


def test_corruption_flag_fails_with_counterexamples(tmp_path):
    code, report = run_cli(tmp_path, *SMALL, "--corrupt")
    assert code == 1
    jsonschema.validate(report, REPORT_SCHEMA)
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert failed and all(c["counterexample"] is not None for c in failed)


def test_missing_structure_file_exits_2(capsys):
    assert main(["verify", "--config", str(ROOT / "configs" / "missing-file.json")]) == 2
    assert "not found" in capsys.readouterr().err


def test_structure_file_suite(tmp_path):
    code, report = run_cli(tmp_path, "--config", str(ROOT / "configs" / "sweedler-file.json"),
                           "--equation", "hopf", "--equation", "ss1", "--equation", "ss3")
    assert code == 0 and len(report["checks"]) == 3


@pytest.mark.parametrize("data", [
    {"suite": "paper-all", "colour": "red"},
    {"qdilog": {"order": 12, "depth": 3}},
    {"prime": 15},
    {"samples": 0},
    {"suite": "nonexistent"},
    {"solutions": ["group:Z7x"]},
    {"solutions": ["ring-eps:+2:rational"]},
    {"solutions": ["ring-eps:+1:quaternion"]},
    {"solutions": ["interval:-1"]},
    {"solutions": ["interval:half"]},
    {"solutions": ["qdilog:S"]},
    {"solutions": ["odouble:Q8"]},
])
def test_bad_configs_are_rejected(tmp_path, data):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError):
        plan(load_config(path))
    assert main(["verify", "--config", str(path), "--quiet"]) == 2


def test_unknown_equation_selects_nothing():
    cfg = SuiteConfig(solutions=["group:Z2"], equations=["nope"])
    with pytest.raises(ConfigError):
        plan(cfg)


def test_determinism_modulo_timing():
    cfg = SuiteConfig(solutions=["example1", "ring-eps:-1:matrix2", "qdilog:S_inv"],
                      equations=["m-system", "ss1", "tet-T"], samples=60, seed=7)
    a = strip_timing(run_suite(cfg, jobs=1))
    b = strip_timing(run_suite(cfg, jobs=2))
    assert dumps_report(a) == dumps_report(b)
    other = strip_timing(run_suite(SuiteConfig(**{**cfg.__dict__, "seed": 8}), jobs=1))
    assert other["seed"] == 8 and other["checks"][0]["status"] == "pass"


def test_jobs_default_from_environment(monkeypatch):
    monkeypatch.setenv(JOBS_ENV, "3")
    assert build_parser().parse_args(["verify"]).jobs == 3
    monkeypatch.delenv(JOBS_ENV)
    assert build_parser().parse_args(["verify"]).jobs == 1


def test_list(capsys):
    assert main(["list", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert "odouble:Z2" in data["solutions"] and "4sim" in data["solutions"]["odouble:Z2"]
    assert data["suites"]["qdilog"] == ["qdilog:S_inv", "qdilog:Sbar_qexp"]


def test_hopf_validate(tmp_path, capsys):
    assert main(["hopf-validate", "S3*"]) == 0
    assert "PASS  coassociativity" in capsys.readouterr().out
    data = json.loads((ROOT / "src" / "simplexeq" / "data" / "Z2.json").read_text())
    data["mu"][0][0][1] = "1/1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    out = tmp_path / "r.json"
    assert main(["hopf-validate", str(bad), "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["checks"][0]["counterexample"]["axiom"] == "coassociativity"
    assert main(["hopf-validate", str(tmp_path / "absent.json")]) == 2
    assert main(["hopf-validate", "Q8"]) == 2


def test_qdilog_subcommand(tmp_path):
    states = tmp_path / "states.json"
    states.write_text(json.dumps([[0, 0, 0], [0, 0], [1, 0, -1, 2]]))
    out = tmp_path / "q.json"
    code = main(["qdilog", "--variant", "Sbar_qexp", "--order", "8", "--states", str(states),
                 "--out", str(out), "--quiet"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["checks"][0]["backend"].startswith("qseries:N=8,")
    assert main(["qdilog", "--states", str(tmp_path / "none.json")]) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simplexeq", "verify", "--solution", "group:Z2",
                           "--equation", "ss1"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "1 checks, 0 failed" in proc.stdout
