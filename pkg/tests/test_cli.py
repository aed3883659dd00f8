import json

import pytest

from tetracluster.cli import (FAIL, PASS, REPORT_ONLY, SCHEMA, SUITES, Record, Report,
                              SuiteConfig, emit_report, main, run_suite, suite_names)
from tetracluster.errors import BadConfig


def test_config_validation():
    with pytest.raises(BadConfig):
        SuiteConfig(q0=1.5)
    with pytest.raises(BadConfig):
        SuiteConfig(window=0)
    with pytest.raises(BadConfig):
        SuiteConfig.from_dict({"nonsense": 1})
    with pytest.raises(BadConfig):
        suite_names("no-such-suite")


def test_empty_suite_gives_valid_json(tmp_path):
    rep = run_suite(SuiteConfig(suite="none"))
    path = emit_report(rep, tmp_path / "r.json")
    data = json.loads(path.read_text())
    assert data["schema"] == SCHEMA and data["records"] == []
    assert rep.exit_status == 0


def test_monomial_suite_records():
    rep = run_suite(SuiteConfig(suite="monomial-te"))
    assert len(rep.records) == 16
    assert all(r.claim.startswith("monomial-te/") for r in rep.records)
    holds = sorted(r.claim.split("/")[1] for r in rep.records if r.metrics["holds"])
    assert holds == ["+-++", "+-+-", "--++", "--+-"]
    assert all(r.status == PASS for r in rep.records)


def test_reports_are_deterministic():
    cfg = SuiteConfig(suite="monomial-te,pentagon,tropical")
    a = run_suite(cfg).dumps(timing=False)
    b = run_suite(cfg).dumps(timing=False)
    assert a == b


def test_sign_filter():
    rep = run_suite(SuiteConfig(suite="monomial-te", signs=("--++", "+-+-")))
    assert [r.claim for r in rep.records] == ["monomial-te/+-+-", "monomial-te/--++"]


def test_report_only_does_not_fail():
    rep = Report({}, [Record("x", {}, REPORT_ONLY, {}), Record("y", {}, PASS, {})])
    assert rep.exit_status == 0
    rep.records.append(Record("z", {}, FAIL, {}))
    assert rep.exit_status == 1


def test_exploratory_identity_is_report_only():
    rep = run_suite(SuiteConfig(suite="dilog-identity", box=1))
    status = {r.claim: r.status for r in rep.records}
    assert status["dilog-identity/+-++"] == REPORT_ONLY
    assert status["dilog-identity/--+-"] == REPORT_ONLY
    assert status["dilog-identity/--++"] == PASS


def test_every_suite_builds_tasks():
    cfg = SuiteConfig()
    for name, (_, build) in SUITES.items():
        assert build(cfg), name


def test_main(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(["--suite", "pentagon", "--report", str(out)])
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    assert json.loads(out.read_text())["config"]["suite"] == "pentagon"
    assert main(["--list-suites"]) == 0
    assert main(["--suite", "pentagon", "--q0", "2"]) == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "tropical", "q0": 0.25}))
    out = tmp_path / "rep.json"
    assert main(["--config", str(cfg), "--q0", "0.2", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["q0"] == 0.2


def test_parallel_matches_serial():
    a = run_suite(SuiteConfig(suite="p-table", jobs=2)).dumps(timing=False)
    b = run_suite(SuiteConfig(suite="p-table", jobs=1)).dumps(timing=False)
    assert json.loads(a)["records"] == json.loads(b)["records"]
