import json

import pytest

from unisep.cli import main
from unisep.suites import (
    EXIT_FAIL, EXIT_PASS, EXIT_UNPROVEN, SUITES, Options, Report, WeightGrid, record, run_suite, skipped,
)


def _report(*records, sampled_ok=False):
    return Report("t", 0, sampled_ok, list(records))


def test_record_status_values():
    assert record("a", "c", True, True)["status"] == "pass"
    assert record("a", "c", True, False)["status"] == "fail"
    assert record("a", "c", False, None)["status"] == "info"
    assert record("a", "c", True, True, mode="sampled")["status"] == "sampled"
    assert record("a", "c", True, False, mode="sampled")["status"] == "fail"
    assert skipped("a", "c", "too big")["status"] == "skipped"


def test_report_status_and_exit_codes():
    ok, bad = record("a", "c", True, True), record("b", "c", True, False)
    info = record("i", "c", False, None)
    samp = record("s", "c", True, True, mode="sampled")
    assert _report(ok, info).exit_code == EXIT_PASS
    assert _report(ok, bad).exit_code == EXIT_FAIL
    assert _report(ok, skipped("k", "c", "cap")).exit_code == EXIT_FAIL
    assert _report(ok, samp).status == "unproven" and _report(ok, samp).exit_code == EXIT_UNPROVEN
    assert _report(ok, samp, sampled_ok=True).exit_code == EXIT_PASS
    # a failure outranks missing proof
    assert _report(bad, samp).status == "fail"
    # unasserted records never change the verdict
    assert _report(ok, record("x", "c", False, False)).status == "pass"


def test_report_body_and_header_split():
    rep = Report("t", 7, False, [record("a", "c", True, True)], {"a": 1.25}, "2026-01-01T00:00:00+00:00")
    doc = json.loads(rep.to_json())
    assert doc["header"] == {"generated": "2026-01-01T00:00:00+00:00", "runtimes": {"a": 1.25}}
    assert doc["body"] == json.loads(rep.body_json())
    body = doc["body"]
    assert body["seed"] == 7 and body["suite"] == "t" and body["status"] == "pass"
    assert body["summary"] == {"records": 1, "asserted": 1, "passed": 1, "sampled": 0, "failed": 0}
    # timestamps and runtimes stay out of the deterministic body
    assert "2026" not in rep.body_json() and "1.25" not in rep.body_json()
    assert rep.lines()[-1].startswith("suite t: pass")


def test_empty_weight_grid_gives_empty_passing_report():
    rep = run_suite("weights", Options(grid=WeightGrid.empty()))
    assert rep.records == [] and rep.status == "pass" and rep.exit_code == EXIT_PASS
    assert rep.body()["summary"]["records"] == 0


def test_unknown_suite_rejected():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert set(SUITES) == {"sp8", "affine", "steinberg", "weights", "obstructions", "sums"}


def test_task_selection():
    rep = run_suite("sp8", Options(only=("sp8/agl2_3", "sp8/contain/")))
    ids = [r["id"] for r in rep.records]
    assert "sp8/agl2_3" in ids and "sp8/l3_2_2" not in ids
    assert any(i.startswith("sp8/contain/") for i in ids)
    assert run_suite("sp8", Options(only=())).records == []


@pytest.mark.parametrize("sid,only", [("weights", None), ("sp8", ("sp8/agl2_3", "sp8/psu3_2", "sp8/contain/")),
                                      ("sums", None)])
def test_thread_count_does_not_change_body(sid, only):
    a = run_suite(sid, Options(seed=3, only=only))
    b = run_suite(sid, Options(seed=3, threads=4, only=only))
    assert a.body_json() == b.body_json()


def test_seed_changes_only_randomized_records():
    a = run_suite("sums", Options(seed=0))
    b = run_suite("sums", Options(seed=1))
    fixed = {"sums/e9_sp8", "sums/e27_sp10"}
    ra = {r["id"]: r for r in a.records if r["id"] in fixed}
    rb = {r["id"]: r for r in b.records if r["id"] in fixed}
    assert ra.keys() == fixed and ra["sums/e9_sp8"]["order"] == rb["sums/e9_sp8"]["order"]
    assert a.status == b.status == "pass"


def test_sampled_record_needs_permission():
    only = ("steinberg/sp6_2_st",)
    rep = run_suite("steinberg", Options(samples=50, only=only, use_cache=True))
    (rec,) = rep.records
    assert rec["status"] == "sampled" and rec["checked"] == 50
    assert rep.exit_code == EXIT_UNPROVEN
    assert run_suite("steinberg", Options(samples=50, only=only, sampled_ok=True)).exit_code == EXIT_PASS


def test_cli_suite_selection_and_sampled_exit(tmp_path, capsys):
    out = tmp_path / "st.json"
    args = ["suite", "steinberg", "--only", "steinberg/sp6_2_st", "--samples", "20", "--report", str(out), "--quiet"]
    assert main(args) == EXIT_UNPROVEN
    assert json.loads(out.read_text())["body"]["status"] == "unproven"
    assert main(args + ["--sampled-ok"]) == EXIT_PASS
    assert main(["suite", "sp8", "--only", "sp8/agl2_3", "--quiet"]) == EXIT_PASS
