"""End-to-end command line tests, run in-process through main()."""

import json
import os

import pytest

from normgroups.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


# -- check -------------------------------------------------------------------


def test_check_normalizing_exits_zero(capsys):
    code, out, _ = run(capsys, "check", "--degree", "5", "--group", "AGL(1,5)",
                       "--map", "1,1,3,4,1")
    assert code == 0
    assert "status:   normalizing" in out


def test_check_failure_exits_one_with_witness(capsys):
    code, payload, _ = run_json(capsys, "check", "--degree", "5", "--group", "C5",
                                "--map", "1,1,3,4,1")
    assert code == 1
    assert payload["schema"] == 1
    assert payload["status"] == "not-normalizing"
    assert payload["witness"]["g"]["cycles"]


def test_check_m12_reports_published_witness(capsys):
    code, payload, _ = run_json(capsys, "check", "--degree", "12", "--group", "M12",
                                "--map", "1,2,3,4,5,5,6,6,6,6,6,6")
    assert code == 1
    assert payload["witness"]["g"]["cycles"] == "(1 3 2)(4 6 5)(7 9 8)"
    assert payload["trace"] == ["shortcut"]


def test_witness_replay_roundtrip(capsys):
    # any printed witness must reproduce the failure in single-pair mode
    code, payload, _ = run_json(capsys, "check", "--degree", "5", "--group", "D(2*5)",
                                "--map", "1,1,1,2,3")
    assert code == 1
    cycles = payload["witness"]["g"]["cycles"]
    code2, payload2, _ = run_json(capsys, "check", "--degree", "5", "--group", "D(2*5)",
                                  "--map", "1,1,1,2,3", "--witness", cycles)
    assert code2 == 1
    assert payload2["status"] == "not-normalizing"


def test_check_pair_that_passes(capsys):
    code, payload, _ = run_json(capsys, "check", "--degree", "5", "--group", "C5",
                                "--map", "1,1,3,4,1", "--witness", "()")
    assert code == 0
    assert payload["status"] == "normalizing"


def test_check_rejects_bad_map(capsys):
    code, out, err = run(capsys, "check", "--degree", "5", "--group", "C5",
                         "--map", "1,1,9,4,1")
    assert code == 2
    assert out == ""
    assert "error:" in err


def test_check_rejects_permutation_map(capsys):
    code, _, err = run(capsys, "check", "--degree", "4", "--group", "A4",
                       "--map", "2,1,3,4")
    assert code == 2
    assert "singular" in err


def test_check_requires_group(capsys):
    code, _, err = run(capsys, "check", "--degree", "5", "--map", "1,1,3,4,1")
    assert code == 2
    assert "error:" in err


def test_group_file_input(tmp_path, capsys):
    path = tmp_path / "c5.txt"
    path.write_text("(1 2 3 4 5)\n")
    code, payload, _ = run_json(capsys, "check", "--degree", "5",
                                "--group-file", str(path), "--map", "1,1,3,4,1")
    assert code == 1
    assert payload["group"] == "c5.txt"


# -- sweeps ------------------------------------------------------------------


def test_normalizing_command(capsys):
    code, payload, _ = run_json(capsys, "normalizing", "--degree", "5",
                                "--group", "D(2*5)")
    assert code == 1
    assert payload["command"] == "normalizing"
    assert payload["map"] == [1, 1, 1, 2, 3]


def test_k_normalizing_command(capsys):
    code, payload, _ = run_json(capsys, "k-normalizing", "--degree", "5",
                                "--group", "C5", "--rank", "1")
    assert code == 0
    assert payload["rank"] == 1
    assert payload["trace"] == ["analytic"]


def test_k_normalizing_bad_rank(capsys):
    code, _, err = run(capsys, "k-normalizing", "--degree", "5", "--group", "C5",
                       "--rank", "7")
    assert code == 2
    assert "k < degree" in err


@pytest.mark.slow
def test_json_reports_are_worker_count_independent(capsys):
    base = ("normalizing", "--degree", "6", "--group", "PSL(2,5)")
    _, one, _ = run(capsys, *base, "--workers", "1", "--format", "json")
    _, three, _ = run(capsys, *base, "--workers", "3", "--format", "json")
    assert one == three


def test_progress_goes_to_stderr_only(capsys):
    code, out, err = run(capsys, "normalizing", "--degree", "4", "--group", "A4",
                         "--progress", "--progress-interval", "0", "--format", "json")
    assert code == 0
    json.loads(out)
    assert "[A4]" in err


def test_resume_cache_file(tmp_path, capsys):
    cache = str(tmp_path / "a4.sweep")
    code, payload, _ = run_json(capsys, "normalizing", "--degree", "4",
                                "--group", "A4", "--resume", cache)
    assert code == 0
    assert os.path.exists(cache)
    code2, payload2, _ = run_json(capsys, "normalizing", "--degree", "4",
                                  "--group", "A4", "--resume", cache)
    assert code2 == 0
    assert payload2 == payload


def test_cache_dir_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NORMGROUPS_CACHE_DIR", str(tmp_path))
    code, _, _ = run_json(capsys, "normalizing", "--degree", "4", "--group", "S4")
    assert code == 0
    assert any(name.endswith(".sweep") for name in os.listdir(tmp_path))


def test_cache_mismatch_is_an_error(tmp_path, capsys):
    cache = str(tmp_path / "x.sweep")
    run(capsys, "normalizing", "--degree", "4", "--group", "A4", "--resume", cache)
    code, _, err = run(capsys, "normalizing", "--degree", "4", "--group", "S4",
                       "--resume", cache)
    assert code == 2
    assert "cache" in err


# -- classify ----------------------------------------------------------------


def test_classify_degree_4(capsys):
    code, payload, _ = run_json(capsys, "classify", "--degree", "4")
    assert code == 0
    assert payload["matches_expected"] is True
    assert payload["computed_normalizing"] == ["A4", "S4", "trivial"]


@pytest.mark.slow
def test_classify_degree_5_table_output(capsys):
    code, out, _ = run(capsys, "classify", "--degree", "5")
    assert code == 0
    assert "match: yes" in out
    assert "- C5" in out and "not-normalizing" in out


def test_classify_rejects_degree_10(capsys):
    with pytest.raises(SystemExit):
        run(capsys, "classify", "--degree", "10")


# -- listings ----------------------------------------------------------------


def test_reps_degree_2(capsys):
    code, payload, _ = run_json(capsys, "reps", "--degree", "2", "--group", "S2")
    assert code == 0
    assert payload["count"] == 1
    assert payload["reps"] == [{"map": [1, 1], "orbit": 2}]


def test_reps_rank_filter_and_limit(capsys):
    code, payload, _ = run_json(capsys, "reps", "--degree", "4", "--group", "S4",
                                "--rank", "2")
    assert code == 0
    assert all(len(set(r["map"])) == 2 for r in payload["reps"])
    code, limited, _ = run_json(capsys, "reps", "--degree", "4", "--group", "S4",
                                "--limit", "3")
    assert limited["count"] == 3


def test_groups_list(capsys):
    code, payload, _ = run_json(capsys, "groups", "list", "--degree", "9")
    assert code == 0
    rows = {r["label"]: r for r in payload["groups"]}
    assert rows["PΓL(2,8)"]["order"] == 1512
    assert rows["PSL(2,8)"]["order"] == 504
    assert rows["ASL(2,3)"]["order"] == 216
    assert rows["AGL(2,3)"]["order"] == 432
    assert rows["A9"]["order"] == 181440
    assert rows["trivial"]["transitive"] is False


def test_groups_list_all_degrees(capsys):
    code, payload, _ = run_json(capsys, "groups", "list")
    assert code == 0
    degrees = {r["degree"] for r in payload["groups"]}
    assert degrees == {4, 5, 6, 7, 8, 9, 12}


def test_filters_command(capsys):
    code, payload, _ = run_json(capsys, "filters", "--degree", "5", "--group", "D10")
    assert code == 0
    assert payload["group"] == "D(2*5)"
    assert payload["passed"] is True
    names = [c["name"] for c in payload["checks"]]
    assert "(2,3)-homogeneous" in names


def test_filters_failure_sets_exit_code(tmp_path, capsys):
    path = tmp_path / "c4.txt"
    path.write_text("(1 2 3 4)\n")
    code, payload, _ = run_json(capsys, "filters", "--degree", "4",
                                "--group-file", str(path))
    assert code == 1
    assert payload["first_rejection"] == "primitive"
    failing = [c for c in payload["checks"] if not c["passed"]]
    assert any(c["witness_map"] for c in failing)


# -- output plumbing -----------------------------------------------------------


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "verdict.json"
    code, out, _ = run(capsys, "check", "--degree", "5", "--group", "C5",
                       "--map", "1,1,3,4,1", "--format", "json", "--out", str(target))
    assert code == 1
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["status"] == "not-normalizing"


def test_timings_flag_adds_seconds(capsys):
    _, without, _ = run_json(capsys, "check", "--degree", "5", "--group", "C5",
                             "--map", "1,1,3,4,1")
    assert "seconds" not in without
    _, with_t, _ = run_json(capsys, "check", "--degree", "5", "--group", "C5",
                            "--map", "1,1,3,4,1", "--timings")
    assert "seconds" in with_t


def test_json_is_sorted_and_stable(capsys):
    _, first, _ = run(capsys, "check", "--degree", "5", "--group", "C5",
                      "--map", "1,1,3,4,1", "--format", "json")
    _, second, _ = run(capsys, "check", "--degree", "5", "--group", "C5",
                       "--map", "1,1,3,4,1", "--format", "json")
    assert first == second
    payload = json.loads(first)
    assert list(payload) == sorted(payload)
