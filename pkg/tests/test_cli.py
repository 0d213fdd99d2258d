from __future__ import annotations

import json
import re

import pytest

from wblowup.cli import main

BASE_JOB = {
    "base_ring": {"vars": ["x", "y"], "relations": []},
    "centre": [{"poly": "x", "weight": 2}, {"poly": "y", "weight": 1}],
    "twist_window": [-2, 1],
    "truncation": {"initial": 2, "step": 1, "max": 8},
    "command": "pushforward-check",
    "format": "json",
}


def write_job(tmp_path, **overrides):
    job = dict(BASE_JOB)
    job.update(overrides)
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    return path


def run(tmp_path, capsys, **overrides):
    path = write_job(tmp_path, **overrides)
    code = main(["--job", str(path)])
    return code, capsys.readouterr()


def test_pushforward_job_passes(tmp_path, capsys):
    code, captured = run(tmp_path, capsys)
    assert code == 0
    doc = json.loads(captured.out)
    assert doc["checks"][0]["verdict"] == "PASS"
    assert doc["job"]["command"] == "pushforward-check"


def test_koszul_job_fails_with_witness(tmp_path, capsys):
    code, captured = run(
        tmp_path, capsys,
        base_ring={"vars": ["x"], "relations": []},
        centre=[{"poly": "x", "weight": 1}, {"poly": "x", "weight": 1}],
        command="koszul-check",
    )
    assert code == 1
    doc = json.loads(captured.out)
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["koszul-regularity"]["verdict"] == "FAIL"
    assert by_name["koszul-regularity"]["witness"]["homological_index"] == 1


def test_proj_coh_matches_formula(tmp_path, capsys):
    code, captured = run(tmp_path, capsys, command="proj-coh",
                         twist_window=[-4, 4])
    assert code == 0
    doc = json.loads(captured.out)
    cells = doc["checks"][0]["cells"]
    assert all(cell["verdict"] == "PASS" for cell in cells)
    assert len(cells) == 9


def test_rees_verify_requires_presentation(tmp_path, capsys):
    code, captured = run(tmp_path, capsys, command="rees-verify")
    assert code == 3
    assert "presentation" in captured.err


def test_rees_verify_with_presentation(tmp_path, capsys):
    pres = [{"name": "U", "poly": "x", "degree": 1},
            {"name": "V", "poly": "y", "degree": 1},
            {"name": "W", "poly": "x", "degree": 2}]
    code, captured = run(tmp_path, capsys, command="rees-verify",
                         presentation=pres, max_degree=4)
    assert code == 0
    code, captured = run(tmp_path, capsys, command="rees-verify",
                         presentation=pres[:2], max_degree=4)
    assert code == 1
    doc = json.loads(captured.out)
    assert doc["checks"][0]["witness"] == {"first_unequal_degree": 2}


def test_sod_verify_window_job(tmp_path, capsys):
    code, captured = run(tmp_path, capsys, command="sod-verify",
                         twist_window=[-3, 0], format="table")
    assert code == 0
    assert "sod-verify" in captured.out and "PASS" in captured.out


def test_table_format(tmp_path, capsys):
    code, captured = run(tmp_path, capsys, format="table")
    assert code == 0
    assert captured.out.startswith("wblowup ")
    assert "overall" in captured.out


def test_out_flag_writes_file(tmp_path, capsys):
    path = write_job(tmp_path)
    out = tmp_path / "report.json"
    code = main(["--job", str(path), "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["checks"]


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    code = main(["--job", str(path)])
    assert code == 3
    err = capsys.readouterr().err
    assert "line 1" in err and "column" in err


def test_schema_violations(tmp_path, capsys):
    cases = [
        {"twist_window": [2, -2]},
        {"centre": []},
        {"centre": [{"poly": "x", "weight": 0}]},
        {"centre": [{"poly": "z", "weight": 1}]},
        {"truncation": {"initial": 9, "step": 1, "max": 2}},
        {"command": "unknown-cmd"},
        {"format": "yaml"},
    ]
    for overrides in cases:
        code, captured = run(tmp_path, capsys, **overrides)
        assert code == 3, overrides
        assert captured.err.startswith("error:"), overrides


def test_reports_are_deterministic(tmp_path, capsys):
    strip = lambda text: re.sub(r'"seconds": [0-9.]+', '"seconds": 0', text)
    outs = []
    for _ in range(2):
        code, captured = run(tmp_path, capsys, command="all",
                             twist_window=[-2, 1])
        assert code == 0
        outs.append(strip(captured.out))
    assert outs[0] == outs[1]


def test_threads_flag_does_not_change_output(tmp_path, capsys):
    path = write_job(tmp_path)
    main(["--job", str(path)])
    one = re.sub(r'"seconds": [0-9.]+', "", capsys.readouterr().out)
    main(["--job", str(path), "--threads", "4"])
    four = re.sub(r'"seconds": [0-9.]+', "", capsys.readouterr().out)
    assert one == four
    assert main(["--job", str(path), "--threads", "0"]) == 3
    capsys.readouterr()
