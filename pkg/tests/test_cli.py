"""Command-line surface: output documents, determinism, exit codes."""
import json

import pytest

from icp_lab.cli import main

STAMP = "2026-01-01T00:00:00+00:00"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--timestamp", STAMP)
    assert code == 0, err
    return json.loads(out)


def test_catalog_lists_builtins(capsys):
    doc = run_json(capsys, "catalog")
    assert doc["kind"] == "catalog"
    rows = {r["id"]: r for r in doc["payload"]["entries"]}
    for eid in ("classical-bit", "classical-trit", "sbit", "hbit", "qubit", "polygon:3"):
        assert eid in rows
    assert rows["polygon:3"]["observed_dimension"] == 3
    assert rows["polygon:4"]["observed_dimension"] == 2
    assert rows["sbit"]["ambient_dimension"] == 3
    assert "X" in rows["hbit"]["measurements"]
    assert doc["manifest"]["command"] == "catalog"
    assert doc["manifest"]["seed"] == 42


def test_catalog_csv(capsys):
    code, out, err = run_cli(capsys, "catalog", "--format", "csv", "--timestamp", STAMP)
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("# ")]
    assert lines[0] == "id,ambient_dimension,state_dimension,observed_dimension,measurements"
    sbit_row = next(l for l in lines if l.startswith("sbit,"))
    assert ";" in sbit_row.split(",")[-1]  # measurement names joined


@pytest.mark.parametrize("name,extractable", [("sbit", 2.0), ("hbit", 2.0)])
def test_demo_certificates(capsys, name, extractable):
    doc = run_json(capsys, "demo", name)
    assert doc["kind"] == "certificate"
    report = doc["payload"]["report"]
    assert report["extractable"] == pytest.approx(extractable, abs=1e-12)
    assert report["violated"] is True
    assert doc["payload"]["crosscheck_max_abs_diff"] <= 1e-12


def test_demo_qubit_rac(capsys):
    doc = run_json(capsys, "demo", "qubit-rac")
    report = doc["payload"]["report"]
    assert report["extractable"] == pytest.approx(0.7982479266142879, abs=1e-12)
    assert report["violated"] is False


def test_demo_classical_is_plain_report(capsys):
    doc = run_json(capsys, "demo", "classical")
    assert doc["kind"] == "report"
    report = doc["payload"]["report"]
    assert report["extractable"] <= 1.0 + 1e-9
    assert report["violated"] is False


def test_demo_csv_row(capsys):
    code, out, err = run_cli(capsys, "demo", "sbit", "--format", "csv", "--timestamp", STAMP)
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("# ")]
    assert lines[0].startswith("pairs,gains,redundancy,extractable")
    cells = lines[1].split(",")
    assert cells[-1] == "true"  # violated


def test_output_bytes_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code, _, err = run_cli(
            capsys, "scan", "pgnst", "--p", "2:4:0.5", "--timestamp", STAMP, "--out", str(target)
        )
        assert code == 0, err
    assert a.read_bytes() == b.read_bytes()


def test_scan_pgnst_rows(capsys):
    doc = run_json(capsys, "scan", "pgnst", "--p", "2:4:0.5")
    rows = doc["payload"]["rows"]
    assert [r["p"] for r in rows] == [2.0, 2.5, 3.0, 3.5, 4.0]
    by_p = {r["p"]: r for r in rows}
    assert by_p[3.0]["extractable"] == pytest.approx(2.0 - 0.9578024777106202, abs=1e-9)
    assert by_p[2.5]["violated"] is True
    assert by_p[4.0]["violated"] is True


def test_scan_polygon_rows(capsys):
    doc = run_json(capsys, "scan", "polygon", "--n", "5:6")
    rows = {r["n"]: r for r in doc["payload"]["rows"]}
    assert rows[5]["extractable"] == pytest.approx(1.0704307871940208, abs=1e-9)
    assert rows[6]["extractable"] == pytest.approx(1.1887218755408673, abs=1e-9)
    for r in rows.values():
        assert r["violated"] is True
        assert r["crosscheck_max_abs_diff"] <= 1e-9


def test_scan_composite_rows(capsys):
    doc = run_json(capsys, "scan", "composite")
    rows = doc["payload"]["rows"]
    assert [r["n"] for r in rows] == list(range(1, 9))
    first_violating = next(r["n"] for r in rows if r["violated"])
    assert first_violating == 5


def test_scan_mismatch_rows(capsys):
    doc = run_json(capsys, "scan", "mismatch")
    flagged = [r["n"] for r in doc["payload"]["rows"] if r["mismatch"]]
    assert flagged == [4, 6]


def test_scan_axioms(capsys):
    doc = run_json(capsys, "scan", "axioms", "--trials", "50", "--entropy", "shannon")
    rows = doc["payload"]["rows"]
    assert [r["axiom"] for r in rows] == ["i", "ii", "iii", "iv", "v"]
    assert all(r["passed"] for r in rows)


def test_scan_sweep(capsys):
    doc = run_json(capsys, "scan", "sweep", "--points", "5")
    rows = doc["payload"]["rows"]
    assert len(rows) == 5
    assert rows[0]["extractable"] == pytest.approx(1.0, abs=1e-9)
    assert rows[-1]["extractable"] == pytest.approx(0.7982479266142879, abs=1e-9)


def test_scan_rejects_bad_range(capsys):
    code, _, err = run_cli(capsys, "scan", "polygon", "--n", "6:2")
    assert code == 2
    assert "range" in err


def test_scan_rejects_malformed_range(capsys):
    code, _, err = run_cli(capsys, "scan", "pgnst", "--p", "abc")
    assert code == 2


def _demo_file(tmp_path, capsys, name="sbit"):
    path = tmp_path / f"{name}.json"
    code, _, err = run_cli(
        capsys, "demo", name, "--timestamp", STAMP, "--out", str(path)
    )
    assert code == 0, err
    return path


def test_eval_round_trips_demo_output(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys)
    doc = run_json(capsys, "eval", "--ensemble", str(path))
    report = doc["payload"]["report"]
    assert report["extractable"] == pytest.approx(2.0, abs=1e-12)
    assert report["violated"] is True


def test_eval_explicit_assignment_matches_embedded(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys)
    base = run_json(capsys, "eval", "--ensemble", str(path))
    explicit = run_json(
        capsys, "eval", "--ensemble", str(path), "--measurements", "X,Z", "--registers", "0,1"
    )
    assert explicit["payload"]["report"] == base["payload"]["report"]


def test_eval_rotated_qubit_measurement(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys, "qubit-rac")
    doc = run_json(
        capsys,
        "eval",
        "--ensemble",
        str(path),
        "--measurements",
        "X,Z(0.3)",
        "--registers",
        "0,1",
    )
    report = doc["payload"]["report"]
    assert 0.0 <= report["extractable"] <= 1.0 + 1e-9
    assert report["violated"] is False


def test_eval_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run_cli(capsys, "eval", "--ensemble", str(tmp_path / "nope.json"))
    assert code == 3
    assert "cannot read" in err


def test_eval_invalid_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli(capsys, "eval", "--ensemble", str(bad))
    assert code == 2
    assert "invalid JSON" in err


def test_eval_unnormalized_ensemble(tmp_path, capsys):
    doc = {
        "theory": "sbit",
        "entries": [
            {"p": 0.9, "state": [0.0, 0.0, 1.0], "registers": [0, 0]},
            {"p": 0.9, "state": [0.0, 0.0, 1.0], "registers": [1, 1]},
        ],
    }
    path = tmp_path / "unnorm.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run_cli(capsys, "eval", "--ensemble", str(path), "--measurements", "X,Z")
    assert code == 2
    assert "probabilities" in err


def test_eval_theory_conflict(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys)
    code, _, err = run_cli(
        capsys, "eval", "--ensemble", str(path), "--theory", "qubit"
    )
    assert code == 2
    assert "conflicts" in err


def test_eval_unknown_measurement(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys)
    code, _, err = run_cli(
        capsys, "eval", "--ensemble", str(path), "--measurements", "X,Q"
    )
    assert code == 2


def test_eval_register_count_mismatch(tmp_path, capsys):
    path = _demo_file(tmp_path, capsys)
    code, _, err = run_cli(
        capsys, "eval", "--ensemble", str(path), "--measurements", "X,Z", "--registers", "0"
    )
    assert code == 2
    assert "counts differ" in err


def test_out_to_unwritable_path(capsys, tmp_path):
    target = tmp_path / "missing-dir" / "x.json"
    code, _, err = run_cli(capsys, "catalog", "--out", str(target))
    assert code == 3
    assert "cannot write" in err


def test_usage_errors_return_two(capsys):
    assert run_cli(capsys, "no-such-command")[0] == 2
    assert run_cli(capsys)[0] == 2


def test_version_flag(capsys):
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0
    assert "icp-lab" in out
