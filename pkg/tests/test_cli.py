import json

import pytest
from gmpy2 import mpq

import stacklearn as sl
from stacklearn.cli import main
from stacklearn.workbench import bundled_instance_path, read_report


def test_gen_learn_verify_cycle(tmp_path, capsys):
    game = tmp_path / "game.json"
    report = tmp_path / "game.report.json"
    assert main(["gen", "--m", "3", "--n", "3", "--bits", "6",
                 "--seed", "5", "--out", str(game)]) == 0
    assert main(["learn", "--instance", str(game), "--zeta", "0.1",
                 "--seed", "42", "--out-report", str(report)]) == 0
    assert main(["verify", "--instance", str(game), "--report", str(report)]) == 0
    doc = read_report(report)
    assert doc["match"] is True
    assert doc["value"] == doc["baseline_value"]


def test_learn_demo_instance(tmp_path):
    report = tmp_path / "demo.report.json"
    transcript = tmp_path / "demo.jsonl"
    code = main(["learn", "--instance", str(bundled_instance_path()),
                 "--zeta", "0.1", "--seed", "42",
                 "--out-report", str(report),
                 "--out-transcript", str(transcript)])
    assert code == 0
    doc = read_report(report)
    assert doc["value"] == [1, 1] and doc["p_star"] == [[0, 1], [0, 1], [1, 1]]
    assert len(transcript.read_text().splitlines()) == doc["queries"]


def test_reports_byte_identical_for_fixed_seed(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        main(["learn", "--instance", str(bundled_instance_path()),
              "--zeta", "0.1", "--seed", "7", "--out-report", str(out)])
    assert a.read_bytes() == b.read_bytes()


def test_learn_bad_instance_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "m": 2, "n": 1, "leader": [[[3, 2]], [[0, 1]]],
        "follower": [[[0, 1]], [[1, 1]]]}))
    assert main(["learn", "--instance", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_verify_mismatch_exits_two(tmp_path):
    game = tmp_path / "game.json"
    report = tmp_path / "game.report.json"
    main(["gen", "--m", "3", "--n", "3", "--bits", "6", "--seed", "2",
          "--out", str(game)])
    main(["learn", "--instance", str(game), "--seed", "1",
          "--out-report", str(report)])
    doc = read_report(report)
    doc["value"] = [0, 1]   # tamper
    report.write_text(json.dumps(doc))
    assert main(["verify", "--instance", str(game), "--report", str(report)]) == 2
    assert read_report(report)["match"] is False


def test_bench_counts(tmp_path):
    out = tmp_path / "bench.json"
    code = main(["bench-exp-binary", "--instance", str(bundled_instance_path()),
                 "--eps-exponents", "10,20,40", "--out", str(out)])
    assert code == 0
    rows = json.loads(out.read_text())["rows"]
    naive = [r["naive_queries"] for r in rows]
    bounded = [r["bounded_queries"] for r in rows]
    assert naive[0] < naive[1] < naive[2]
    assert max(bounded) - min(bounded) <= 2


def test_sweep_csv_and_outdir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("STACKLEARN_OUT", str(tmp_path / "results"))
    assert main(["sweep", "--m-range", "3", "--n-range", "3", "--bits", "6",
                 "--runs", "3", "--seed", "1", "--out", "sweep.csv"]) == 0
    lines = (tmp_path / "results" / "sweep.csv").read_text().splitlines()
    header = lines[0].split(",")
    assert {"m", "n", "queries", "budget", "match", "success"} <= set(header)
    assert len(lines) == 4
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        assert int(row["match"]) == 1
        assert float(row["queries"]) <= float(row["budget"])
