import csv
import json
import subprocess
import sys

import pytest

from spectraux.cli import main


def test_gen_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "--seed", "7", "-o", str(a)]) == 0
    assert main(["gen", "--seed", "7", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "stations=9 edges=" in capsys.readouterr().out


def test_gen_to_stdout_keeps_stdout_parseable(capsys):
    assert main(["gen", "--operators", "2", "--stations", "1,4"]) == 0
    out, err = capsys.readouterr()
    assert json.loads(out)["operators"] == [1, 4]
    assert "stations=5" in err


def test_run_fixture(tmp_path, data_dir):
    out = tmp_path / "r.json"
    graph = tmp_path / "g.txt"
    assert main(["run", str(data_dir / "fixture.scn.json"), "-o", str(out), "--dump-graph", str(graph)]) == 0
    data = json.loads(out.read_text())
    assert data["payments"] == [18, 3, 0]
    assert data["welfare"] == 30 and data["efficiency"] == 4
    assert len(graph.read_text().splitlines()) == 6


def test_run_fixture_vcg_and_bids(tmp_path, data_dir):
    out = tmp_path / "v.json"
    assert main(["run", str(data_dir / "fixture.scn.json"), "--mechanism", "vcg", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["optimal_welfare"] == 40
    assert main(["run", str(data_dir / "fixture.scn.json"), "--bids", str(data_dir / "fixture_deviation.bids.json"),
                 "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["utilities"][1] == -3


def test_run_matches_snapshot(tmp_path, data_dir):
    out = tmp_path / "r.json"
    assert main(["run", str(data_dir / "seed42.scn.json"), "-o", str(out)]) == 0
    assert out.read_text() == (data_dir / "seed42.result.json").read_text()
    assert main(["run", str(data_dir / "seed42.scn.json"), "--mechanism", "vcg", "-o", str(out)]) == 0
    assert out.read_text() == (data_dir / "seed42.vcg.result.json").read_text()


def test_compare_batch(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["compare", "--batch", "100", "-o", str(out)]) == 0
    table = list(csv.DictReader(out.open()))
    greedy = [r for r in table if r["mechanism"] == "greedy" and r["instance_id"] != "mean"]
    assert len(greedy) == 100
    assert all(float(r["ratio"]) <= 1.0 for r in greedy)
    assert {r["mechanism"] for r in table if r["instance_id"] == "mean"} == {"greedy", "vcg"}


def test_vcg_above_cap_exits_2(tmp_path, capsys):
    sc = tmp_path / "big.json"
    assert main(["gen", "--operators", "3", "--stations", "10", "-o", str(sc)]) == 0
    assert main(["run", str(sc), "--mechanism", "vcg"]) == 2
    assert "cap" in capsys.readouterr().err
    assert main(["bench", "--stations-sweep", "10", "--vcg-sweep", "10:40:10"]) == 2


@pytest.mark.parametrize("content", ["", "{", '{"schema": 1, "kind": "scenario"}'])
def test_bad_input_exits_3(tmp_path, content, capsys):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert main(["run", str(p)]) == 3
    assert "bad.json" in capsys.readouterr().err


def test_missing_file_and_bad_sweep_exit_3(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == 3
    assert main(["bench", "--stations-sweep", "9:1:1"]) == 3


def test_bids_shape_mismatch_exits_3(tmp_path, data_dir):
    bids = tmp_path / "b.json"
    bids.write_text(json.dumps({"schema": 1, "kind": "bids", "bids": [[1], [2], [3]]}))
    assert main(["run", str(data_dir / "fixture.scn.json"), "--bids", str(bids)]) == 3


def test_prop_reports_violations(tmp_path, capsys):
    out_dir = tmp_path / "bundles"
    code = main(["prop", "--trials", "40", "--deviations", "10", "--out-dir", str(out_dir), "--max-bundles", "3"])
    out = capsys.readouterr().out
    assert code == 1
    assert "profitable" in out and "monotonicity" in out
    assert len(list(out_dir.glob("*.scn.json"))) == 3


def test_prop_clean_exit(capsys):
    # a single operator has no one to outbid
    assert main(["prop", "--trials", "5", "--operators", "1"]) == 0


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--operators", "3", "--stations-sweep", "3:12:3", "--vcg-sweep", "3:12:3",
                 "--vcg-reps", "2", "--backend", "python", "-o", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["mechanism"] for r in rows} == {"greedy", "vcg"}
    assert all(r["runtime_us"] == "" for r in rows)
    assert "vcg growth" in capsys.readouterr().out


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "spectraux", "run", str(data_dir / "minimal.scn.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payments"] == [0]
