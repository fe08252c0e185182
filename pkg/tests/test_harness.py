import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyndist.errors import StreamError
from dyndist.graph import DynGraph, INF
from dyndist.harness import bench as bench_mod
from dyndist.harness.cli import main
from dyndist.harness.generators import KINDS, gen_stream
from dyndist.harness.ground_truth import exact_diameter, floyd_warshall, oracle_bfs
from dyndist.harness.runner import (SCHEMA, RunConfig, check_approx, diameter_ok, run,
                                    strip_timings)
from dyndist.harness.stream import Delete, Insert, Query, UpdateStream, loads

P5 = DynGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


def test_oracle_bfs_examples():
    assert oracle_bfs(DynGraph(1), 0) == [[0]]
    assert oracle_bfs(P5, 0) == [[0, 1, 2, 3, 4]]
    assert oracle_bfs(P5, 0, hop_cap=2) == [[0, 1, 2, INF, INF]]
    assert oracle_bfs(P5, [0, 4])[1] == [4, 3, 2, 1, 0]


def test_floyd_warshall_and_diameter():
    assert np.array_equal(floyd_warshall(P5), np.abs(np.subtract.outer(range(5), range(5))))
    assert exact_diameter(P5) == 4
    assert exact_diameter(DynGraph(3, [(0, 1)])) == INF
    assert exact_diameter(DynGraph(1)) == 0
    D = DynGraph(3, [(0, 1), (1, 2)], directed=True)
    assert floyd_warshall(D)[2, 0] == INF


TEXT = """# sample
n 6 u
+ 0 1
+ 1 2   # trailing comment
? st 0 2
? mssp 0,2,5
? apsp
- 0 1
? sssp 1
? diam
? xst 0 2
"""


def test_stream_roundtrip():
    s = loads(TEXT)
    assert s.n == 6 and not s.directed and len(s) == 9
    assert s.events[2] == Query("st", (0, 2))
    assert s.events[3] == Query("mssp", (0, 2, 5))
    assert loads(s.dumps()).events == s.events
    assert s.dumps().splitlines()[0] == "n 6 u"
    assert [e.line() for e in s.updates()] == ["+ 0 1", "+ 1 2", "- 0 1"]


@pytest.mark.parametrize("text,index", [
    ("n 3 u\n+ 0 1\n+ 1 0\n", 1),
    ("n 3 u\n- 0 1\n", 0),
    ("n 3 u\n+ 0 3\n", 0),
    ("n 3 u\n+ 1 1\n", 0),
    ("n 3 u\n+ 0 1\n? st 0\n", 1),
    ("n 3 u\n? knn 0\n", 0),
    ("n 3 u\n* 0 1\n", 0),
    ("n 3 u\n+ 0 x\n", 0),
])
def test_stream_errors_carry_index(text, index):
    with pytest.raises(StreamError) as info:
        loads(text)
    assert info.value.index == index


def test_bad_headers():
    for text in ("", "n 3\n", "n x u\n", "m 3 u\n"):
        with pytest.raises(StreamError):
            loads(text)


def test_directed_stream_allows_both_directions():
    assert len(loads("n 3 d\n+ 0 1\n+ 1 0\n")) == 2


def test_gen_examples():
    assert len(gen_stream("random", 10, 0, 1)) == 0
    assert gen_stream("random", 10, 20, 1).dumps() == gen_stream("random", 10, 20, 1).dumps()
    assert gen_stream("random", 10, 20, 1).dumps() != gen_stream("random", 10, 20, 2).dumps()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(KINDS), st.integers(2, 30), st.integers(0, 120), st.integers(0, 99),
       st.booleans())
def test_generated_streams_are_valid(kind, n, length, seed, directed):
    s = gen_stream(kind, n, length, seed, directed=directed and kind == "random",
                   query="sssp 0", query_every=3)
    s.validate()
    assert len(s.updates()) == length or kind == "star-churn" and n == 2
    loads(s.dumps())


def test_check_helpers():
    t = np.array([0, 2, 4, INF])
    assert check_approx(np.array([0, 2, 5, INF]), t, 0.5)
    assert not check_approx(np.array([0, 1, 4, INF]), t, 0.5)
    assert not check_approx(np.array([0, 2, 7, INF]), t, 0.5)
    assert not check_approx(np.array([0, 2, 4, 9]), t, 0.5)
    assert not check_approx(np.array([0, 2, 5, INF]), t, 0.5, hop=4)
    assert diameter_ok(1, 1, 0.25) and diameter_ok(INF, INF, 0.25)
    assert not diameter_ok(40, 29, 0.25) and not diameter_ok(INF, 3, 0.25)


def test_run_trivial_streams_verify_clean():
    recs = run(RunConfig(stream=loads(TEXT), verify=True))
    summary = recs[-1]
    assert summary["schema"] == SCHEMA and summary["type"] == "summary"
    assert summary["failures"] == 0 and summary["queries"] == 6
    assert all(r["seed"] == 0 and r["schema"] == SCHEMA for r in recs)
    queries = [r for r in recs[:-1] if r["event"].startswith("?")]
    assert all(r["pass"] and "truth" in r and "ratio" in r for r in queries)
    assert queries[0]["answer"] == 2 and queries[0]["truth"] == 2
    assert queries[3]["answer"][0] is None  # node 1 cannot reach 0 after the delete


def test_run_reports_wrong_answers(monkeypatch):
    from dyndist.harness import runner
    monkeypatch.setattr(runner.Instance, "answer", lambda self: (np.float64(7), {}))
    recs = run(RunConfig(stream=loads("n 3 u\n+ 0 1\n? st 0 1\n"), verify=True))
    assert recs[-1]["failures"] == 1 and recs[1]["pass"] is False


def test_replay_determinism():
    s = gen_stream("random", 30, 80, 4, query="mssp 0,3", query_every=4)
    a = run(RunConfig(stream=s, verify=True, seed=5))
    b = run(RunConfig(stream=s, verify=True, seed=5))
    assert strip_timings(a) == strip_timings(b)
    assert "wall_ms" in a[0] and "timing" in a[-1]


def test_sssp_ratio_example():
    s = gen_stream("path-churn", 120, 119 + 200, 1, query="sssp 0", query_every=5)
    recs = run(RunConfig(stream=s, verify=True, audit=False, eps=0.5))
    assert recs[-1]["failures"] == 0 and recs[-1]["max_ratio"] <= 1.5


def test_bench_smoke():
    recs = bench_mod.bench([40, 60], updates=3, copies=1)
    assert [r["n"] for r in recs[:-1]] == [40, 60]
    assert "crossover_n" in recs[-1]
    assert recs[0]["timing"]["oracle_ms"]["median"] > 0


# ------------------------------------------------------------------ CLI

def test_cli_gen_verify(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    assert main(["gen", "--kind", "path-churn", "--n", "20", "--length", "40",
                 "--query", "st 0 19", "-o", str(stream)]) == 0
    report = tmp_path / "r.ndjson"
    dump = tmp_path / "emu"
    assert main(["verify", str(stream), "-o", str(report), "--dump-emulators", str(dump)]) == 0
    recs = [json.loads(line) for line in report.read_text().splitlines()]
    assert recs[-1]["failures"] == 0 and recs[-1]["verified"]
    files = sorted(p.name for p in dump.iterdir())
    assert files == ["0-st-E4.txt"]
    assert "failures=0" in capsys.readouterr().err


def test_cli_config_env_and_errors(tmp_path, monkeypatch):
    stream = tmp_path / "s.txt"
    stream.write_text("n 4 u\n+ 0 1\n? sssp 0\n")
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eps": 0.25, "seed": 3, "timings": False,
                               "run": {"xst-h": 4}}))
    report = tmp_path / "r.ndjson"
    assert main(["--config", str(cfg), "run", str(stream), "-o", str(report)]) == 0
    s = json.loads(report.read_text().splitlines()[-1])
    assert s["config"]["eps"] == 0.25 and s["config"]["xst_h"] == 4 and s["seed"] == 3
    assert "timing" not in s
    monkeypatch.setenv("DYNDIST_SEED", "11")
    assert main(["--config", str(cfg), "run", str(stream), "-o", str(report)]) == 0
    assert json.loads(report.read_text().splitlines()[-1])["seed"] == 11
    assert main(["--config", str(cfg), "run", str(stream), "--seed", "2", "-o", str(report)]) == 0
    assert json.loads(report.read_text().splitlines()[-1])["seed"] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("n 3 u\n+ 0 1\n- 1 2\n")
    assert main(["run", str(bad), "-o", str(report)]) == 2
    cfg.write_text(json.dumps({"run": {"colour": 1}}))
    assert main(["--config", str(cfg), "run", str(stream)]) == 2


def test_cli_exit_code_on_failure(tmp_path, monkeypatch):
    from dyndist.harness import runner
    monkeypatch.setattr(runner.Instance, "answer", lambda self: (np.float64(0), {}))
    stream = tmp_path / "s.txt"
    stream.write_text("n 4 u\n+ 0 1\n? st 0 1\n")
    assert main(["verify", str(stream), "-o", str(tmp_path / "r")]) == 1
    assert main(["run", str(stream), "-o", str(tmp_path / "r")]) == 0


def test_cli_bench(tmp_path):
    out = tmp_path / "b.ndjson"
    assert main(["bench", "--n", "30", "--updates", "2", "-o", str(out)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert recs[0]["type"] == "bench" and recs[-1]["type"] == "summary"
