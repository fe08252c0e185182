import random

import numpy as np
import pytest

from dyndist.emulator import bfs_all_pairs
from dyndist.errors import ConfigError
from dyndist.field_ring import FieldConfig
from dyndist.harness.generators import gen_stream
from dyndist.oracles import (ALGEBRAIC, EXACT, ApspOracle, MsspOracle, OracleConfig, SsspOracle,
                             StOracle, clamp_eps, mssp_k, sssp_query, st_query)

F = FieldConfig(seed=2, copies=2)
INF = np.inf


def test_config_derivation():
    c = OracleConfig("sssp", 0.5, [0]).derive(100)
    assert (c.kind, c.variant, c.hop) == ("SSSP", "E2", 8)
    c = OracleConfig("st", 0.5, [0], 3).derive(100)
    assert (c.variant, c.hop) == ("E4", 18)
    c = OracleConfig("mssp", 0.5, [0, 1]).derive(100)
    assert c.variant == "SPARSE" and c.k == 2 and c.hop == 99
    assert list(OracleConfig("apsp", 0.5).derive(5).sources) == list(range(5))
    assert clamp_eps(3.0, 10) == (1.0, False)
    assert clamp_eps(0.1, 10) == (0.1, True)
    assert mssp_k(1.0, 10 ** 6) == 2
    with pytest.raises(ConfigError):
        OracleConfig("st", 0.5, [0]).derive(10)
    with pytest.raises(ConfigError):
        OracleConfig("knn").derive(10)
    with pytest.raises(ConfigError):
        clamp_eps(0, 10)


def test_small_examples():
    o = StOracle(5, 2, 2, [(0, 1)], field=F)
    assert st_query(o).value == 0
    o = SsspOracle(6, 0, [(0, 1), (1, 2)], field=F)
    assert o.values().tolist() == [0, 1, 2, INF, INF, INF]
    assert all(e.channel == ALGEBRAIC for e in sssp_query(o)[:3])
    o = MsspOracle(4, range(4), [], field=F)
    D = o.values()
    assert np.array_equal(np.isfinite(D), np.eye(4, dtype=bool)) and not D.diagonal().any()
    assert ApspOracle(2, [(0, 1)], field=F).values().tolist() == [[0, 1], [1, 0]]
    assert ApspOracle(3, [(0, 1), (1, 2), (0, 2)], field=F).values().tolist() == \
        [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_exact_mode_below_2_over_n():
    o = SsspOracle(10, 0, [(i, i + 1) for i in range(9)], eps=0.05)
    assert o.exact and o.query()[9].channel == EXACT and o.values()[9] == 9
    o.update("insert", 0, 9)
    assert o.values()[9] == 1


def test_bad_source():
    with pytest.raises(ConfigError):
        SsspOracle(5, 7)


def check(answer, truth, eps, hop):
    fin = np.isfinite(truth)
    assert np.array_equal(fin, np.isfinite(answer))
    a, t = answer[fin], truth[fin]
    assert np.all(a >= t) and np.all(a <= (1 + eps) * t + 1e-9)
    assert np.array_equal(a[t <= hop], t[t <= hop])


@pytest.mark.parametrize("kind", ["st", "sssp", "mssp", "apsp"])
def test_dynamic_stream(kind):
    n, eps = 50, 0.5
    stream = gen_stream("path-churn", n, 49 + 40, seed=5)
    ev = stream.updates()
    edges = [(e.u, e.v) for e in ev[:n - 1]]
    make = {"st": lambda: StOracle(n, 0, n - 1, edges, eps, field=F),
            "sssp": lambda: SsspOracle(n, 0, edges, eps, field=F),
            "mssp": lambda: MsspOracle(n, [0, 7, 30], edges, eps, field=F),
            "apsp": lambda: ApspOracle(n, edges, eps, field=F)}
    o = make[kind]()
    for e in ev[n - 1:]:
        o.update("insert" if e.line()[0] == "+" else "delete", e.u, e.v)
        D = bfs_all_pairs(o.G)
        truth = D[o.sources]
        ans = o.values()
        if kind == "st":
            truth = truth[:, [n - 1]]
        elif kind == "sssp":
            truth = truth[0]
        check(ans, truth, eps, o.cfg.hop)


def test_simple_apsp_variant():
    n = 30
    rng = random.Random(1)
    o = ApspOracle(n, [(i, i + 1) for i in range(n - 1)], 0.5, field=F, simple=True)
    for _ in range(10):
        u, v = rng.sample(range(n), 2)
        o.update("delete" if o.G.has_edge(u, v) else "insert", u, v)
        check(o.values(), bfs_all_pairs(o.G), 0.5, o.cfg.hop)
