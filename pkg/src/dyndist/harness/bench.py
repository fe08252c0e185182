"""Per-update cost of the SSSP oracle against BFS recomputed from scratch.

Numbers are measurements, not claims: the algebraic engine pays for dense
polynomial-matrix arithmetic that only wins asymptotically.
"""
from __future__ import annotations

import statistics
import time
from typing import Sequence

from ..bounded_dist import BoundedDistOracle
from ..field_ring import FieldConfig
from ..graph import DynGraph, bfs
from ..oracles import SsspOracle
from .generators import gen_stream
from .runner import SCHEMA, _components, _hist_ms
from .stream import Insert

SPIKE_FACTOR = 5.0


def _stats(secs: list[float]) -> dict:
    ms = [s * 1e3 for s in secs]
    return {"mean": round(statistics.fmean(ms), 3), "median": round(statistics.median(ms), 3),
            "max": round(max(ms), 3)}


def bench_one(n: int, updates: int = 20, eps: float = 0.5, seed: int = 0,
              copies: int | None = 1, density: float = 2.0, backend: str = "auto",
              cap_inner: int | None = None) -> dict:
    initial = int(density * n)
    stream = gen_stream("random", n, initial + updates, seed, density=density)
    events = stream.updates()
    G = DynGraph(n)
    for e in events[:initial]:
        G.insert(e.u, e.v)
    s = 0
    t0 = time.perf_counter()
    oracle = SsspOracle(n, s, G.edges(), eps, field=FieldConfig(seed=seed, copies=copies),
                        backend=backend, cap_inner=cap_inner)
    oracle.values()
    init = time.perf_counter() - t0
    o_secs, b_secs = [], []
    for e in events[initial:]:
        op = "insert" if isinstance(e, Insert) else "delete"
        t0 = time.perf_counter()
        oracle.update(op, e.u, e.v)
        oracle.values()
        o_secs.append(time.perf_counter() - t0)
        G.apply(op, e.u, e.v)
        t0 = time.perf_counter()
        bfs(G.adj, s)
        b_secs.append(time.perf_counter() - t0)
    med = statistics.median(o_secs) if o_secs else 0.0
    rebuild_secs = []
    rebuilds = 0
    for c in _components(oracle):
        if isinstance(c, BoundedDistOracle):
            rebuilds += c.rebuilds
            rebuild_secs += c.sub.rebuild_seconds()
    return {
        "schema": SCHEMA, "type": "bench", "seed": seed, "n": n, "updates": len(o_secs),
        "eps": eps, "copies": copies, "rebuilds": rebuilds,
        "timing": {
            "init_ms": round(init * 1e3, 3),
            "oracle_ms": _stats(o_secs) if o_secs else None,
            "bfs_ms": _stats(b_secs) if b_secs else None,
            "spikes": sum(x > SPIKE_FACTOR * med for x in o_secs),
            "update_hist": _hist_ms(o_secs),
            "rebuild_hist": _hist_ms(rebuild_secs),
        },
    }


def bench(ns: Sequence[int] = (250, 500, 1000, 2000), updates: int = 20, eps: float = 0.5,
          seed: int = 0, copies: int | None = 1, **kw) -> list[dict]:
    """One record per n plus a summary naming the crossover (None if never)."""
    records = [bench_one(n, updates, eps, seed, copies, **kw) for n in ns]
    crossover = None
    for r in records:
        t = r["timing"]
        if t["oracle_ms"] and t["oracle_ms"]["median"] < t["bfs_ms"]["median"]:
            crossover = r["n"]
            break
    records.append({"schema": SCHEMA, "type": "summary", "seed": seed, "ns": list(ns),
                    "crossover_n": crossover, "failures": 0})
    return records
