"""Replay an update stream against the oracles and optionally verify it.

One oracle instance is kept per distinct query signature (``? st 0 5`` and
``? st 1 5`` get separate instances).  An instance is built from the graph
as it stands when its first query arrives, so the leading insert block is
bulk-loaded, and from then on receives every update.

Reports are newline-delimited JSON: one record per event and a final
summary, all tagged with ``SCHEMA`` and the seed.  Wall-clock data lives only
under ``wall_ms`` and ``timing`` keys; ``strip_timings`` removes them for
replay-determinism checks.
"""
from __future__ import annotations

import json
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass
from typing import IO, Iterable

import numpy as np

from ..bounded_dist import MAX_ALGEBRAIC_HOP, BoundedDistOracle
from ..emulator import Emulator, bfs_all_pairs, check_distances
from ..errors import ConfigError
from ..extras import Diameter, ExactSt
from ..field_ring import FieldConfig
from ..graph import DynGraph, bfs
from ..hitting_set import DynamicHittingSet
from ..oracles import MsspOracle, Oracle, SsspOracle, StOracle, ApspOracle
from .stream import Query, UpdateStream, load

SCHEMA = "dyndist.report/1"
TIMING_KEYS = ("wall_ms", "timing")
TOL = 1e-9


@dataclass
class RunConfig:
    stream: str | UpdateStream = ""
    eps: float = 0.5
    verify: bool = False
    audit: bool | None = None  # structural audits; defaults to ``verify``
    mode: str = "randomized"
    copies: int | None = None
    prime_bits: int = 22
    modulus: int | None = None
    seed: int = 0
    cap_inner: int | None = None
    backend: str = "auto"
    max_algebraic_hop: int = MAX_ALGEBRAIC_HOP
    xst_h: int = 5
    diam_eps: float | None = None
    simple_apsp: bool = False
    timings: bool = True

    def field(self) -> FieldConfig:
        return FieldConfig(mode=self.mode, seed=self.seed, copies=self.copies,
                           prime_bits=self.prime_bits, modulus=self.modulus)

    def describe(self) -> dict:
        d = asdict(self) if not isinstance(self.stream, UpdateStream) else \
            {k: v for k, v in asdict(self).items() if k != "stream"}
        if isinstance(self.stream, UpdateStream):
            d["stream"] = "<in-memory>"
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown run option(s): {', '.join(sorted(extra))}")
        return cls(**d)


def _num(x) -> float | int | None:
    """JSON-safe distance: None for infinity, int when integral."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return int(x) if x == int(x) else round(x, 9)


def _nums(a) -> list:
    a = np.asarray(a, dtype=float)
    if a.ndim == 0:
        return _num(a)
    return [_nums(r) for r in a] if a.ndim > 1 else [_num(x) for x in a]


def max_ratio(answer: np.ndarray, truth: np.ndarray) -> float:
    ok = np.isfinite(truth) & (truth > 0) & np.isfinite(answer)
    if not ok.any():
        return 1.0
    return float(np.max(answer[ok] / truth[ok]))


def check_approx(answer: np.ndarray, truth: np.ndarray, eps: float, hop: int | None = None) -> bool:
    """truth <= answer <= (1+eps) truth, infinity agrees, exact within ``hop``."""
    answer = np.asarray(answer, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if not np.array_equal(np.isfinite(answer), np.isfinite(truth)):
        return False
    fin = np.isfinite(truth)
    a, t = answer[fin], truth[fin]
    if np.any(a < t - TOL) or np.any(a > (1 + eps) * t + TOL):
        return False
    if hop is not None:
        near = t <= hop
        if np.any(a[near] != t[near]):
            return False
    return True


def diameter_ok(est: float, D: float, eps: float) -> bool:
    if not math.isfinite(D):
        return not math.isfinite(est)
    return (2 / 3 - eps) * D - 1 / 3 - TOL <= est <= (1 + eps) * D + TOL


# ------------------------------------------------------------------ instances

def _components(obj, seen=None) -> Iterable:
    """Every sub-structure of an oracle instance, depth first."""
    seen = seen if seen is not None else set()
    if obj is None or id(obj) in seen:
        return
    seen.add(id(obj))
    yield obj
    for name in ("channel", "emulator", "base", "bd", "hs", "D1", "D2"):
        yield from _components(getattr(obj, name, None), seen)


class Instance:
    """An oracle bound to one query signature."""

    def __init__(self, q: Query, G: DynGraph, cfg: RunConfig):
        self.q = q
        self.cfg = cfg
        n = G.n
        edges = G.edges()
        kw = dict(field=cfg.field(), backend=cfg.backend, max_algebraic_hop=cfg.max_algebraic_hop,
                  cap_inner=cfg.cap_inner)
        if G.directed and q.kind != "xst":
            raise ConfigError(f"query kind {q.kind} needs an undirected stream")
        k, a = q.kind, q.args
        if k == "st":
            self.obj = StOracle(n, a[0], a[1], edges, cfg.eps, **kw)
        elif k == "sssp":
            self.obj = SsspOracle(n, a[0], edges, cfg.eps, **kw)
        elif k == "mssp":
            self.obj = MsspOracle(n, list(a), edges, cfg.eps, **kw)
        elif k == "apsp":
            self.obj = ApspOracle(n, edges, cfg.eps, simple=cfg.simple_apsp, **kw)
        elif k == "diam":
            self.obj = Diameter(n, edges, cfg.diam_eps or cfg.eps, seed=cfg.seed, **kw)
        else:
            self.obj = ExactSt(n, a[0], a[1], cfg.xst_h, edges, G.directed, seed=cfg.seed, **kw)

    def update(self, op: str, u: int, v: int) -> None:
        self.obj.update(op, u, v)

    def answer(self) -> tuple[np.ndarray, dict]:
        o = self.obj
        if isinstance(o, Oracle):
            est = o.estimates()
            vals = np.array([[e.value for e in row] for row in est], dtype=float)
            used = Counter(e.channel for row in est for e in row)
            extra = {"channels": dict(sorted(used.items()))}
            if isinstance(o, StOracle):
                return vals[0, 0], extra
            if isinstance(o, SsspOracle):
                return vals[0], extra
            return vals, extra
        return np.float64(o.query()), {}

    def check(self, answer, G: DynGraph, D: np.ndarray | None) -> tuple[dict, bool]:
        """Ground truth and verdict for one answer."""
        k, a = self.q.kind, self.q.args
        o = self.obj
        if k == "xst":
            t = np.float64(bfs(G.adj, a[0])[a[1]])
            return {"truth": _num(t), "ratio": max_ratio(np.atleast_1d(answer), np.atleast_1d(t))}, \
                bool(answer == t)
        if k == "diam":
            Dm = float(D.max()) if G.n > 1 else 0.0
            ok = diameter_ok(float(answer), Dm, o.eps)
            return {"truth": _num(Dm), "ratio": max_ratio(np.atleast_1d(answer), np.atleast_1d(Dm))}, ok
        rows = o.sources
        truth = D[rows]
        if k == "st":
            truth = truth[0, a[1]]
        elif k == "sssp":
            truth = truth[0]
        hop = None if o.exact else o.cfg.hop
        ok = check_approx(answer, truth, o.cfg.eps, hop)
        ratio = max_ratio(np.atleast_1d(answer), np.atleast_1d(truth))
        return {"truth": _nums(truth), "ratio": ratio}, ok

    def audit(self, G: DynGraph, D: np.ndarray) -> list[str]:
        """Structural invariants of every component; returns failure messages."""
        out = []
        for c in _components(self.obj):
            if isinstance(c, DynamicHittingSet):
                if c.coverage_violations():
                    out.append(f"hitting set misses {len(c.coverage_violations())} heavy node(s)")
                if len(c.A) > c.size_bound:
                    out.append(f"hitting set size {len(c.A)} > {c.size_bound:.1f}")
                if not c.degenerate and len(c.last_changes) > c.r_max:
                    out.append(f"recourse {len(c.last_changes)} > {c.r_max}")
            elif isinstance(c, Emulator):
                if c.stale:
                    continue
                bad = check_distances(D, c.all_pairs(), c.eps, c.additive)
                if bad:
                    out.append(f"{c.variant} emulator stretch violated on {bad} pair(s)")
                if c.size > c.size_bound:
                    out.append(f"{c.variant} emulator size {c.size} > {c.size_bound:.1f}")
            elif isinstance(c, BoundedDistOracle):
                S, T = c.S, c.T
                if not S or not T:
                    continue
                ref = np.array([bfs(G.adj, s, c.h) for s in S], dtype=float)[:, T]
                if not np.array_equal(c.distances(), ref):
                    out.append(f"bounded channel (h={c.h}) disagrees with BFS")
        return out

    def rebuilds(self) -> tuple[int, list[float]]:
        count, secs = 0, []
        for c in _components(self.obj):
            if isinstance(c, BoundedDistOracle):
                count += c.rebuilds
                secs += c.sub.rebuild_seconds()
        return count, secs

    def recourse(self) -> tuple[Counter, int]:
        hist, degenerate = Counter(), 0
        for c in _components(self.obj):
            if isinstance(c, DynamicHittingSet):
                hist.update(c.recourse_hist)
                degenerate += c.degenerate
        return hist, degenerate


# ------------------------------------------------------------------ run

def _hist_ms(values_s: Iterable[float]) -> dict[str, int]:
    """Power-of-two millisecond buckets, keyed by upper edge."""
    h = Counter()
    for s in values_s:
        ms = s * 1e3
        edge = 1 if ms <= 1 else 2 ** math.ceil(math.log2(ms))
        h[f"<={edge}ms"] += 1
    return dict(sorted(h.items(), key=lambda kv: int(kv[0][2:-2])))


def run(cfg: RunConfig, return_instances: bool = False):
    """Replay ``cfg.stream``; return the report records (summary last).

    With ``return_instances`` the oracle instances come back too, as
    ``(records, instances)``.
    """
    stream = cfg.stream if isinstance(cfg.stream, UpdateStream) else load(cfg.stream)
    if cfg.eps <= 0:
        raise ConfigError("eps must be positive")
    audit = cfg.verify if cfg.audit is None else cfg.audit
    G = DynGraph(stream.n, directed=stream.directed)
    instances: dict[Query, Instance] = {}
    records: list[dict] = []
    update_secs: list[float] = []
    q_fail = a_fail = updates = queries = 0
    worst = 1.0
    t_all = time.perf_counter()
    for i, e in enumerate(stream.events):
        rec = {"schema": SCHEMA, "type": "event", "i": i, "seed": cfg.seed, "event": e.line()}
        t0 = time.perf_counter()
        if isinstance(e, Query):
            queries += 1
            inst = instances.get(e)
            if inst is None:
                inst = instances[e] = Instance(e, G, cfg)
            answer, extra = inst.answer()
            dt = time.perf_counter() - t0
            rec["answer"] = _nums(answer)
            rec.update(extra)
            if cfg.verify:
                D = bfs_all_pairs(G) if not G.directed else None
                info, ok = inst.check(answer, G, D)
                rec.update(info)
                worst = max(worst, info["ratio"])
                rec["pass"] = ok
                q_fail += not ok
        else:
            updates += 1
            op = "insert" if e.line()[0] == "+" else "delete"
            G.apply(op, e.u, e.v)
            for inst in instances.values():
                inst.update(op, e.u, e.v)
            dt = time.perf_counter() - t0
            update_secs.append(dt)
            if audit and instances:
                D = bfs_all_pairs(G) if not G.directed else None
                problems = [f"{inst.q.line()}: {p}" for inst in instances.values()
                            for p in inst.audit(G, D)]
                if problems:
                    rec["audit"] = problems
                    a_fail += len(problems)
                rec["pass"] = not problems
        if cfg.timings:
            rec["wall_ms"] = round(dt * 1e3, 3)
        records.append(rec)

    rebuilds, rebuild_secs = 0, []
    recourse, degenerate = Counter(), 0
    for inst in instances.values():
        c, s = inst.rebuilds()
        rebuilds += c
        rebuild_secs += s
        h, dg = inst.recourse()
        recourse.update(h)
        degenerate += dg
    summary = {
        "schema": SCHEMA, "type": "summary", "seed": cfg.seed,
        "n": stream.n, "directed": stream.directed,
        "events": len(stream.events), "updates": updates, "queries": queries,
        "verified": cfg.verify, "audited": bool(audit),
        "failures": q_fail + a_fail, "query_failures": q_fail, "audit_failures": a_fail,
        "max_ratio": round(worst, 9),
        "rebuild_spikes": rebuilds,
        "recourse_hist": {str(k): v for k, v in sorted(recourse.items())},
        "degenerate_hitting_sets": degenerate,
        "config": cfg.describe(),
    }
    if cfg.timings:
        summary["timing"] = {
            "total_ms": round((time.perf_counter() - t_all) * 1e3, 3),
            "update_hist": _hist_ms(update_secs),
            "rebuild_hist": _hist_ms(rebuild_secs),
        }
    records.append(summary)
    if return_instances:
        return records, list(instances.values())
    return records


def strip_timings(records: list[dict]) -> list[dict]:
    return [{k: v for k, v in r.items() if k not in TIMING_KEYS} for r in records]


def dumps(records: list[dict]) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)


def write_report(records: list[dict], fp: IO[str]) -> None:
    fp.write(dumps(records))


def read_report(fp: IO[str]) -> list[dict]:
    return [json.loads(line) for line in fp if line.strip()]


def summary(records: list[dict]) -> dict:
    return records[-1]
