"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL`` line (also collected in the
terminal summary).  Every size, seed, tolerance and time budget is pinned
below.
"""
import math
import random
import time

import numpy as np
import pytest

from dyndist.bounded_dist import BoundedDistOracle
from dyndist.dyn_inverse import SubmatrixInverse
from dyndist.emulator import Emulator, bfs_all_pairs, check_distances
from dyndist.errors import Singular
from dyndist.extras import ApspDistanceOracle
from dyndist.field_ring import FieldConfig, Ring
from dyndist.graph import DynGraph, bfs
from dyndist.harness.bench import bench
from dyndist.harness.generators import gen_stream
from dyndist.harness.runner import RunConfig, run
from dyndist.harness.stream import Delete, Insert, Query, UpdateStream
from dyndist.hitting_set import DynamicHittingSet
from dyndist.matrix import mat_inv_field

TOL = 1e-9  # float slack on (1+eps) products; answers themselves are integers

C1_SIZES, C1_UPDATES, C1_SET_FRACTION, C1_BUDGET_S = (16, 32, 64), 1000, 0.3, 60.0
C2_GRID = [(n, h) for n in (40, 60) for h in (4, 6, 8)]
C2_UPDATES, C2_SEEDS, C2_BUDGET_S = 300, 10, 120.0
C3_N, C3_D, C3_UPDATES, C3_RMAX, C3_CSIZE = 400, 20, 5000, 12, 8.0
C4_SIZES, C4_EPS, C4_UPDATES, C4_BUDGET_S, C4_CH = (80, 120), (0.25, 0.5, 1.0), 200, 600.0, 6.0
C4_ADDITIVE = {"E2": 2, "E4": 4}
C5_N, C5_K, C5_EPS, C5_UPDATES = 150, 2, 0.5, 100
C6_EPS = 0.5
C7_N, C7_H, C7_UPDATES, C7_SEEDS = 100, 5, 200, 10
C8_N, C8_EPS, C8_SEEDS, C8_UPDATES = 60, 0.25, 20, 15
C9_N, C9_EPS, C9_UPDATES, C9_PAIRS = 100, 0.5, 100, 50
C10_N, C10_UPDATES = 2000, 20


def _op(e):
    return "insert" if isinstance(e, Insert) else "delete"


def churn_stream(n, base, protected, updates, seed, query=None):
    """Initial edges ``base`` then random toggles that never touch ``protected``."""
    rng = random.Random(f"churn/{n}/{seed}")
    s = UpdateStream(n)
    present = set()
    for u, v in base:
        key = (min(u, v), max(u, v))
        if key not in present:
            present.add(key)
            s.events.append(Insert(*key))
    protected = {(min(u, v), max(u, v)) for u, v in protected}
    q = Query(*query) if query else None
    done = 0
    while done < updates:
        u, v = sorted(rng.sample(range(n), 2))
        if (u, v) in protected:
            continue
        if (u, v) in present:
            present.discard((u, v))
            s.events.append(Delete(u, v))
        else:
            present.add((u, v))
            s.events.append(Insert(u, v))
        done += 1
        if q:
            s.events.append(q)
    return s


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def random_tree(n, seed):
    rng = random.Random(f"tree/{n}/{seed}")
    return [(rng.randrange(v), v) for v in range(1, n)]


# ---------------------------------------------------------------- 1

def _c1_run(n, seed):
    rng = random.Random(seed)
    q = FieldConfig(seed=seed, copies=1).moduli(n, 1)[0]
    ring = Ring([q], 1)
    npr = np.random.default_rng(seed)
    while True:
        M = ring.from_ints(npr.integers(0, q, (n, n)))
        try:
            ref = mat_inv_field(ring, M)
            break
        except Singular:
            pass
    k = math.ceil(n / 4)
    sub = SubmatrixInverse(ring, M, rng.sample(range(n), k), rng.sample(range(n), k))
    cur = M
    bad = 0
    for _ in range(C1_UPDATES):
        if rng.random() < C1_SET_FRACTION:
            side = rng.choice("ST")
            members = sub.S if side == "S" else sub.T
            out = rng.choice(members.tolist())
            new = rng.choice([x for x in range(n) if x not in members])
            sub.set_update(side, "remove", out)
            sub.set_update(side, "add", new)
        else:
            while True:
                i, j, c = rng.randrange(n), rng.randrange(n), rng.randrange(1, q)
                cand = cur.copy()
                cand[0, i, j, 0] = (cand[0, i, j, 0] + c) % q
                try:
                    ref = mat_inv_field(ring, cand)
                    break
                except Singular:
                    continue
            delta = ring.zeros()
            delta[0, 0] = c
            sub.update(i, j, delta)
            cur = cand
        assert len(sub.S) == len(sub.T) == k
        bad += int(np.sum(sub.block() != ref[:, sub.S.tolist()][:, :, sub.T.tolist()]))
    return bad


def test_c1_dynamic_inverse(record):
    t0 = time.perf_counter()
    bad = sum(_c1_run(n, seed=n) for n in C1_SIZES)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < C1_BUDGET_S
    record(1, ok, f"mismatches={bad} time={dt:.1f}s budget={C1_BUDGET_S:.0f}s")
    assert ok


# ---------------------------------------------------------------- 2

def _c2_run(n, h, mode, seed):
    rng = random.Random(seed)
    G = DynGraph(n)
    while G.m < n:
        u, v = rng.sample(range(n), 2)
        if not G.has_edge(u, v):
            G.insert(u, v)
    k = math.ceil(n / 4)
    bd = BoundedDistOracle(n, h, rng.sample(range(n), k), rng.sample(range(n), k), G.edges(),
                           field=FieldConfig(mode=mode, seed=seed))
    bad = 0
    for _ in range(C2_UPDATES):
        if rng.random() < 0.15:
            side = rng.choice("ST")
            members = bd.S if side == "S" else bd.T
            x = rng.randrange(n)
            if x in members:
                bd.set_update(side, "remove", x)
            elif len(members) < bd.sub.cap_outer:
                bd.set_update(side, "add", x)
        else:
            u, v = rng.sample(range(n), 2)
            op = "delete" if G.has_edge(u, v) else "insert"
            G.apply(op, u, v)
            bd.update(op, u, v)
        D = bd.distances()
        rows = (bfs(G.adj, s, h) for s in bd.S)
        ref = np.array([[row[t] for t in bd.T] for row in rows], dtype=float).reshape(D.shape)
        bad += int(np.sum(D != ref))
    return bad


def test_c2_bounded_distances(record):
    t0 = time.perf_counter()
    det = sum(_c2_run(n, h, "deterministic", 1) for n, h in C2_GRID)
    rnd = sum(_c2_run(*C2_GRID[s % len(C2_GRID)], "randomized", s) for s in range(C2_SEEDS))
    dt = time.perf_counter() - t0
    ok = det == 0 and rnd == 0 and dt < C2_BUDGET_S
    record(2, ok, f"deterministic mismatches={det} randomized mismatches={rnd} "
                  f"time={dt:.1f}s budget={C2_BUDGET_S:.0f}s")
    assert ok


# ---------------------------------------------------------------- 3

def _c3_run(kind, seed):
    initial = C3_N * C3_D // 2
    stream = gen_stream(kind, C3_N, initial + C3_UPDATES, seed, d=C3_D,
                        density=C3_D / 2 if kind == "random" else 4.0)
    events = stream.updates()
    G = DynGraph(C3_N)
    # the leading block builds the starting graph
    start = next(i for i, e in enumerate(events) if isinstance(e, Delete))
    start = min(start, len(events) - C3_UPDATES)
    for e in events[:start]:
        G.insert(e.u, e.v)
    hs = DynamicHittingSet(G, C3_D, c_size=C3_CSIZE, r_max=C3_RMAX)
    viol = max_rec = 0
    for e in events[start:start + C3_UPDATES]:
        changes = hs.update(_op(e), e.u, e.v)
        max_rec = max(max_rec, len(changes))
        viol += bool(hs.coverage_violations()) + (len(hs.A) > hs.size_bound) + \
            (len(changes) > C3_RMAX)
    return viol, max_rec, hs.max_size, hs.phases, len(events[start:start + C3_UPDATES])


def test_c3_hitting_set(record):
    rows = {kind: _c3_run(kind, 1) for kind in ("random", "adversarial-degree")}
    ok = all(r[0] == 0 and r[4] == C3_UPDATES for r in rows.values())
    bound = C3_CSIZE * (C3_N / C3_D) * math.log(C3_N + 2)
    detail = " ".join(f"{k}:violations={r[0]},max_recourse={r[1]},max_size={r[2]},phases={r[3]}"
                      for k, r in rows.items())
    record(3, ok, f"{detail} size_bound={bound:.0f}")
    assert ok


# ---------------------------------------------------------------- 4

def _dense_random(n, m, seed):
    rng = random.Random(seed)
    edges = set()
    while len(edges) < m:
        u, v = sorted(rng.sample(range(n), 2))
        edges.add((u, v))
    return sorted(edges)


def _c4_run(n, variant, eps, seed):
    logn = math.log(n)
    d = math.ceil(math.sqrt(n * logn)) if variant == "E2" else math.ceil(n ** (1 / 3) * math.sqrt(logn))
    E = Emulator(n, variant, eps, _dense_random(n, int(0.55 * n * d), seed), FieldConfig(seed=seed),
                 c_H=C4_CH)
    rng = random.Random(seed + 1)
    bad = big = 0
    for _ in range(C4_UPDATES):
        u, v = rng.sample(range(n), 2)
        E.update("delete" if E.G.has_edge(u, v) else "insert", u, v)
        bad += check_distances(bfs_all_pairs(E.G), E.all_pairs(), eps, C4_ADDITIVE[variant])
        big += E.size > E.size_bound
    return bad, big, len(E.hitting_set)


def test_c4_emulators(record):
    t0 = time.perf_counter()
    bad = big = 0
    heavy = []
    for n in C4_SIZES:
        for variant in ("E2", "E4"):
            for eps in C4_EPS:
                b, s, a = _c4_run(n, variant, eps, seed=n)
                bad += b
                big += s
                heavy.append(a)
    dt = time.perf_counter() - t0
    ok = bad == 0 and big == 0 and dt < C4_BUDGET_S
    record(4, ok, f"stretch violations={bad} size violations={big} min|A|={min(heavy)} "
                  f"time={dt:.0f}s budget={C4_BUDGET_S:.0f}s")
    assert ok


# ---------------------------------------------------------------- 5

def test_c5_sparse_emulator(record):
    n = C5_N
    d = math.ceil(n ** (1 / 3) * math.sqrt(math.log(n)))
    E = Emulator(n, "SPARSE", C5_EPS, _dense_random(n, int(0.55 * n * d), 5), FieldConfig(seed=5),
                 k=C5_K)
    additive = math.ceil((3 / C5_EPS) ** 2)
    size_bound = 6 * n ** 1.5 * math.log(n)
    rng = random.Random(6)
    bad = big = 0
    worst = 0
    for _ in range(C5_UPDATES):
        u, v = rng.sample(range(n), 2)
        E.update("delete" if E.G.has_edge(u, v) else "insert", u, v)
        bad += check_distances(bfs_all_pairs(E.G), E.all_pairs(), C5_EPS, additive)
        big += E.size > size_bound
        worst = max(worst, E.size)
    ok = bad == 0 and big == 0
    record(5, ok, f"stretch violations={bad} (additive {additive}) size violations={big} "
                  f"max size={worst} bound={size_bound:.0f}")
    assert ok


# ---------------------------------------------------------------- 6

def lollipop(n, clique, updates, seed, query):
    """Path 0..n-1 with a clique on 0..clique-1 (heavy nodes); chords churn."""
    base = path_edges(n) + [(u, v) for u in range(clique) for v in range(u + 1, clique)]
    return churn_stream(n, base, path_edges(n), updates, seed, query)


C6_CASES = [
    ("st", 120, 200, ("st", (0, 119))),
    ("sssp", 120, 200, ("sssp", (0,))),
    ("mssp", 100, 100, ("mssp", (0, 5, 17, 33, 50, 61, 70, 82, 90, 99))),
    ("apsp", 100, 100, ("apsp", ())),
]


def test_c6_oracles(record):
    lines, ok = [], True
    for name, n, updates, query in C6_CASES:
        s = lollipop(n, 30, updates, seed=6, query=query)
        rep = run(RunConfig(stream=s, verify=True, audit=False, eps=C6_EPS, seed=6))[-1]
        good = rep["failures"] == 0 and rep["queries"] == updates
        ok &= good
        lines.append(f"{name}:n={n},queries={rep['queries']},failures={rep['failures']},"
                     f"max_ratio={rep['max_ratio']:.3f}")
    record(6, ok, " ".join(lines))
    assert ok


# ---------------------------------------------------------------- 7

def test_c7_exact_st(record):
    fails = queries = 0
    for seed in range(C7_SEEDS):
        tree = random_tree(C7_N, seed)
        s = churn_stream(C7_N, tree, (), C7_UPDATES, seed, ("xst", (0, C7_N - 1)))
        rep = run(RunConfig(stream=s, verify=True, audit=False, seed=seed, xst_h=C7_H))[-1]
        fails += rep["failures"]
        queries += rep["queries"]
    ok = fails == 0 and queries == C7_SEEDS * C7_UPDATES
    record(7, ok, f"ticks={queries} mismatches={fails} (n={C7_N}, h={C7_H}, seeds={C7_SEEDS})")
    assert ok


# ---------------------------------------------------------------- 8

def _c8_streams(seed):
    n = C8_N
    cycle = path_edges(n) + [(0, n - 1)]
    tree = random_tree(n, seed)
    extra = _dense_random(n, n // 2, seed)
    q = ("diam", ())
    return {
        "path": churn_stream(n, path_edges(n), path_edges(n), C8_UPDATES, seed, q),
        "cycle": churn_stream(n, cycle, cycle, C8_UPDATES, seed, q),
        "random": churn_stream(n, tree + extra, tree, C8_UPDATES, seed, q),
    }


def test_c8_diameter(record):
    fails = {"path": 0, "cycle": 0, "random": 0}
    ticks = 0
    for seed in range(C8_SEEDS):
        for name, s in _c8_streams(seed).items():
            rep = run(RunConfig(stream=s, verify=True, audit=False, seed=seed, eps=C8_EPS))[-1]
            fails[name] += rep["failures"]
            ticks += rep["queries"]
    ok = sum(fails.values()) == 0
    record(8, ok, f"ticks={ticks} failures={fails} (n={C8_N}, eps={C8_EPS}, seeds={C8_SEEDS})")
    assert ok


# ---------------------------------------------------------------- 9

def test_c9_apsp_oracle(record):
    n = C9_N
    s = lollipop(n, 25, C9_UPDATES, seed=9, query=None)
    events = s.updates()
    start = len(events) - C9_UPDATES
    G = DynGraph(n, [(e.u, e.v) for e in events[:start]])
    o = ApspDistanceOracle(n, G.edges(), C9_EPS, seed=9)
    rng = random.Random(9)
    bad = asked = 0
    worst = 1.0
    for e in events[start:]:
        o.update(_op(e), e.u, e.v)
        G.apply(_op(e), e.u, e.v)
        D = bfs_all_pairs(G)
        for _ in range(C9_PAIRS):
            u, v = rng.sample(range(n), 2)
            got, want = o.query(u, v), D[u, v]
            asked += 1
            if math.isinf(want):
                bad += not math.isinf(got)
                continue
            bad += not (want <= got <= (1 + C9_EPS) * want + TOL)
            worst = max(worst, got / want)
    ok = bad == 0 and asked == C9_UPDATES * C9_PAIRS
    record(9, ok, f"queries={asked} violations={bad} max_ratio={worst:.3f} (h={o.h}, "
                  f"|S|={len(o.S)})")
    assert ok


# ---------------------------------------------------------------- 10

def test_c10_bench_report_only(record):
    recs = bench([C10_N], updates=C10_UPDATES, copies=1)
    t = recs[0]["timing"]
    record(10, True, f"reported only: n={C10_N} init={t['init_ms'] / 1e3:.1f}s "
                     f"oracle median={t['oracle_ms']['median']:.1f}ms "
                     f"bfs median={t['bfs_ms']['median']:.2f}ms "
                     f"crossover={recs[-1]['crossover_n']} spikes={t['spikes']} "
                     f"update_hist={t['update_hist']} rebuild_hist={t['rebuild_hist']}")
