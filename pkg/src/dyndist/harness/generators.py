"""Seeded update-stream generators.

Every stream starts with a block of inserts that builds the initial graph,
followed by churn.  ``length`` counts all update events, so length 0 gives
an empty stream.  With ``query`` set, a query event follows every
``query_every``-th churn update.
"""
from __future__ import annotations

import math
import random

from ..errors import ConfigError
from .stream import Delete, Insert, Query, UpdateStream, parse_event

KINDS = ("random", "path-churn", "star-churn", "adversarial-degree")


class _Builder:
    def __init__(self, n: int, length: int, directed: bool):
        self.stream = UpdateStream(n, directed)
        self.length = length
        self.edges: set[tuple[int, int]] = set()
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.directed = directed
        self.updates = 0

    def key(self, u, v):
        return (u, v) if self.directed or u < v else (v, u)

    def full(self) -> bool:
        return self.updates >= self.length

    def has(self, u, v) -> bool:
        return self.key(u, v) in self.edges

    def insert(self, u, v) -> bool:
        if self.full() or u == v or self.has(u, v):
            return False
        self.edges.add(self.key(u, v))
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.stream.events.append(Insert(u, v))
        self.updates += 1
        return True

    def delete(self, u, v) -> bool:
        if self.full() or not self.has(u, v):
            return False
        self.edges.discard(self.key(u, v))
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.stream.events.append(Delete(*self.key(u, v)))
        self.updates += 1
        return True

    def toggle(self, u, v) -> bool:
        return self.delete(u, v) if self.has(u, v) else self.insert(u, v)


def default_degree(n: int) -> int:
    return max(1, math.ceil(math.sqrt(n * math.log(max(n, 2)))))


def gen_stream(kind: str, n: int, length: int, seed: int = 0, *, directed: bool = False,
               density: float = 2.0, d: int | None = None, query: str | None = None,
               query_every: int = 1) -> UpdateStream:
    """Generate a valid stream of ``length`` updates on n nodes."""
    if kind not in KINDS:
        raise ConfigError(f"unknown stream kind {kind!r}; choose from {', '.join(KINDS)}")
    if n < 2 and length > 0:
        raise ConfigError("need at least two nodes for edge updates")
    rng = random.Random(f"{kind}/{n}/{length}/{seed}")
    b = _Builder(n, length, directed)
    q = parse_event(f"? {query}", 0) if query else None
    churn = 0

    def after_churn():
        nonlocal churn
        churn += 1
        if q is not None and churn % query_every == 0:
            b.stream.events.append(q)

    if kind == "random":
        target = min(int(density * n), n * (n - 1) // 2)
        while not b.full() and len(b.edges) < target:
            b.insert(*rng.sample(range(n), 2))
        while not b.full():
            if b.edges and rng.random() < 0.5:
                u, v = rng.choice(sorted(b.edges))
                b.delete(u, v)
            else:
                u, v = rng.sample(range(n), 2)
                if not b.insert(u, v):
                    continue
            after_churn()
    elif kind == "path-churn":
        for i in range(n - 1):
            b.insert(i, i + 1)
        chords: list[tuple[int, int]] = []
        while not b.full():
            if n < 3:
                # no room for chords: flip the only edge
                b.toggle(0, 1)
            elif chords and (len(chords) >= max(1, n // 10) or rng.random() < 0.5):
                u, v = chords.pop(rng.randrange(len(chords)))
                b.delete(u, v)
            else:
                u, v = sorted(rng.sample(range(n), 2))
                if v - u < 2 or not b.insert(u, v):
                    continue
                chords.append((u, v))
            after_churn()
    elif kind == "star-churn":
        for i in range(1, n):
            b.insert(0, i)
        while not b.full():
            if rng.random() < 0.5:
                b.toggle(0, rng.randrange(1, n))
            elif n > 2:
                u, v = rng.sample(range(1, n), 2)
                b.toggle(u, v)
            else:
                continue
            after_churn()
    else:
        d = d or default_degree(n)
        hubs = list(range(min(n, max(1, n // max(d, 1)))))
        base = min(int(density * n), n * (n - 1) // 4)
        while not b.full() and len(b.edges) < base:
            u, v = rng.sample(range(len(hubs), n), 2) if n - len(hubs) >= 2 else rng.sample(range(n), 2)
            b.insert(u, v)
        for h in hubs:
            while not b.full() and len(b.adj[h]) < d - 1 and len(b.adj[h]) < n - 1:
                b.insert(h, rng.randrange(n))
        i = 0
        while not b.full():
            h = hubs[i % len(hubs)]
            i += 1
            cand = [x for x in range(n) if x != h and x not in b.adj[h]]
            if len(b.adj[h]) >= d or not cand:
                # drop the smallest-id neighbour, changing the first-d list
                ok = b.delete(h, min(b.adj[h]))
            else:
                ok = b.insert(h, rng.choice(cand))
            if ok:
                after_churn()
    return b.stream


def transition_indices(stream: UpdateStream, d: int) -> list[int]:
    """Update positions where some endpoint crosses the degree threshold d."""
    deg = [0] * stream.n
    out = []
    for i, e in enumerate(stream.updates()):
        step = 1 if isinstance(e, Insert) else -1
        crossed = False
        for x in (e.u, e.v):
            before = deg[x] >= d
            deg[x] += step
            crossed |= before != (deg[x] >= d)
        if crossed:
            out.append(i)
    return out


def heavy_transitions(stream: UpdateStream, d: int) -> int:
    """Number of updates where some endpoint crosses the degree threshold d."""
    return len(transition_indices(stream, d))


__all__ = ["KINDS", "gen_stream", "default_degree", "heavy_transitions", "transition_indices", "Query", "Delete", "Insert"]
