"""Adjacency-set graphs plus BFS and Dijkstra."""
from __future__ import annotations

import heapq
import math
from collections import deque
from typing import Iterable

from .errors import GraphError

INF = math.inf


class DynGraph:
    """Simple graph on nodes 0..n-1 under edge insertions and deletions."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), directed: bool = False):
        self.n = n
        self.directed = directed
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        for u, v in edges:
            self.insert(u, v)

    def _check(self, u: int, v: int):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) outside [0, {self.n})")
        if u == v:
            raise GraphError(f"self-loop at {u}")

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def insert(self, u: int, v: int) -> None:
        self._check(u, v)
        if v in self.adj[u]:
            raise GraphError(f"edge ({u}, {v}) already present")
        self.adj[u].add(v)
        if not self.directed:
            self.adj[v].add(u)
        self.m += 1

    def delete(self, u: int, v: int) -> None:
        self._check(u, v)
        if v not in self.adj[u]:
            raise GraphError(f"edge ({u}, {v}) not present")
        self.adj[u].discard(v)
        if not self.directed:
            self.adj[v].discard(u)
        self.m -= 1

    def apply(self, op: str, u: int, v: int) -> None:
        if op in ("insert", "+"):
            self.insert(u, v)
        elif op in ("delete", "-"):
            self.delete(u, v)
        else:
            raise GraphError(f"unknown edge operation {op!r}")

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def first_neighbors(self, u: int, d: int) -> list[int]:
        """The d smallest-id neighbours of u."""
        nb = self.adj[u]
        if len(nb) <= d:
            return sorted(nb)
        return heapq.nsmallest(d, nb)

    def edges(self) -> list[tuple[int, int]]:
        if self.directed:
            return [(u, v) for u in range(self.n) for v in sorted(self.adj[u])]
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def copy(self) -> "DynGraph":
        g = DynGraph(self.n, directed=self.directed)
        g.adj = [set(a) for a in self.adj]
        g.m = self.m
        return g


def bfs(adj, source: int, hop_cap: int | None = None) -> list[float]:
    n = len(adj)
    dist = [INF] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if hop_cap is not None and du >= hop_cap:
            continue
        for w in adj[u]:
            if dist[w] == INF:
                dist[w] = du + 1
                queue.append(w)
    return dist


def dijkstra(wadj, source: int) -> list[float]:
    """Single-source distances on a weighted adjacency list of dicts."""
    dist = [INF] * len(wadj)
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for w, wt in wadj[u].items():
            nd = du + wt
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist
