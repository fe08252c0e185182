"""Dynamic near-additive emulators.

``E2``
    light edges (an endpoint of degree <= d, d = ceil(sqrt(n ln n))) at weight 1,
    plus an edge from every hitting-set node to every node within the hop
    bound ceil(2/eps) + 1, weighted by the exact distance.
``E4``
    light edges with d = ceil(n^(1/3) sqrt(ln n)), edges between hitting-set
    nodes within ceil(4/eps) + 2 hops, and one unit edge from every heavy node
    to its smallest-id hitting-set neighbour.
``SPARSE``
    an E4 emulator for eps/3, unfolded into unit paths and resparsified by
    ``static_near_additive`` after every update.

The hitting set supplies the set changes, and a ``BoundedDistOracle`` keeps
the bounded distances that become edge weights.
"""
from __future__ import annotations

import math
from typing import IO, Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as cs_dijkstra
from scipy.sparse.csgraph import shortest_path

from .bounded_dist import MAX_ALGEBRAIC_HOP, bounded_dist
from .errors import ConfigError
from .field_ring import FieldConfig
from .graph import INF, DynGraph, dijkstra
from .hitting_set import DynamicHittingSet, greedy_hitting_set

VARIANTS = ("E2", "E4", "SPARSE")


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def weighted_csr(n: int, edges: dict) -> csr_matrix:
    if not edges:
        return csr_matrix((n, n))
    uv = np.array(list(edges.keys()), dtype=np.int64)
    w = np.array(list(edges.values()), dtype=np.float64)
    rows = np.concatenate([uv[:, 0], uv[:, 1]])
    cols = np.concatenate([uv[:, 1], uv[:, 0]])
    return csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n))


def emulator_distances(n: int, edges: dict, sources=None, keep: int | None = None) -> np.ndarray:
    """Dijkstra on a weighted edge map; returns rows for ``sources``, first ``keep`` columns."""
    idx = list(range(keep if keep is not None else n)) if sources is None else list(sources)
    if not idx:
        return np.zeros((0, keep if keep is not None else n))
    D = cs_dijkstra(weighted_csr(n, edges), directed=False, indices=idx)
    return D if keep is None else D[:, :keep]


# ------------------------------------------------------------------ static emulator

def _level_bfs(adj, v: int, inA, need: int) -> dict[int, int]:
    """BFS from v, stopping after the level where ``need`` nodes of A are found."""
    dist = {v: 0}
    found = 1 if inA[v] else 0
    frontier = [v]
    level = 0
    while frontier and found < need:
        level += 1
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = level
                    nxt.append(y)
                    if inA[y]:
                        found += 1
        frontier = nxt
    return dist


def static_near_additive(adj: list, eps: float, k: int) -> dict[tuple[int, int], int]:
    """Static (1+eps, (1/eps)^k)-type emulator of an unweighted graph.

    Hierarchical clustering A_0 = V > A_1 > ... > A_k = {}: A_(i+1) is a greedy
    hitting set of the s-nearest balls (s = ceil(N^(1/k))) of the nodes in
    A_i.  Every v in A_i \\ A_(i+1) gets weighted edges to the nodes of A_i
    strictly closer than its nearest A_(i+1) node, and one to that node.
    The construction itself does not depend on eps.
    """
    if k < 1:
        raise ConfigError("k must be positive")
    N = len(adj)
    edges: dict[tuple[int, int], int] = {}
    if N <= 4:
        for u in range(N):
            for v in adj[u]:
                if u < v:
                    edges[(u, v)] = 1
        return edges
    s = max(2, math.ceil(N ** (1.0 / k)))
    A = list(range(N))
    for i in range(k):
        inA = np.zeros(N, dtype=bool)
        inA[A] = True
        if i == k - 1 or not A:
            _connect_all(adj, A, edges)
            break
        explored = {v: _level_bfs(adj, v, inA, s) for v in A}
        balls = {}
        for v, dist in explored.items():
            members = sorted((d, x) for x, d in dist.items() if inA[x])
            if len(members) >= s:
                balls[v] = [x for _, x in members[:s]]
        nxt = sorted(greedy_hitting_set(balls))
        inN = np.zeros(N, dtype=bool)
        inN[nxt] = True
        for v in A:
            if inN[v]:
                continue
            dist = explored[v]
            hit = [(d, x) for x, d in dist.items() if inN[x]]
            if hit:
                r, p = min(hit)
                _add(edges, v, p, r)
            else:
                r = INF
            for x, d in dist.items():
                if inA[x] and d < r and x != v:
                    _add(edges, v, x, d)
        A = nxt
    return edges


def _add(edges, u, v, w):
    key = _key(u, v)
    old = edges.get(key)
    if old is None or w < old:
        edges[key] = w


def _connect_all(adj, A: list[int], edges) -> None:
    # last level: all pairs of A within the same component
    if len(A) < 2:
        return
    N = len(adj)
    rows = [u for u in range(N) for _ in adj[u]]
    cols = [v for u in range(N) for v in adj[u]]
    G = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(N, N))
    Aa = np.asarray(A)
    for lo in range(0, len(A), 256):
        D = shortest_path(G, method="D", unweighted=True, directed=False, indices=Aa[lo : lo + 256])
        sub = D[:, Aa]
        for a, b in zip(*np.nonzero(np.isfinite(sub))):
            u, v = int(Aa[lo + a]), int(Aa[b])
            if u != v:
                _add(edges, u, v, int(sub[a, b]))


def unfold(n: int, edges: dict) -> tuple[list[set[int]], int]:
    """Replace each weight-w edge by a unit path through w-1 fresh nodes."""
    extra = sum(int(w) - 1 for w in edges.values())
    adj: list[set[int]] = [set() for _ in range(n + extra)]
    nxt = n
    for (u, v), w in sorted(edges.items()):
        prev = u
        for _ in range(int(w) - 1):
            adj[prev].add(nxt)
            adj[nxt].add(prev)
            prev = nxt
            nxt += 1
        adj[prev].add(v)
        adj[v].add(prev)
    return adj, n + extra


# ------------------------------------------------------------------ dynamic

class Emulator:
    """Dynamic emulator of an undirected unweighted graph."""

    def __init__(self, n: int, variant: str = "E2", eps: float = 0.5, edges: Iterable = (),
                 field: FieldConfig | None = None, k: int = 2, c_H: float = 6.0,
                 rebuild_every: int = 1, salt: int = 0, backend: str = "auto",
                 max_algebraic_hop: int = MAX_ALGEBRAIC_HOP, cap_inner: int | None = None):
        if variant not in VARIANTS:
            raise ConfigError(f"unknown emulator variant {variant!r}")
        if not 0 < eps:
            raise ConfigError("eps must be positive")
        self.n = n
        self.variant = variant
        self.eps = eps
        self.k = k
        self.c_H = c_H
        self.field = field or FieldConfig()
        self.G = DynGraph(n, edges)
        self.updates = 0
        self.stale = False
        if variant == "SPARSE":
            self.eps_inner = eps / 3
            self.beta = math.ceil((1 / self.eps_inner) ** k)
            self.base = Emulator(n, "E4", self.eps_inner, self.G.edges(), self.field, c_H=c_H,
                                salt=salt, backend=backend, max_algebraic_hop=max_algebraic_hop,
                                cap_inner=cap_inner)
            self.G = self.base.G
            self.rebuild_every = max(1, rebuild_every)
            self._resparsify()
            return
        logn = math.log(max(n, 2))
        if variant == "E2":
            self.d = max(1, math.ceil(math.sqrt(n * logn)))
            hop = math.ceil(2 / eps) + 1
        else:
            self.d = max(1, math.ceil(n ** (1 / 3) * math.sqrt(logn)))
            hop = math.ceil(4 / eps) + 2
        # a shortest path never has more than n-1 edges
        self.hop = max(1, min(hop, n - 1))
        self.hs = DynamicHittingSet(self.G, self.d)
        A = sorted(self.hs.A)
        T = range(n) if variant == "E2" else A
        self.bd = bounded_dist(n, self.hop, A, T, self.G.edges(), field=self.field,
                               backend=backend, max_algebraic_hop=max_algebraic_hop,
                               cap_outer=n, cap_inner=cap_inner, salt=salt)
        self.light: set[tuple[int, int]] = set()
        for u, v in self.G.edges():
            self._classify(u, v)
        self._refresh()

    # -- edge sets
    def _classify(self, u: int, v: int) -> None:
        key = _key(u, v)
        if self.G.has_edge(u, v) and (self.G.degree(u) <= self.d or self.G.degree(v) <= self.d):
            self.light.add(key)
        else:
            self.light.discard(key)

    def _touch(self, x: int) -> None:
        for y in self.G.adj[x]:
            self._classify(x, y)

    def _refresh(self) -> None:
        edges = {e: 1 for e in self.light}
        D = self.bd.distances()
        S = self.bd.S
        T = self.bd.T
        for a, row in zip(S, D):
            for b in np.flatnonzero(np.isfinite(row)):
                x = T[b]
                if x != a:
                    _add(edges, a, x, int(row[b]))
        if self.variant == "E4":
            A = self.hs.A
            for v in range(self.n):
                if self.G.degree(v) >= self.d:
                    nb = self.G.adj[v] & A
                    if nb:
                        _add(edges, v, min(nb), 1)
        self.edges = edges

    # -- updates
    def update(self, op: str, u: int, v: int) -> None:
        self.updates += 1
        if self.variant == "SPARSE":
            self.base.update(op, u, v)
            if self.updates % self.rebuild_every == 0:
                self._resparsify()
            else:
                self.stale = True
            return
        changes = self.hs.update(op, u, v)  # mutates the shared graph
        self.bd.update(op, u, v)
        sides = ("S",) if self.variant == "E2" else ("S", "T")
        for kind, x in changes:
            for side in sides:
                self.bd.set_update(side, "add" if kind == "add" else "remove", x)
        self._classify(u, v)
        self._touch(u)
        self._touch(v)
        self._refresh()

    def _resparsify(self) -> None:
        adj, N = unfold(self.n, self.base.edges)
        self.N = N
        self.edges = static_near_additive(adj, self.eps_inner, self.k)
        self.stale = False

    # -- queries
    @property
    def hitting_set(self) -> set[int]:
        return self.base.hs.A if self.variant == "SPARSE" else self.hs.A

    @property
    def num_nodes(self) -> int:
        return self.N if self.variant == "SPARSE" else self.n

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def size_bound(self) -> float:
        n = self.n
        logn = math.log(max(n, 2))
        if self.variant == "E2":
            return self.c_H * n ** 1.5 * math.sqrt(logn)
        if self.variant == "E4":
            return self.c_H * n ** (4 / 3) * math.sqrt(logn)
        return self.c_H * n ** (1 + 1 / self.k) * logn

    @property
    def additive(self) -> float:
        if self.variant == "E2":
            return 2
        if self.variant == "E4":
            return 4
        return self.beta

    def adjacency(self) -> list[dict[int, int]]:
        adj: list[dict[int, int]] = [dict() for _ in range(self.num_nodes)]
        for (u, v), w in self.edges.items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def distances_from(self, s: int) -> list[float]:
        return dijkstra(self.adjacency(), s)[: self.n]

    def all_pairs(self, sources=None) -> np.ndarray:
        """Emulator distances between original nodes (rows: sources)."""
        return emulator_distances(self.num_nodes, self.edges, sources, keep=self.n)

    def dump(self, fp: IO[str]) -> None:
        """One line per edge: ``u v weight``."""
        for (u, v), w in sorted(self.edges.items()):
            fp.write(f"{u} {v} {w}\n")


def load_dump(fp: IO[str]) -> dict[tuple[int, int], int]:
    edges = {}
    for line in fp:
        line = line.strip()
        if line:
            u, v, w = line.split()
            edges[_key(int(u), int(v))] = int(w)
    return edges


def check_distances(D_G: np.ndarray, D_H: np.ndarray, eps: float, beta: float) -> int:
    """Number of pairs violating d_G <= d_H <= (1+eps) d_G + beta."""
    fin = np.isfinite(D_G)
    bad = int(np.sum(~fin & np.isfinite(D_H)))
    g, h = D_G[fin], D_H[fin]
    bad += int(np.sum(h < g))
    bad += int(np.sum(h > (1 + eps) * g + beta + 1e-9))
    return bad


def bfs_all_pairs(G: DynGraph) -> np.ndarray:
    return shortest_path(weighted_csr(G.n, {e: 1 for e in G.edges()}), method="D",
                         unweighted=True, directed=False)
