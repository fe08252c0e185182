"""Brute-force references: BFS, Floyd-Warshall and exact diameters."""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import floyd_warshall as cs_floyd_warshall

from ..graph import DynGraph, bfs


def _adj(G):
    return G.adj if isinstance(G, DynGraph) else G


def oracle_bfs(G, sources, hop_cap: int | None = None) -> list[list[float]]:
    """Per-source BFS distances, infinite beyond ``hop_cap``."""
    adj = _adj(G)
    if isinstance(sources, int):
        sources = [sources]
    return [bfs(adj, s, hop_cap) for s in sources]


def _csr(G) -> csr_matrix:
    adj = _adj(G)
    n = len(adj)
    rows = [u for u in range(n) for _ in adj[u]]
    cols = [v for u in range(n) for v in adj[u]]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def floyd_warshall(G) -> np.ndarray:
    directed = isinstance(G, DynGraph) and G.directed
    return cs_floyd_warshall(_csr(G), directed=directed, unweighted=True)


def exact_diameter(G) -> float:
    """Largest pairwise distance; infinite when the graph is disconnected."""
    n = len(_adj(G))
    if n <= 1:
        return 0
    return float(floyd_warshall(G).max())
