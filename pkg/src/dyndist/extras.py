"""Randomized add-ons: exact st distances, diameter estimates, an APSP oracle.

All three use a single seeded ``random.Random`` so runs replay exactly.
Batch queries on sets chosen at query time go through the bounded-distance
channel's ``query(rows, cols)``.
"""
from __future__ import annotations

import math
import random
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as cs_dijkstra

from .bounded_dist import MAX_ALGEBRAIC_HOP, bounded_dist
from .emulator import Emulator
from .errors import ConfigError
from .field_ring import FieldConfig
from .graph import INF, DynGraph
from .oracles import mssp_k


class ExactSt:
    """Exact st distance via a random hitting set H containing s and t.

    H x H distances up to h hops are maintained; Dijkstra on the weighted
    graph they define gives d(s, t) whenever every h-segment of some
    shortest path contains a node of H.
    """

    def __init__(self, n: int, s: int, t: int, h: int, edges: Iterable = (), directed: bool = False,
                 seed: int = 0, c: float = 2.0, field: FieldConfig | None = None,
                 backend: str = "auto", max_algebraic_hop: int = MAX_ALGEBRAIC_HOP,
                 cap_inner: int | None = None):
        if h < 1:
            raise ConfigError("h must be positive")
        self.n, self.s, self.t, self.h = n, s, t, h
        self.rng = random.Random(seed)
        self.seed = seed
        size = min(n, math.ceil(c * (n / h) * math.log(max(n, 2))))
        H = set(self.rng.sample(range(n), size)) | {s, t}
        self.H = sorted(H)
        self.G = DynGraph(n, edges, directed)
        self.channel = bounded_dist(n, h, self.H, self.H, self.G.edges(), directed,
                                    field=field or FieldConfig(seed=seed), backend=backend,
                                    max_algebraic_hop=max_algebraic_hop, cap_outer=n,
                                    cap_inner=cap_inner)

    def update(self, op: str, u: int, v: int) -> float:
        self.G.apply(op, u, v)
        self.channel.update(op, u, v)
        return self.query()

    def query(self) -> float:
        if self.s == self.t:
            return 0
        D = self.channel.distances()
        W = np.where(np.isfinite(D), D, 0)
        np.fill_diagonal(W, 0)
        dist = cs_dijkstra(csr_matrix(W), directed=True, indices=self.H.index(self.s))
        d = dist[self.H.index(self.t)]
        return INF if not np.isfinite(d) else int(d)


def _min_channels(channel, emulator: Emulator, rows: list[int]) -> np.ndarray:
    return np.minimum(channel.query(rows, None), emulator.all_pairs(rows))


class Diameter:
    """Diameter estimate with (2/3 - eps) D - 1/3 <= D_hat <= (1 + eps) D.

    Each update resamples S, finds the node w farthest from S, takes the
    ceil(sqrt(n)) nodes W closest to w, and reports the largest estimate from
    S and W.  Estimates are min(bounded channel, SPARSE emulator).
    """

    def __init__(self, n: int, edges: Iterable = (), eps: float = 0.25, seed: int = 0,
                 k: int | None = None, fixed_sample: bool = False, field: FieldConfig | None = None,
                 backend: str = "auto", max_algebraic_hop: int = MAX_ALGEBRAIC_HOP,
                 cap_inner: int | None = None):
        if eps <= 0:
            raise ConfigError("eps must be positive")
        self.n = n
        self.eps = eps
        self.rng = random.Random(seed)
        self.seed = seed
        self.k = k or mssp_k(min(eps, 1.0), n)
        self.fixed_sample = fixed_sample
        field = field or FieldConfig(seed=seed)
        self.emulator = Emulator(n, "SPARSE", eps / 6, edges, field, k=self.k, backend=backend,
                                 max_algebraic_hop=max_algebraic_hop, cap_inner=cap_inner, salt=3)
        self.G = self.emulator.G
        self.beta = self.emulator.beta
        self.hop = max(1, min(math.ceil(6 * self.beta / eps), n - 1))
        self.channel = bounded_dist(n, self.hop, (), (), self.G.edges(), field=field, backend=backend,
                                    max_algebraic_hop=max_algebraic_hop, cap_outer=n,
                                    cap_inner=cap_inner, salt=4)
        self.sample_size = min(n, math.ceil(2 * math.sqrt(n) * math.log(max(n, 2))))
        self.S = self._sample()
        self.w = None
        self.W: list[int] = []
        self.value = self._estimate()

    def _sample(self) -> list[int]:
        return sorted(self.rng.sample(range(self.n), self.sample_size))

    def update(self, op: str, u: int, v: int) -> float:
        self.emulator.update(op, u, v)
        self.channel.update(op, u, v)
        if not self.fixed_sample:
            self.S = self._sample()
        self.value = self._estimate()
        return self.value

    def _estimate(self) -> float:
        if self.n < 2:
            return 0
        DS = _min_channels(self.channel, self.emulator, self.S)
        far = DS.min(axis=0)
        self.w = int(np.argmax(far))  # first maximum: smallest id on ties
        Dw = _min_channels(self.channel, self.emulator, [self.w])[0]
        order = np.lexsort((np.arange(self.n), Dw))
        self.W = sorted(int(x) for x in order[: math.ceil(math.sqrt(self.n))])
        DW = _min_channels(self.channel, self.emulator, self.W)
        best = max(DS.max(), Dw.max(), DW.max())
        return INF if not np.isfinite(best) else int(best)

    def query(self) -> float:
        return self.value


class ApspDistanceOracle:
    """All-pairs (1+eps) queries from sampled centres.

    Update: resample the centres S, compute emulator distances from S, the
    closest centre p(u) of every node, and h2-bounded distances from S.
    Query(u, v) = min(d^h1(u, v), est(p(u), u) + est(p(u), v)) where est is
    the minimum of the h2 channel and the emulator.
    """

    def __init__(self, n: int, edges: Iterable = (), eps: float = 0.5, h: int | None = None,
                 seed: int = 0, k: int | None = None, fixed_sample: bool = False,
                 field: FieldConfig | None = None, backend: str = "auto",
                 max_algebraic_hop: int = MAX_ALGEBRAIC_HOP, cap_inner: int | None = None):
        if eps <= 0:
            raise ConfigError("eps must be positive")
        self.n = n
        self.eps = eps
        self.h = h or max(1, math.ceil(n ** 0.2))
        self.rng = random.Random(seed)
        self.seed = seed
        self.k = k or mssp_k(min(eps, 1.0), n)
        self.fixed_sample = fixed_sample
        field = field or FieldConfig(seed=seed)
        self.emulator = Emulator(n, "SPARSE", eps / 6, edges, field, k=self.k, backend=backend,
                                 max_algebraic_hop=max_algebraic_hop, cap_inner=cap_inner, salt=5)
        self.G = self.emulator.G
        self.beta = self.emulator.beta
        self.h1 = max(1, min(math.ceil(6 * self.h / eps), n - 1))
        self.h2 = max(1, min(math.ceil(6 * self.beta / eps), n - 1))
        kw = dict(field=field, backend=backend, max_algebraic_hop=max_algebraic_hop, cap_outer=n,
                  cap_inner=cap_inner)
        self.D1 = bounded_dist(n, self.h1, (), (), self.G.edges(), salt=6, **kw)
        self.D2 = bounded_dist(n, self.h2, (), (), self.G.edges(), salt=7, **kw)
        self.sample_size = min(n, math.ceil(2 * (n / self.h) * math.log(max(n, 2))))
        self.S = self._sample()
        self._refresh()

    def _sample(self) -> list[int]:
        return sorted(self.rng.sample(range(self.n), self.sample_size))

    def update(self, op: str, u: int, v: int) -> None:
        self.emulator.update(op, u, v)
        self.D1.update(op, u, v)
        self.D2.update(op, u, v)
        if not self.fixed_sample:
            self.S = self._sample()
        self._refresh()

    def _refresh(self) -> None:
        DH = self.emulator.all_pairs(self.S)
        self.est = np.minimum(self.D2.query(self.S, None), DH)
        # closest centre in the emulator, smallest id on ties (S is sorted)
        self.p = np.argmin(DH, axis=0)

    def query(self, u: int, v: int) -> float:
        if u == v:
            return 0
        direct = float(self.D1.query([u], [v])[0, 0])
        c = self.p[u]
        via = self.est[c, u] + self.est[c, v]
        best = min(direct, via)
        return INF if not np.isfinite(best) else int(best)


def exact_st_update(state: ExactSt, op: str, u: int, v: int) -> float:
    return state.update(op, u, v)


def diameter_update(state: Diameter, op: str, u: int, v: int) -> float:
    return state.update(op, u, v)


def apsp_oracle_update(state: ApspDistanceOracle, op: str, u: int, v: int) -> None:
    state.update(op, u, v)


def apsp_oracle_query(state: ApspDistanceOracle, u: int, v: int) -> float:
    return state.query(u, v)
