"""Composed (1+eps)-approximate distance oracles.

Each oracle keeps two non-underestimating channels and answers with their
minimum:

* algebraic: exact hop-bounded distances on G from a bounded-distance channel
* emulator: Dijkstra on a dynamic near-additive emulator

========  ===================  ==============================
kind      emulator             direct hop bound
========  ===================  ==============================
ST        E4 for eps/2         ceil(8/eps) + 2
SSSP      E2 for eps/2         ceil(4/eps)
MSSP      SPARSE for eps/2     ceil(6 beta/eps)
APSP      MSSP with S = V      same
========  ===================  ==============================

Distances beyond the hop bound can only come from the emulator, whose
additive error is at most eps/2 times the distance there.  Hop bounds are
capped at n - 1, beyond which bounded distances are already exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .bounded_dist import MAX_ALGEBRAIC_HOP, bounded_dist
from .emulator import Emulator, bfs_all_pairs, emulator_distances, static_near_additive
from .errors import ConfigError
from .field_ring import FieldConfig
from .graph import DynGraph

ALGEBRAIC = "algebraic"
EMULATOR = "emulator"
EXACT = "exact"
KINDS = ("ST", "SSSP", "MSSP", "APSP")


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    channel: str

    def __float__(self) -> float:
        return float(self.value)


def clamp_eps(eps: float, n: int) -> tuple[float, bool]:
    """Clamp eps to [2/n, 1]; below 2/n the oracle switches to exact BFS."""
    if eps <= 0:
        raise ConfigError("eps must be positive")
    lo = 2.0 / max(n, 2)
    if eps < lo:
        return eps, True
    return min(eps, 1.0), False


def mssp_k(eps: float, n: int) -> int:
    if eps >= 1:
        return 2
    return max(2, math.ceil(math.sqrt(math.log(max(n, 2)) / math.log(1 / eps) / 2)))


@dataclass
class OracleConfig:
    kind: str
    eps: float = 0.5
    sources: Sequence[int] = ()
    target: int | None = None
    variant: str = dc_field(init=False, default="")
    hop: int = dc_field(init=False, default=0)
    k: int = dc_field(init=False, default=0)
    exact: bool = dc_field(init=False, default=False)

    def derive(self, n: int) -> "OracleConfig":
        kind = self.kind.upper()
        if kind not in KINDS:
            raise ConfigError(f"unknown oracle kind {self.kind!r}")
        self.kind = kind
        self.eps, self.exact = clamp_eps(self.eps, n)
        eps = self.eps
        if kind == "ST":
            if self.target is None or len(self.sources) != 1:
                raise ConfigError("ST needs one source and a target")
            self.variant, hop = "E4", math.ceil(8 / eps) + 2
        elif kind == "SSSP":
            if len(self.sources) != 1:
                raise ConfigError("SSSP needs exactly one source")
            self.variant, hop = "E2", math.ceil(4 / eps)
        else:
            if kind == "APSP":
                self.sources = range(n)
            self.k = mssp_k(eps, n)
            beta = math.ceil((6 / eps) ** self.k)  # SPARSE for eps/2 uses eps' = eps/6
            self.variant, hop = "SPARSE", math.ceil(6 * beta / eps)
        self.hop = max(1, min(hop, n - 1))
        return self


class Oracle:
    """Shared update path of the composed oracles."""

    kind = ""

    def __init__(self, n: int, edges: Iterable = (), eps: float = 0.5, sources: Sequence[int] = (),
                 target: int | None = None, field: FieldConfig | None = None,
                 backend: str = "auto", max_algebraic_hop: int = MAX_ALGEBRAIC_HOP,
                 simple: bool = False, cap_inner: int | None = None):
        self.n = n
        self.cfg = OracleConfig(self.kind, eps, list(sources), target).derive(n)
        self.sources = list(self.cfg.sources)
        for s in self.sources + ([target] if target is not None else []):
            if not 0 <= s < n:
                raise ConfigError(f"node {s} outside [0, {n})")
        self.field = field or FieldConfig()
        self.simple = simple
        edges = list(edges)
        self.emulator = None
        self.channel = None
        if self.cfg.exact:
            self.G = DynGraph(n, edges)
            return
        cols = [target] if self.kind == "ST" else list(range(n))
        self.channel = bounded_dist(n, self.cfg.hop, self.sources, cols, edges, field=self.field,
                                    backend=backend, max_algebraic_hop=max_algebraic_hop,
                                    cap_outer=n, cap_inner=cap_inner, salt=1)
        if simple:
            self.G = DynGraph(n, edges)
            self._static_emulator()
        else:
            self.emulator = Emulator(n, self.cfg.variant, self.cfg.eps / 2, edges, self.field,
                                     k=max(self.cfg.k, 2), backend=backend,
                                     max_algebraic_hop=max_algebraic_hop, cap_inner=cap_inner,
                                     salt=2)
            self.G = self.emulator.G

    @property
    def exact(self) -> bool:
        return self.cfg.exact

    def _static_emulator(self):
        # rebuild a sparse emulator of G from scratch (the simpler APSP variant)
        adj = [set(a) for a in self.G.adj]
        self._emu_edges = static_near_additive(adj, self.cfg.eps / 2, max(self.cfg.k, 2))

    def update(self, op: str, u: int, v: int) -> None:
        if self.cfg.exact:
            self.G.apply(op, u, v)
            return
        if self.simple:
            self.G.apply(op, u, v)
            self.channel.update(op, u, v)
            self._static_emulator()
            return
        self.emulator.update(op, u, v)
        self.channel.update(op, u, v)

    # -- estimates as arrays, rows = sources
    def _channels(self) -> tuple[np.ndarray, np.ndarray]:
        direct = self.channel.distances()
        if self.simple:
            emu = emulator_distances(self.n, self._emu_edges, self.sources, keep=self.n)
        else:
            emu = self.emulator.all_pairs(self.sources)
        if self.kind == "ST":
            emu = emu[:, [self.cfg.target]]
        return direct, emu

    def _matrix(self) -> np.ndarray:
        if self.cfg.exact:
            D = bfs_all_pairs(self.G)[self.sources]
            return D[:, [self.cfg.target]] if self.kind == "ST" else D
        direct, emu = self._channels()
        return np.minimum(direct, emu)

    def values(self) -> np.ndarray:
        """Estimates as a float array, rows = sources (inf when unreachable)."""
        return self._matrix()

    def estimates(self) -> list[list[DistanceEstimate]]:
        if self.cfg.exact:
            return [[DistanceEstimate(float(x), EXACT) for x in row] for row in self._matrix()]
        direct, emu = self._channels()
        return [[DistanceEstimate(float(min(a, b)), ALGEBRAIC if a <= b else EMULATOR)
                 for a, b in zip(ra, rb)] for ra, rb in zip(direct, emu)]


class StOracle(Oracle):
    kind = "ST"

    def __init__(self, n: int, s: int, t: int, edges: Iterable = (), eps: float = 0.5, **kw):
        super().__init__(n, edges, eps, [s], t, **kw)

    def query(self) -> DistanceEstimate:
        return self.estimates()[0][0]


class SsspOracle(Oracle):
    kind = "SSSP"

    def __init__(self, n: int, s: int, edges: Iterable = (), eps: float = 0.5, **kw):
        super().__init__(n, edges, eps, [s], **kw)

    def query(self) -> list[DistanceEstimate]:
        return self.estimates()[0]

    def values(self) -> np.ndarray:
        return self._matrix()[0]


class MsspOracle(Oracle):
    kind = "MSSP"

    def __init__(self, n: int, sources: Sequence[int], edges: Iterable = (), eps: float = 0.5, **kw):
        super().__init__(n, edges, eps, sources, **kw)

    def query(self) -> list[list[DistanceEstimate]]:
        return self.estimates()


class ApspOracle(Oracle):
    kind = "APSP"

    def __init__(self, n: int, edges: Iterable = (), eps: float = 0.5, **kw):
        super().__init__(n, edges, eps, range(n), **kw)

    def query(self) -> list[list[DistanceEstimate]]:
        return self.estimates()


def st_query(state: StOracle) -> DistanceEstimate:
    return state.query()


def sssp_query(state: SsspOracle) -> list[DistanceEstimate]:
    return state.query()


def mssp_query(state: MsspOracle) -> list[list[DistanceEstimate]]:
    return state.query()


def apsp_query(state: ApspOracle) -> list[list[DistanceEstimate]]:
    return state.query()
