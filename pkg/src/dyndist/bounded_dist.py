"""h-bounded S x T distances from the inverse of I - X*A.

Over F[X]/<X^(h+1)>, (I - XA)^-1 = sum_k X^k A^k, and the coefficient of X^k
in entry (u, v) counts walks of length k.  The distance is the lowest degree
with a nonzero coefficient; anything beyond h is reported as infinity.

``BfsBoundedDist`` answers the same queries by hop-capped BFS.  It backs
channels whose hop bound makes the polynomial ring too long to be practical
(at small n such bounds reach n - 1, where bounded distances are exact).
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .dyn_inverse import SubmatrixInverse, default_caps
from .errors import CapacityError, ConfigError, GraphError, SetError
from .field_ring import FieldConfig, Ring
from .matrix import IndexSet

# truncation degree above which "auto" picks the BFS backend
MAX_ALGEBRAIC_HOP = 32


class BoundedDistOracle:
    backend = "algebraic"

    def __init__(self, n: int, h: int, S=(), T=(), edges=(), directed: bool = False,
                 field: FieldConfig | None = None, cap_outer: int | None = None,
                 cap_inner: int | None = None, salt: int = 0):
        if h < 0:
            raise ConfigError("hop bound must be non-negative")
        self.n = n
        self.h = h
        self.directed = directed
        self.field = field or FieldConfig()
        self.ring = Ring(self.field.moduli(n, max(h, 1), salt), h + 1)
        self.A = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            self._check(u, v)
            if self.A[u, v]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            self.A[u, v] = True
            if not directed:
                self.A[v, u] = True
        S, T = IndexSet(S, n).tolist(), IndexSet(T, n).tolist()
        d_out, d_in = default_caps(n)
        cap_outer = cap_outer or d_out
        if max(len(S), len(T)) > cap_outer:
            raise CapacityError(f"|S|, |T| = {len(S)}, {len(T)} exceed cap_outer = {cap_outer}")
        M = self.ring.eye(n)
        if h >= 1:
            M[:, :, :, 1] = np.where(self.A, self.ring.p(3) - 1, 0)
        self.sub = SubmatrixInverse(self.ring, M, S, T, cap_outer, cap_inner)
        # edge insert subtracts X from M[u, v]
        self._minus_x = self.ring.zeros()
        self._plus_x = self.ring.zeros()
        if h >= 1:
            self._minus_x[:, 1] = self.ring.p(1) - 1
            self._plus_x[:, 1] = 1

    def _check(self, u: int, v: int):
        if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
            raise GraphError(f"malformed edge ({u}, {v})")

    @property
    def S(self) -> list[int]:
        return self.sub.S.tolist()

    @property
    def T(self) -> list[int]:
        return self.sub.T.tolist()

    def insert(self, u: int, v: int) -> None:
        self._check(u, v)
        if self.A[u, v]:
            raise GraphError(f"edge ({u}, {v}) already present")
        self._change(u, v, True, self._minus_x)

    def delete(self, u: int, v: int) -> None:
        self._check(u, v)
        if not self.A[u, v]:
            raise GraphError(f"edge ({u}, {v}) not present")
        self._change(u, v, False, self._plus_x)

    def _change(self, u, v, present, delta):
        self.A[u, v] = present
        self.sub.update(u, v, delta)
        if not self.directed:
            self.A[v, u] = present
            self.sub.update(v, u, delta)

    def update(self, op: str, u: int, v: int) -> None:
        if op in ("insert", "+"):
            self.insert(u, v)
        elif op in ("delete", "-"):
            self.delete(u, v)
        else:
            raise GraphError(f"unknown edge operation {op!r}")

    def set_update(self, side: str, op: str, v: int) -> None:
        self.sub.set_update(side, op, v)

    def distances(self) -> np.ndarray:
        """|S| x |T| matrix of bounded distances (float, inf beyond h)."""
        return self.ring.min_degree(self.sub.B)

    def query(self, rows=None, cols=None) -> np.ndarray:
        """Bounded distances for arbitrary node sets via entry queries."""
        return self.ring.min_degree(self.sub.query(rows, cols))

    @property
    def rebuilds(self) -> int:
        return self.sub.rebuilds


class BfsBoundedDist:
    """Bounded S x T distances by hop-capped BFS; same interface as the oracle."""

    backend = "bfs"

    def __init__(self, n: int, h: int, S=(), T=(), edges=(), directed: bool = False, **_):
        if h < 0:
            raise ConfigError("hop bound must be non-negative")
        self.n = n
        self.h = h
        self.directed = directed
        self.A = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            self._check(u, v)
            if self.A[u, v]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            self._set(u, v, True)
        self._S = IndexSet(S, n)
        self._T = IndexSet(T, n)
        self.rebuilds = 0

    _check = BoundedDistOracle._check

    def _set(self, u, v, present):
        self.A[u, v] = present
        if not self.directed:
            self.A[v, u] = present

    @property
    def S(self) -> list[int]:
        return self._S.tolist()

    @property
    def T(self) -> list[int]:
        return self._T.tolist()

    def insert(self, u: int, v: int) -> None:
        self._check(u, v)
        if self.A[u, v]:
            raise GraphError(f"edge ({u}, {v}) already present")
        self._set(u, v, True)

    def delete(self, u: int, v: int) -> None:
        self._check(u, v)
        if not self.A[u, v]:
            raise GraphError(f"edge ({u}, {v}) not present")
        self._set(u, v, False)

    update = BoundedDistOracle.update

    def set_update(self, side: str, op: str, v: int) -> None:
        target = {"S": self._S, "T": self._T}.get(side)
        if target is None:
            raise SetError(f"unknown side {side!r}")
        if op == "add":
            target.add(v)
        elif op == "remove":
            target.remove(v)
        else:
            raise SetError(f"unknown set operation {op!r}")

    def distances(self) -> np.ndarray:
        return self.query(self.S, self.T)

    def query(self, rows=None, cols=None) -> np.ndarray:
        rows = list(range(self.n)) if rows is None else list(rows)
        cols = list(range(self.n)) if cols is None else list(cols)
        if not rows:
            return np.zeros((0, len(cols)))
        D = shortest_path(csr_matrix(self.A), method="D", directed=self.directed,
                          unweighted=True, indices=rows)[:, cols]
        D[D > self.h] = np.inf
        return D


def bounded_dist(n: int, h: int, S=(), T=(), edges=(), directed: bool = False,
                 field: FieldConfig | None = None, backend: str = "auto",
                 max_algebraic_hop: int = MAX_ALGEBRAIC_HOP, **kw):
    """Build a bounded-distance channel; ``backend`` is algebraic, bfs or auto."""
    if backend == "auto":
        backend = "algebraic" if h <= max_algebraic_hop else "bfs"
    if backend == "algebraic":
        return BoundedDistOracle(n, h, S, T, edges, directed, field, **kw)
    if backend == "bfs":
        return BfsBoundedDist(n, h, S, T, edges, directed)
    raise ConfigError(f"unknown bounded-distance backend {backend!r}")
