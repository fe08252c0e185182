"""Dynamic matrix inverse in three layers.

``BatchInverse``
    keeps M^-1 = M'^-1 + U'V'^T and explicit columns for an index set T;
    absorbs batches of entry changes with the Woodbury identity.
``EntryInverse``
    buffers single-entry changes M = M'' + UV^T on top of a ``BatchInverse``
    together with N = (I + V^T M''^-1 U)^-1, flushing the buffer as one batch
    every ``cap_inner`` changes.
``SubmatrixInverse``
    keeps the block M^-1[S, T] explicit, with one ``EntryInverse`` on M (for
    rows over T) and one on M^T (for columns over S).

All arrays follow the ``Ring`` layout ``(c, rows, cols, H)``.  Changes are
``(i, j, delta)`` with delta a ring scalar of shape ``(c, H)``: entry (i, j)
of M grows by delta.
"""
from __future__ import annotations

import math
import time

import numpy as np

from .errors import CapacityError, NotInvertible, SetError, Singular
from .field_ring import Ring
from .matrix import IndexSet, mat_inv_poly


def default_caps(n: int, mu: float = 0.85, nu: float = 0.55) -> tuple[int, int]:
    outer = max(1, math.ceil(n ** mu))
    inner = max(1, min(outer, math.ceil(n ** nu)))
    return outer, inner


def _idx(ix) -> np.ndarray | slice:
    if ix is None:
        return slice(None)
    return np.asarray(list(ix), dtype=np.int64)


class BatchInverse:
    def __init__(self, ring: Ring, M: np.ndarray, T=(), cap_outer: int | None = None,
                 cap_inner: int | None = None, Minv: np.ndarray | None = None):
        self.ring = ring
        self.n = M.shape[1]
        d_out, d_in = default_caps(self.n)
        self.cap_outer = cap_outer or d_out
        self.cap_inner = min(cap_inner or d_in, self.cap_outer)
        self.M = M.copy()
        self.Minv0 = mat_inv_poly(ring, M) if Minv is None else Minv.copy()
        self.U = ring.zeros(self.n, 0)
        self.V = ring.zeros(0, self.n)
        self.T_init = IndexSet(T, self.n)
        self.T_dyn = IndexSet(n=self.n)
        if len(self.T_init) > self.cap_outer:
            raise CapacityError(f"|T| = {len(self.T_init)} exceeds cap_outer = {self.cap_outer}")
        self.E = self.Minv0[:, :, _idx(self.T_init)].copy()
        self._perm = None
        self.updates = 0
        self.rebuilds = 0
        self.rebuild_seconds: list[float] = []

    # -- queries on the current inverse
    @property
    def rank(self) -> int:
        return self.U.shape[2]

    def T(self) -> list[int]:
        return sorted(self.T_init.tolist() + self.T_dyn.tolist())

    def block(self, rows=None, cols=None) -> np.ndarray:
        r, c = _idx(rows), _idx(cols)
        base = self.Minv0[:, r][:, :, c]
        if self.rank == 0:
            return base.copy()
        return self.ring.add(base, self.ring.matmul(self.U[:, r], self.V[:, :, c]))

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.block([i], [j])[:, 0, 0]

    def _order(self) -> np.ndarray:
        if self._perm is None:
            merged = self.T_init.tolist() + self.T_dyn.tolist()
            self._perm = np.argsort(np.asarray(merged, dtype=np.int64), kind="stable")
        return self._perm

    def rows_T(self, rows) -> np.ndarray:
        """M^-1[rows, T] with T in sorted order, shape (c, len(rows), |T|, H)."""
        r = _idx(rows)
        parts = [self.E[:, r]]
        if len(self.T_dyn):
            parts.append(self.block(rows, self.T_dyn))
        out = np.concatenate(parts, axis=2) if len(parts) > 1 else parts[0]
        return out[:, :, self._order()]

    def row_T(self, i: int) -> np.ndarray:
        return self.rows_T([i])[:, 0]

    def inverse(self) -> np.ndarray:
        return self.block()

    # -- updates
    def batch_update(self, changes) -> None:
        if not changes:
            return
        ring = self.ring
        k = len(changes)
        if k > self.cap_inner:
            raise CapacityError(f"batch of {k} exceeds cap_inner = {self.cap_inner}")
        if self.rank + k > self.cap_outer:
            self.rebuild()
        ci = [c[0] for c in changes]
        rj = [c[1] for c in changes]
        delta = np.stack([c[2] for c in changes], axis=1)  # (c, k, H)
        Q = ring.mul(self.block(None, ci), delta[:, None])  # M^-1 U
        S = self.block(rj, None)  # V^T M^-1
        R = ring.mul(S[:, :, ci], delta[:, None])
        K = ring.add(ring.eye(k), R)
        try:
            Kinv = mat_inv_poly(ring, K)
        except (Singular, NotInvertible) as exc:
            raise Singular("Woodbury pivot I + V^T M^-1 U is singular") from exc
        W = ring.matmul(Kinv, S)
        if len(self.T_init):
            self.E = ring.sub(self.E, ring.matmul(Q, W[:, :, _idx(self.T_init)]))
        self.U = np.concatenate([self.U, ring.neg(Q)], axis=2)
        self.V = np.concatenate([self.V, W], axis=1)
        for a, (i, j, _) in enumerate(changes):
            self.M[:, i, j] = ring.add(self.M[:, i, j], delta[:, a])
        self.updates += 1

    def rebuild(self) -> None:
        t0 = time.perf_counter()
        if self.rank:
            self.Minv0 = self.ring.add(self.Minv0, self.ring.matmul(self.U, self.V))
            self.U = self.ring.zeros(self.n, 0)
            self.V = self.ring.zeros(0, self.n)
        self.rebuilds += 1
        self.rebuild_seconds.append(time.perf_counter() - t0)

    def set_update(self, op: str, index: int) -> None:
        if op == "add":
            if index in self.T_init or index in self.T_dyn:
                raise SetError(f"index {index} already in T")
            if len(self.T_init) + len(self.T_dyn) + 1 > self.cap_outer:
                raise CapacityError(f"|T| would exceed cap_outer = {self.cap_outer}")
            self.T_dyn.add(index)
            if len(self.T_dyn) > self.cap_inner:
                self._merge()
        elif op == "remove":
            if index in self.T_dyn:
                self.T_dyn.remove(index)
            elif index in self.T_init:
                pos = self.T_init.remove(index)
                self.E = np.delete(self.E, pos, axis=2)
            else:
                raise SetError(f"index {index} not in T")
        else:
            raise SetError(f"unknown set operation {op!r}")
        self._perm = None

    def _merge(self) -> None:
        cols = self.block(None, self.T_dyn)
        merged = self.T_init.tolist() + self.T_dyn.tolist()
        E = np.concatenate([self.E, cols], axis=2)
        order = np.argsort(np.asarray(merged), kind="stable")
        self.E = E[:, :, order]
        self.T_init = IndexSet(merged, self.n)
        self.T_dyn = IndexSet(n=self.n)


class EntryInverse:
    def __init__(self, ring: Ring, M: np.ndarray, T=(), cap_outer: int | None = None,
                 cap_inner: int | None = None, Minv: np.ndarray | None = None):
        self.ring = ring
        self.inner = BatchInverse(ring, M, T, cap_outer, cap_inner, Minv)
        self.n = self.inner.n
        self.cap_inner = self.inner.cap_inner
        self.cap_outer = self.inner.cap_outer
        self.T = IndexSet(T, self.n)
        self._reset_pending()
        self.updates = 0
        self.flushes = 0

    def _reset_pending(self) -> None:
        ring = self.ring
        self.pi: list[int] = []
        self.pj: list[int] = []
        self.pd = np.zeros((ring.C, 0, ring.H), dtype=ring.dtype)
        self.N = ring.zeros(0, 0)
        self.VMT = ring.zeros(0, len(self.T))

    @property
    def pending(self) -> int:
        return len(self.pi)

    # -- queries
    def block(self, rows=None, cols=None) -> np.ndarray:
        base = self.inner.block(rows, cols)
        if not self.pi:
            return base
        ring = self.ring
        x = ring.mul(self.inner.block(rows, self.pi), self.pd[:, None])
        y = self.inner.block(self.pj, cols)
        return ring.sub(base, ring.matmul(ring.matmul(x, self.N), y))

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.block([i], [j])[:, 0, 0]

    def rows_T(self, rows) -> np.ndarray:
        base = self.inner.rows_T(rows)
        if not self.pi:
            return base
        ring = self.ring
        x = ring.mul(self.inner.block(rows, self.pi), self.pd[:, None])
        return ring.sub(base, ring.matmul(ring.matmul(x, self.N), self.VMT))

    def row_T(self, i: int) -> np.ndarray:
        return self.rows_T([i])[:, 0]

    def matrix(self) -> np.ndarray:
        M = self.inner.M.copy()
        for a, (i, j) in enumerate(zip(self.pi, self.pj)):
            M[:, i, j] = self.ring.add(M[:, i, j], self.pd[:, a])
        return M

    # -- updates
    def update(self, i: int, j: int, delta: np.ndarray) -> None:
        ring = self.ring
        if not np.any(delta):
            return
        k = len(self.pi)
        col = ring.mul(self.inner.block(self.pj + [j], [i])[:, :, 0], delta[:, None])  # G[:, new]
        b, dd = col[:, :k], col[:, k]
        c = ring.mul(self.inner.block([j], self.pi)[:, 0], self.pd)  # G[new, :]
        dd = dd.copy()
        dd[:, 0] = (dd[:, 0] + 1) % ring.p(2)[:, 0]
        if k:
            Nb = ring.matmul(self.N, b[:, :, None])[:, :, 0]  # (c, k, H)
            cN = ring.matmul(c[:, None], self.N)[:, 0]
            s = ring.sub(dd, ring.matmul(cN[:, None], b[:, :, None])[:, 0, 0])
        else:
            s = dd
        try:
            s_inv = ring.inv_unit(s)
        except NotInvertible as exc:
            raise Singular(f"rank-1 pivot for entry ({i}, {j}) is zero") from exc
        N = ring.zeros(k + 1, k + 1)
        if k:
            Nbs = ring.mul(Nb, s_inv[:, None])
            N[:, :k, :k] = ring.add(self.N, ring.mul(Nbs[:, :, None], cN[:, None, :]))
            N[:, :k, k] = ring.neg(Nbs)
            N[:, k, :k] = ring.neg(ring.mul(cN, s_inv[:, None]))
        N[:, k, k] = s_inv
        self.N = N
        self.VMT = np.concatenate([self.VMT, self.inner.rows_T([j])], axis=1)
        self.pi.append(i)
        self.pj.append(j)
        self.pd = np.concatenate([self.pd, delta[:, None]], axis=1)
        self.updates += 1
        if len(self.pi) >= self.cap_inner:
            self.flush()

    def flush(self) -> None:
        if not self.pi:
            return
        changes = [(i, j, self.pd[:, a]) for a, (i, j) in enumerate(zip(self.pi, self.pj))]
        self.inner.batch_update(changes)
        self.flushes += 1
        self._reset_pending()

    def set_update(self, op: str, index: int) -> None:
        self.inner.set_update(op, index)
        if op == "add":
            pos = self.T.add(index)
            colv = self.inner.block(self.pj, [index]) if self.pj else self.ring.zeros(0, 1)
            self.VMT = np.concatenate([self.VMT[:, :, :pos], colv, self.VMT[:, :, pos:]], axis=2)
        else:
            pos = self.T.remove(index)
            self.VMT = np.delete(self.VMT, pos, axis=2)


class SubmatrixInverse:
    def __init__(self, ring: Ring, M: np.ndarray, S=(), T=(), cap_outer: int | None = None,
                 cap_inner: int | None = None):
        self.ring = ring
        n = M.shape[1]
        self.n = n
        Minv = mat_inv_poly(ring, M)
        self.primal = EntryInverse(ring, M, T, cap_outer, cap_inner, Minv)
        self.cap_outer = self.primal.cap_outer
        self.cap_inner = self.primal.cap_inner
        self.S = IndexSet(S, n)
        self.T = IndexSet(T, n)
        if len(self.S) > self.cap_outer:
            raise CapacityError(f"|S| = {len(self.S)} exceeds cap_outer = {self.cap_outer}")
        Mt = np.ascontiguousarray(M.transpose(0, 2, 1, 3))
        MinvT = np.ascontiguousarray(Minv.transpose(0, 2, 1, 3))
        self.transposed = EntryInverse(ring, Mt, S, self.cap_outer, self.cap_inner, MinvT)
        self.B = Minv[:, _idx(self.S)][:, :, _idx(self.T)].copy()

    def update(self, i: int, j: int, c: np.ndarray) -> None:
        """M[i, j] += c while keeping M^-1[S, T] explicit."""
        ring = self.ring
        if not np.any(c):
            return
        m_ji = self.primal.entry(j, i)
        piv = ring.mul(c, m_ji)
        piv[:, 0] = (piv[:, 0] + 1) % ring.p(2)[:, 0]
        try:
            piv_inv = ring.inv_unit(piv)
        except NotInvertible as exc:
            raise Singular(f"1 + c*M^-1[{j},{i}] is zero") from exc
        if len(self.S) and len(self.T):
            col = self.transposed.row_T(i)  # M^-1[S, i]
            row = self.primal.row_T(j)  # M^-1[j, T]
            coef = ring.mul(c, piv_inv)
            rowc = ring.mul(row, coef[:, None])
            self.B = ring.sub(self.B, ring.matmul(col[:, :, None], rowc[:, None]))
        self.primal.update(i, j, c)
        self.transposed.update(j, i, c)

    def set_update(self, side: str, op: str, index: int) -> None:
        if side == "S":
            if op == "add":
                if index in self.S:
                    raise SetError(f"{index} already in S")
                if len(self.S) + 1 > self.cap_outer:
                    raise CapacityError(f"|S| would exceed cap_outer = {self.cap_outer}")
                row = self.primal.row_T(index)
                self.transposed.set_update("add", index)
                pos = self.S.add(index)
                self.B = np.concatenate([self.B[:, :pos], row[:, None], self.B[:, pos:]], axis=1)
            elif op == "remove":
                self.transposed.set_update("remove", index)
                pos = self.S.remove(index)
                self.B = np.delete(self.B, pos, axis=1)
            else:
                raise SetError(f"unknown set operation {op!r}")
        elif side == "T":
            if op == "add":
                if index in self.T:
                    raise SetError(f"{index} already in T")
                col = self.transposed.row_T(index)
                self.primal.set_update("add", index)
                pos = self.T.add(index)
                self.B = np.concatenate([self.B[:, :, :pos], col[:, :, None], self.B[:, :, pos:]], axis=2)
            elif op == "remove":
                self.primal.set_update("remove", index)
                pos = self.T.remove(index)
                self.B = np.delete(self.B, pos, axis=2)
            else:
                raise SetError(f"unknown set operation {op!r}")
        else:
            raise SetError(f"unknown side {side!r}")

    def block(self) -> np.ndarray:
        return self.B.copy()

    def query(self, rows=None, cols=None) -> np.ndarray:
        """Arbitrary M^-1[rows, cols] via entry queries on the primal copy."""
        return self.primal.block(rows, cols)

    @property
    def rebuilds(self) -> int:
        return self.primal.inner.rebuilds + self.transposed.inner.rebuilds

    def rebuild_seconds(self) -> list[float]:
        return self.primal.inner.rebuild_seconds + self.transposed.inner.rebuild_seconds
