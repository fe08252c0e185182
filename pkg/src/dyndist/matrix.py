"""Dense matrices over a ``Ring``: products, inverses and index sets.

A matrix is just an array of shape ``(c, rows, cols, H)``; the functions here
take the ring as their first argument.
"""
from __future__ import annotations

import bisect
from typing import Iterable, Iterator

import numpy as np

from .errors import ConfigError, SetError, Singular
from .field_ring import Ring

STRASSEN_THRESHOLD = 128


class IndexSet:
    """Strictly sorted set of indices in [0, n)."""

    def __init__(self, items: Iterable[int] = (), n: int | None = None):
        self.n = n
        self._items: list[int] = []
        for i in items:
            self.add(i)

    def add(self, i: int) -> int:
        i = int(i)
        if self.n is not None and not 0 <= i < self.n:
            raise SetError(f"index {i} outside [0, {self.n})")
        pos = bisect.bisect_left(self._items, i)
        if pos < len(self._items) and self._items[pos] == i:
            raise SetError(f"index {i} already present")
        self._items.insert(pos, i)
        return pos

    def remove(self, i: int) -> int:
        pos = self.position(i)
        del self._items[pos]
        return pos

    def position(self, i: int) -> int:
        pos = bisect.bisect_left(self._items, i)
        if pos == len(self._items) or self._items[pos] != i:
            raise SetError(f"index {i} not present")
        return pos

    def __contains__(self, i) -> bool:
        pos = bisect.bisect_left(self._items, i)
        return pos < len(self._items) and self._items[pos] == i

    def __iter__(self) -> Iterator[int]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __repr__(self) -> str:
        return f"IndexSet({self._items})"

    def tolist(self) -> list[int]:
        return list(self._items)

    def array(self) -> np.ndarray:
        return np.array(self._items, dtype=np.int64)


def submatrix(A: np.ndarray, rows, cols) -> np.ndarray:
    """Copy of A restricted to the given rows and columns."""
    r = np.asarray(list(rows), dtype=np.int64)
    c = np.asarray(list(cols), dtype=np.int64)
    return A[:, r][:, :, c].copy()


# ------------------------------------------------------------------ products

def mat_mul(ring: Ring, A: np.ndarray, B: np.ndarray, kernel: str = "auto",
            threshold: int = STRASSEN_THRESHOLD) -> np.ndarray:
    """Exact product A @ B.  ``kernel`` is naive, strassen or auto."""
    if A.shape[2] != B.shape[1]:
        raise ConfigError(f"dimension mismatch: {A.shape[1:3]} @ {B.shape[1:3]}")
    if kernel == "naive":
        return ring.matmul(A, B)
    if kernel not in ("auto", "strassen"):
        raise ConfigError(f"unknown kernel {kernel!r}")
    return _strassen(ring, A, B, threshold)


def _strassen(ring: Ring, A, B, threshold):
    r, k = A.shape[1:3]
    m = B.shape[2]
    if min(r, k, m) <= threshold:
        return ring.matmul(A, B)
    # pad every dimension to even
    r2, k2, m2 = r + r % 2, k + k % 2, m + m % 2
    if (r2, k2, m2) != (r, k, m):
        Ap = np.zeros(A.shape[:1] + (r2, k2) + A.shape[3:], dtype=A.dtype)
        Bp = np.zeros(B.shape[:1] + (k2, m2) + B.shape[3:], dtype=B.dtype)
        Ap[:, :r, :k] = A
        Bp[:, :k, :m] = B
        return _strassen(ring, Ap, Bp, threshold)[:, :r, :m]
    hr, hk, hm = r // 2, k // 2, m // 2
    A11, A12, A21, A22 = A[:, :hr, :hk], A[:, :hr, hk:], A[:, hr:, :hk], A[:, hr:, hk:]
    B11, B12, B21, B22 = B[:, :hk, :hm], B[:, :hk, hm:], B[:, hk:, :hm], B[:, hk:, hm:]
    add, sub = ring.add, ring.sub

    def rec(x, y):
        return _strassen(ring, x, y, threshold)

    M1 = rec(add(A11, A22), add(B11, B22))
    M2 = rec(add(A21, A22), B11)
    M3 = rec(A11, sub(B12, B22))
    M4 = rec(A22, sub(B21, B11))
    M5 = rec(add(A11, A12), B22)
    M6 = rec(sub(A21, A11), add(B11, B12))
    M7 = rec(sub(A12, A22), add(B21, B22))
    out = np.empty(A.shape[:1] + (r, m) + A.shape[3:], dtype=A.dtype)
    out[:, :hr, :hm] = add(sub(add(M1, M4), M5), M7)
    out[:, :hr, hm:] = add(M3, M5)
    out[:, hr:, :hm] = add(M2, M4)
    out[:, hr:, hm:] = add(add(sub(M1, M2), M3), M6)
    return out


# ------------------------------------------------------------------ inverses

def mat_inv_field(ring: Ring, M: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of the constant-term matrix, per copy.

    Accepts (c, n, n) or (c, n, n, H); only coefficient 0 is used and the
    result has the same layout as the input with zero higher coefficients.
    """
    poly = M.ndim == 4
    A = M[..., 0] if poly else M
    C, n, n2 = A.shape
    if n != n2:
        raise ConfigError("matrix must be square")
    p = ring.p(3)
    aug = np.concatenate([A % p, ring.eye(n)[..., 0]], axis=2)
    idx = np.arange(C)
    for col in range(n):
        nz = aug[:, col:, col] != 0
        if not nz.any(axis=1).all():
            raise Singular(f"no pivot in column {col}")
        piv = col + nz.argmax(axis=1)
        top = aug[idx, col].copy()
        aug[idx, col] = aug[idx, piv]
        aug[idx, piv] = top
        inv = ring.field_inv(aug[:, col, col])
        aug[:, col] = aug[:, col] * inv[:, None] % ring.p(2)
        f = aug[:, :, col].copy()
        f[:, col] = 0
        aug = (aug - f[:, :, None] * aug[:, col][:, None, :]) % p
    out = aug[:, :, n:]
    if not poly:
        return out
    full = ring.zeros(n, n)
    full[..., 0] = out
    return full


def mat_inv_poly(ring: Ring, M: np.ndarray) -> np.ndarray:
    """Inverse over F[X]/<X^H>, lifted from the inverse of M(0).

    After normalising to I + X*N, a constant N gives the power series
    sum X^k (-N)^k directly; otherwise Newton iteration R <- R(2I - MR)
    doubles the correct precision each round.
    """
    n = M.shape[1]
    eye = ring.eye(n)
    if ring.H > 1 and np.array_equal(M[..., 0], eye[..., 0]):
        M0inv, Mt = eye, M
    else:
        M0inv = mat_inv_field(ring, M)
        if ring.H == 1:
            return M0inv
        Mt = ring.matmul(M0inv, M)
    if ring.H == 2 or not Mt[..., 2:].any():
        negN = ring.neg(Mt[..., 1])
        R = ring.zeros(n, n)
        P = eye[..., 0]
        R[..., 0] = P
        for k in range(1, ring.H):
            P = ring.fmatmul(negN, P)
            R[..., k] = P
    else:
        R = eye
        two = ring.add(eye, eye)
        prec = 1
        while prec < ring.H:
            R = ring.matmul(R, ring.sub(two, ring.matmul(Mt, R)))
            prec *= 2
    if M0inv is eye:
        return R
    return ring.matmul(R, M0inv)


def is_identity(A: np.ndarray) -> bool:
    n = A.shape[1]
    eye = np.zeros(A.shape[1:3], dtype=bool)
    eye[np.arange(n), np.arange(n)] = True
    const_ok = np.all(np.where(eye, A[..., 0] == 1, A[..., 0] == 0))
    return bool(const_ok and not np.any(A[..., 1:]))
