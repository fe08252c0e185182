"""Prime fields and truncated polynomial rings F_p[X]/<X^H>.

Two layers live here.  ``TruncPoly`` and the ``poly_*`` functions are a small
scalar API that is easy to reason about.  ``Ring`` is the vectorised engine
used by everything else: it stores ``c`` independent copies (one per prime) of
arrays of truncated polynomials with shape ``(c, ..., H)``.

Word-size moduli run through float64 BLAS, which is exact as long as every
partial sum stays below 2**53; the inner dimension is chunked to guarantee
that.  Moduli too large for a machine word fall back to object arrays of
Python ints.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, NotInvertible, Singular

# Miller-Rabin with these witnesses is exact below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)

WORD_LIMIT = 1 << 26
# below this many multiply-adds, integer matmul beats the float/BLAS route
SMALL_WORK = 200_000


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in _MR_BASES:
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if m < 3_317_044_064_679_887_385_961_981 else _MR_BASES + _EXTRA_BASES
    for a in bases:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def next_prime(m: int) -> int:
    """Smallest prime strictly greater than m."""
    q = m + 1
    while not is_prime(q):
        q += 1
    return q


def random_prime(rng: random.Random, bits: int) -> int:
    lo, hi = 1 << (bits - 1), (1 << bits) - 1
    while True:
        q = rng.randint(lo, hi) | 1
        if is_prime(q):
            return q


@dataclass(frozen=True)
class FieldConfig:
    """How moduli are chosen for an algebraic structure on n nodes.

    ``deterministic`` picks the smallest prime above n**h so no path count can
    vanish.  ``randomized`` draws ``copies`` independent primes of
    ``prime_bits`` bits; by default copies = ceil(c0 * ln n).
    """

    mode: str = "randomized"
    seed: int = 0
    copies: int | None = None
    c0: float = 3.0
    prime_bits: int = 22
    modulus: int | None = None

    def __post_init__(self):
        if self.mode not in ("deterministic", "randomized"):
            raise ConfigError(f"unknown field mode {self.mode!r}")
        if self.modulus is not None and not is_prime(int(self.modulus)):
            raise ConfigError("modulus override must be prime")
        if not 3 <= self.prime_bits <= 26:
            raise ConfigError("prime_bits must lie in [3, 26]")

    def num_copies(self, n: int) -> int:
        if self.mode == "deterministic" or self.modulus is not None:
            return 1
        if self.copies is not None:
            return max(1, int(self.copies))
        return max(1, math.ceil(self.c0 * math.log(max(n, 2))))

    def moduli(self, n: int, h: int, salt: int = 0) -> tuple[int, ...]:
        """Primes for a structure on n nodes whose path counts reach n**h."""
        if self.modulus is not None:
            return (int(self.modulus),)
        if self.mode == "deterministic":
            return (next_prime(max(n, 2) ** max(h, 1)),)
        rng = random.Random(f"{self.seed}/{salt}/{n}/{h}")
        out: list[int] = []
        while len(out) < self.num_copies(n):
            q = random_prime(rng, self.prime_bits)
            if q not in out:
                out.append(q)
        return tuple(out)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("mode", "seed", "copies", "c0", "prime_bits", "modulus")}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldConfig":
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


# ---------------------------------------------------------------- scalar API

@dataclass(frozen=True)
class TruncPoly:
    coeffs: tuple[int, ...]
    p: int = field(default=2)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ConfigError("a truncated polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))

    @property
    def h(self) -> int:
        return len(self.coeffs)

    @classmethod
    def const(cls, value: int, h: int, p: int) -> "TruncPoly":
        return cls((value,) + (0,) * (h - 1), p)


def _check(a: TruncPoly, b: TruncPoly):
    if a.p != b.p or a.h != b.h:
        raise ConfigError(f"mismatched rings: (p={a.p}, h={a.h}) vs (p={b.p}, h={b.h})")


def poly_add(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    _check(a, b)
    return TruncPoly(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.p)


def poly_sub(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    _check(a, b)
    return TruncPoly(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), a.p)


def poly_mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    _check(a, b)
    h, p = a.h, a.p
    out = [0] * h
    for i, x in enumerate(a.coeffs):
        if x:
            for j in range(h - i):
                out[i + j] += x * b.coeffs[j]
    return TruncPoly(tuple(c % p for c in out), p)


def poly_inv_unitX(q: TruncPoly) -> TruncPoly:
    """Inverse in F[X]/<X^h> by Newton iteration r <- r(2 - qr)."""
    p, h = q.p, q.h
    if q.coeffs[0] == 0:
        raise NotInvertible("constant term is zero")
    r = TruncPoly.const(pow(q.coeffs[0], -1, p), h, p)
    two = TruncPoly.const(2, h, p)
    prec = 1
    while prec < h:
        r = poly_mul(r, poly_sub(two, poly_mul(q, r)))
        prec *= 2
    return r


def min_nonzero_degree(a: TruncPoly) -> int | None:
    for k, c in enumerate(a.coeffs):
        if c:
            return k
    return None


# ---------------------------------------------------------- vectorised ring

class Ring:
    """c copies of F_p[X]/<X^H>, one modulus per copy.

    Arrays are ``(c, *shape, H)`` for polynomials.  When ``H == 1`` the ring is
    just the prime field, and the last axis is still present.
    """

    def __init__(self, moduli: Sequence[int], ncoef: int):
        if ncoef < 1:
            raise ConfigError("need at least one coefficient")
        self.moduli = tuple(int(q) for q in moduli)
        if not self.moduli:
            raise ConfigError("need at least one modulus")
        self.C = len(self.moduli)
        self.H = int(ncoef)
        pmax = max(self.moduli)
        self.word = pmax < WORD_LIMIT
        self.dtype = np.int64 if self.word else object
        self._p = np.array(self.moduli, dtype=self.dtype)
        self._pcache: dict[int, np.ndarray] = {}
        if self.word:
            # float64 holds integers exactly up to 2**53
            self._split = (pmax - 1) ** 2 * 64 >= (1 << 53)
            hi_bound = (pmax - 1) * ((1 << 13) if self._split else (pmax - 1))
            self._chunk = max(1, ((1 << 53) - 1) // max(hi_bound, 1))
            # number of products of residues whose sum stays exact
            self._int_terms = ((1 << 63) - 1) // max((pmax - 1) ** 2, 1)
            self._float_terms = (1 << 53) // max((pmax - 1) ** 2, 1)

    # -- helpers
    def p(self, ndim: int) -> np.ndarray:
        if ndim not in self._pcache:
            self._pcache[ndim] = self._p.reshape((self.C,) + (1,) * (ndim - 1))
        return self._pcache[ndim]

    def zeros(self, *shape: int) -> np.ndarray:
        if self.word:
            return np.zeros((self.C, *shape, self.H), dtype=np.int64)
        z = np.empty((self.C, *shape, self.H), dtype=object)
        z.fill(0)
        return z

    def eye(self, n: int) -> np.ndarray:
        z = self.zeros(n, n)
        idx = np.arange(n)
        z[:, idx, idx, 0] = 1
        return z

    def from_ints(self, values, poly: bool = True) -> np.ndarray:
        """Broadcast an integer array (same for every copy) into the ring."""
        v = np.asarray(values)
        out = self.zeros(*v.shape)
        for c, q in enumerate(self.moduli):
            if self.word:
                out[c, ..., 0] = np.mod(v.astype(np.int64), q)
            else:
                out[c, ..., 0] = np.vectorize(lambda x: int(x) % q, otypes=[object])(v) if v.size else v
        return out

    def mod(self, a: np.ndarray) -> np.ndarray:
        return a % self.p(a.ndim)

    def add(self, a, b):
        r = a + b
        return r % self.p(r.ndim)

    def sub(self, a, b):
        r = a - b
        return r % self.p(r.ndim)

    def neg(self, a):
        return (-a) % self.p(a.ndim)

    def shift(self, a: np.ndarray, k: int = 1) -> np.ndarray:
        """Multiply by X**k (truncating)."""
        out = np.zeros_like(a)
        if k < self.H:
            out[..., k:] = a[..., : self.H - k]
        return out

    def scalar_field(self, a: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Multiply polynomials by field scalars s of shape (c, ...)."""
        r = a * s[..., None]
        return r % self.p(r.ndim)

    # -- elementwise polynomial product, broadcasting over the middle axes
    def _toeplitz(self, x: np.ndarray) -> np.ndarray:
        """View T with T[..., t, j] = x[..., t - j] (zero when t < j)."""
        H = self.H
        pad = np.zeros(x.shape[:-1] + (2 * H - 1,), dtype=x.dtype)
        pad[..., H - 1 :] = x
        return np.lib.stride_tricks.sliding_window_view(pad, H, axis=-1)[..., :H, ::-1]

    def _small_matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # expand the smaller operand into its Toeplitz form, then one float matmul
        C, r, k, H = a.shape
        m = b.shape[2]
        af, bf = a.astype(np.float64), b.astype(np.float64)
        if r <= m:
            at = self._toeplitz(af).transpose(0, 1, 3, 2, 4).reshape(C, r * H, k * H)
            b2 = bf.transpose(0, 1, 3, 2).reshape(C, k * H, m)
            out = np.matmul(at, b2).reshape(C, r, H, m).transpose(0, 1, 3, 2)
        else:
            bt = self._toeplitz(bf).transpose(0, 1, 4, 2, 3).reshape(C, k * H, m * H)
            out = np.matmul(af.reshape(C, r, k * H), bt).reshape(C, r, m, H)
        return out.astype(np.int64) % self.p(4)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        H = self.H
        shape = np.broadcast_shapes(a.shape, b.shape)
        if H == 1:
            return (a * b) % self.p(len(shape))
        out = np.zeros(shape, dtype=self.dtype) if self.word else np.full(shape, 0, dtype=object)
        if b.size < a.size:
            a, b = b, a
        nz = self._nonzero_coefs(a)
        big = self.word and H * (max(self.moduli) - 1) ** 2 >= (1 << 62)
        for i in nz:
            out[..., i:] += a[..., i : i + 1] * b[..., : H - i]
            if big:
                out %= self.p(out.ndim)
        return out % self.p(out.ndim)

    def _nonzero_coefs(self, a: np.ndarray) -> list[int]:
        if self.H == 1:
            return [0]
        flat = a.reshape(-1, self.H)
        if flat.shape[0] == 0:
            return []
        return [int(i) for i in np.flatnonzero(np.any(flat != 0, axis=0))]

    # -- batched field matmul (c, r, k) @ (c, k, m) -> (c, r, m)
    def fmatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if not self.word:
            return np.matmul(a, b) % self.p(3)
        C, r, k = a.shape
        m = b.shape[2]
        if k == 0 or r == 0 or m == 0:
            return np.zeros((C, r, m), dtype=np.int64)
        if r * m * k * C <= SMALL_WORK and k <= self._int_terms:
            return np.matmul(a, b) % self.p(3)
        af = a.astype(np.float64)
        if self._split:
            lo = (b & 0x1FFF).astype(np.float64)
            hi = (b >> 13).astype(np.float64)
            return (self._fmm(af, hi) * (1 << 13) + self._fmm(af, lo)) % self.p(3)
        return self._fmm(af, b.astype(np.float64))

    def _fmm(self, af, bf) -> np.ndarray:
        # integer % after the cast is far cheaper than np.fmod on floats
        k = af.shape[2]
        step = self._chunk
        p = self.p(3)
        if k <= step:
            return np.matmul(af, bf).astype(np.int64) % p
        acc = None
        for s in range(0, k, step):
            part = np.matmul(af[:, :, s : s + step], bf[:, s : s + step]).astype(np.int64) % p
            acc = part if acc is None else acc + part
        return acc % p

    # -- polynomial matrix product (c, r, k, H) @ (c, k, m, H) -> (c, r, m, H)
    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        C, r, k, H = a.shape
        m = b.shape[2]
        if b.shape[1] != k:
            raise ConfigError(f"shape mismatch {a.shape} @ {b.shape}")
        if H == 1:
            return self.fmatmul(a[..., 0], b[..., 0])[..., None]
        out = self.zeros(r, m)
        if k == 0 or r == 0 or m == 0:
            return out
        if self.word and min(r, m) * k * H * H * self.C <= SMALL_WORK and k * H <= self._float_terms:
            return self._small_matmul(a, b)
        na, nb = self._nonzero_coefs(a), self._nonzero_coefs(b)
        if not na or not nb:
            return out
        p4 = self.p(4)
        if len(na) <= len(nb):
            # loop over coefficients of a; b laid out as (c, k, H*m) with t-major columns
            bcat = np.ascontiguousarray(b.transpose(0, 1, 3, 2)).reshape(C, k, H * m)
            acc = np.zeros((C, r, H, m), dtype=self.dtype) if self.word else self.zeros(r, H, m)[..., 0]
            for i in na:
                w = H - i
                prod = self.fmatmul(np.ascontiguousarray(a[..., i]), bcat[:, :, : w * m])
                acc[:, :, i:, :] += prod.reshape(C, r, w, m)
            out = np.ascontiguousarray(acc.transpose(0, 1, 3, 2))
        else:
            acat = np.ascontiguousarray(a.transpose(0, 3, 1, 2)).reshape(C, H * r, k)
            acc = np.zeros((C, H, r, m), dtype=self.dtype) if self.word else self.zeros(H, r, m)[..., 0]
            for j in nb:
                w = H - j
                prod = self.fmatmul(acat[:, : w * r, :], np.ascontiguousarray(b[..., j]))
                acc[:, j:, :, :] += prod.reshape(C, w, r, m)
            out = np.ascontiguousarray(acc.transpose(0, 2, 3, 1))
        return out % p4

    # -- inverses
    def field_inv(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse of field elements, a has shape (c, ...)."""
        if np.any(a % self.p(a.ndim) == 0):
            raise NotInvertible("zero has no inverse")
        if not self.word or a.size <= 64:
            out = np.empty(a.shape, dtype=self.dtype)
            for c, q in enumerate(self.moduli):
                src, dst = a[c : c + 1].reshape(-1), out[c : c + 1].reshape(-1)
                for t in range(src.size):
                    dst[t] = pow(int(src[t]), -1, q)
            return out
        # Fermat: a^(p-2), square-and-multiply with a per-copy exponent
        p = self.p(a.ndim)
        e = p - 2
        result = np.ones_like(a)
        base = a % p
        bits = int(max(self.moduli)).bit_length()
        for _ in range(bits):
            mask = (e & 1).astype(bool)
            result = np.where(mask, result * base % p, result)
            base = base * base % p
            e = e >> 1
        return result

    def inv_unit(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse of polynomials with invertible constant term."""
        r = np.zeros_like(a)
        r[..., 0] = self.field_inv(a[..., 0])
        two = np.zeros_like(a)
        two[..., 0] = 2
        prec = 1
        while prec < self.H:
            r = self.mul(r, self.sub(two, self.mul(a, r)))
            prec *= 2
        return r

    def min_degree(self, a: np.ndarray) -> np.ndarray:
        """Smallest degree with a nonzero coefficient, minimised over copies.

        Returns a float array over the middle axes with ``inf`` where every
        copy is the zero polynomial.
        """
        nz = a != 0
        has = nz.any(axis=-1)
        deg = np.where(has, nz.argmax(axis=-1), self.H).min(axis=0)
        out = deg.astype(np.float64)
        out[deg >= self.H] = np.inf
        return out
