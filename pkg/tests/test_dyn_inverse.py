import random

import numpy as np
import pytest

from dyndist.dyn_inverse import BatchInverse, EntryInverse, SubmatrixInverse, default_caps
from dyndist.errors import CapacityError, SetError, Singular
from dyndist.field_ring import Ring
from dyndist.matrix import mat_inv_field

P = 1009


def scalar(ring, x):
    d = ring.zeros()
    d[:, 0] = x % P
    return d


def random_invertible(ring, n, rng):
    while True:
        M = ring.from_ints(rng.integers(0, P, (n, n)))
        try:
            mat_inv_field(ring, M)
            return M
        except Singular:
            pass


def values(a):
    return a[0, ..., 0].tolist()


def test_default_caps():
    assert default_caps(64) == (35, 10)
    assert default_caps(1) == (1, 1)


def test_batch_examples():
    r = Ring([7], 1)
    b = BatchInverse(r, r.eye(3), T=[0, 2])
    assert values(b.rows_T(range(3))) == [[1, 0], [0, 0], [0, 1]]
    b = BatchInverse(r, r.from_ints([[1, 1], [0, 1]]))
    assert values(b.inverse()) == [[1, 6], [0, 1]]
    before = b.inverse().copy()
    b.batch_update([])
    assert np.array_equal(b.inverse(), before)
    b = BatchInverse(Ring([P], 1), Ring([P], 1).eye(2), T=[0, 1])
    b.batch_update([(0, 1, scalar(b.ring, 1))])
    assert values(b.inverse()) == [[1, P - 1], [0, 1]]


def test_batch_set_updates():
    r = Ring([7], 1)
    b = BatchInverse(r, r.eye(4), T=[1])
    b.set_update("add", 3)
    assert values(b.rows_T(range(4))) == [[0, 0], [1, 0], [0, 0], [0, 1]]
    b.set_update("remove", 3)
    assert b.T() == [1]
    with pytest.raises(SetError):
        b.set_update("add", 1)
    with pytest.raises(SetError):
        b.set_update("remove", 2)


def test_batch_random_against_gauss():
    rng = np.random.default_rng(2)
    prng = random.Random(2)
    r = Ring([P], 1)
    n = 16
    M = random_invertible(r, n, rng)
    b = BatchInverse(r, M, T=[0, 5, 9], cap_outer=12, cap_inner=3)
    for step in range(50):
        if step % 2:
            op = "remove" if b.T() and prng.random() < 0.4 else "add"
            if op == "add":
                x = prng.choice([i for i in range(n) if i not in b.T()])
            else:
                x = prng.choice(b.T())
            if op == "add" and len(b.T()) >= 12:
                continue
            b.set_update(op, x)
        i, j = prng.randrange(n), prng.randrange(n)
        cand = b.M.copy()
        cand[:, i, j] = (cand[:, i, j] + 5) % P
        try:
            ref = mat_inv_field(r, cand)
        except Singular:
            continue
        b.batch_update([(i, j, scalar(r, 5))])
        assert np.array_equal(b.inverse(), ref)
        assert np.array_equal(b.rows_T(range(n)), ref[:, :, b.T()])
    assert b.rebuilds > 0


def test_entry_examples():
    r = Ring([P], 1)
    e = EntryInverse(r, r.eye(2), T=[0, 1])
    before = e.block().copy()
    e.update(0, 1, scalar(r, 0))
    assert np.array_equal(e.block(), before)
    e.update(0, 1, scalar(r, 1))
    assert values(e.block()) == [[1, P - 1], [0, 1]]
    assert values(e.matrix()) == [[1, 1], [0, 1]]
    # M = [[1,1],[1,1]] is singular
    with pytest.raises(Singular):
        e.update(1, 0, scalar(r, 1))


def test_entry_random_1000():
    rng = np.random.default_rng(3)
    prng = random.Random(3)
    r = Ring([P], 1)
    n = 32
    M = random_invertible(r, n, rng)
    e = EntryInverse(r, M, T=list(range(0, n, 4)))
    cur = M.copy()
    checked = 0
    for _ in range(1000):
        if prng.random() < 0.2:
            x = prng.randrange(n)
            try:
                e.set_update("remove" if x in e.T else "add", x)
            except CapacityError:
                pass
            continue
        i, j, c = prng.randrange(n), prng.randrange(n), prng.randrange(1, P)
        cand = cur.copy()
        cand[:, i, j] = (cand[:, i, j] + c) % P
        try:
            ref = mat_inv_field(r, cand)
        except Singular:
            continue
        e.update(i, j, scalar(r, c))
        cur = cand
        if checked % 10 == 0:
            assert np.array_equal(e.block(), ref)
            assert np.array_equal(e.matrix(), cur)
        i = prng.randrange(n)
        assert np.array_equal(e.row_T(i), ref[:, i, e.T.tolist()])
        checked += 1
    assert checked > 750


def test_submatrix_examples():
    r = Ring([P], 1)
    s = SubmatrixInverse(r, r.eye(2), S=[0], T=[0])
    assert values(s.block()) == [[1]]
    s.update(1, 1, scalar(r, 1))
    assert values(s.block()) == [[1]]
    s = SubmatrixInverse(r, r.eye(2), S=[0], T=[1])
    s.update(0, 1, scalar(r, 1))
    assert values(s.block()) == [[P - 1]]


def test_submatrix_random_500():
    rng = np.random.default_rng(4)
    prng = random.Random(4)
    r = Ring([P, 4093], 2)
    n = 24
    M = r.add(r.eye(n), r.shift(r.from_ints(rng.integers(0, 2, (n, n)))))
    s = SubmatrixInverse(r, M, S=prng.sample(range(n), 6), T=prng.sample(range(n), 6))
    cur = M.copy()
    for step in range(500):
        if prng.random() < 0.2:
            side = prng.choice("ST")
            cur_set = s.S if side == "S" else s.T
            x = prng.randrange(n)
            if x in cur_set:
                s.set_update(side, "remove", x)
            elif len(cur_set) < s.cap_outer:
                s.set_update(side, "add", x)
        else:
            i, j = prng.randrange(n), prng.randrange(n)
            c = r.zeros()
            c[:, 1] = prng.choice([1, -1])  # X * (+-1) keeps I - XA invertible
            c %= r.p(2)
            s.update(i, j, c)
            cur[:, i, j] = (cur[:, i, j] + c) % r.p(2)
        ref = np.stack([mat_inv_field(Ring([q], 1), cur[k:k + 1, :, :, :1])[0] for k, q in
                        enumerate(r.moduli)])  # constant terms
        B = s.block()
        assert np.array_equal(B[..., 0], ref[:, s.S.tolist()][:, :, s.T.tolist()][..., 0])
        if step % 50 == 0:
            from dyndist.matrix import mat_inv_poly
            full = mat_inv_poly(r, cur)
            assert np.array_equal(B, full[:, s.S.tolist()][:, :, s.T.tolist()])
