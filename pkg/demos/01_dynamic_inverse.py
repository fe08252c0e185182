"""
Keeping a block of a matrix inverse current
===========================================

A random matrix over a prime field, and the 4 x 4 block of its inverse on
rows S and columns T.  Entry changes and swaps of S and T members are cheap
rank-one corrections; the result is compared against a fresh Gauss-Jordan
inverse each time.
"""
import numpy as np

from dyndist.dyn_inverse import SubmatrixInverse
from dyndist.errors import Singular
from dyndist.field_ring import Ring
from dyndist.matrix import mat_inv_field

q = 4194301  # a 22-bit prime
ring = Ring([q], 1)
rng = np.random.default_rng(7)
M = ring.from_ints(rng.integers(0, q, (16, 16)))

sub = SubmatrixInverse(ring, M, S=[0, 3, 5, 9], T=[1, 2, 8, 15])
print("block shape (copies, rows, cols, coefficients):", sub.block().shape)

# M[2, 7] += 12345
delta = ring.zeros()
delta[0, 0] = 12345
sub.update(2, 7, delta)
M[0, 2, 7, 0] = (M[0, 2, 7, 0] + 12345) % q

# swap a row index out of S
sub.set_update("S", "remove", 3)
sub.set_update("S", "add", 11)

ref = mat_inv_field(ring, M)
want = ref[:, sub.S.tolist()][:, :, sub.T.tolist()]
print("S =", sub.S.tolist(), "T =", sub.T.tolist())
print("matches a fresh inverse:", bool(np.array_equal(sub.block(), want)))

# a singular update is refused and leaves the state untouched
i, j = 4, 4
try:
    # choose c so that 1 + c * Minv[j, i] = 0
    c = (-pow(int(ref[0, j, i, 0]), -1, q)) % q
    d = ring.zeros()
    d[0, 0] = c
    sub.update(i, j, d)
except Singular as exc:
    print("refused:", exc)
