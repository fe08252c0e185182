"""
Near-additive emulators
=======================

A weighted graph H on the same nodes with d_G <= d_H <= (1+eps) d_G + beta.
Light edges are copied, heavy nodes reach the hitting set, and hitting-set
nodes are joined by their exact hop-bounded distances.
"""
import random

from dyndist.emulator import Emulator, bfs_all_pairs, check_distances
from dyndist.field_ring import FieldConfig

n = 60
rng = random.Random(1)
edges = set()
while len(edges) < 4 * n:
    u, v = sorted(rng.sample(range(n), 2))
    edges.add((u, v))

for variant, beta in (("E2", 2), ("E4", 4)):
    E = Emulator(n, variant, 0.5, edges, FieldConfig(seed=1))
    print(variant, "d =", E.d, "hitting set", len(E.hitting_set), "edges", E.size,
          "bound", round(E.size_bound))
    for _ in range(20):
        u, v = rng.sample(range(n), 2)
        E.update("delete" if E.G.has_edge(u, v) else "insert", u, v)
    bad = check_distances(bfs_all_pairs(E.G), E.all_pairs(), 0.5, beta)
    print("  pairs outside (1+eps, %d) after 20 updates:" % beta, bad)

S = Emulator(n, "SPARSE", 0.5, edges, FieldConfig(seed=1), k=2)
print("SPARSE beta", S.beta, "edges", S.size)

# edge list, one "u v w" per line
import io
buf = io.StringIO()
S.dump(buf)
print(buf.getvalue().splitlines()[:3])
