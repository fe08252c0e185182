"""
A hitting set with constant recourse
====================================

Every node of degree >= d must have a neighbour in A.  Recomputing a greedy
set after every edge could change A by a lot; the phased scheme spreads the
work so A changes by a bounded number of nodes per update.
"""
import random

from dyndist.graph import DynGraph
from dyndist.hitting_set import DynamicHittingSet, hs_static_greedy

n, d = 200, 12
rng = random.Random(3)
G = DynGraph(n)
while G.m < n * d // 2:
    u, v = rng.sample(range(n), 2)
    if not G.has_edge(u, v):
        G.insert(u, v)

print("static greedy size:", len(hs_static_greedy(G, d)))
hs = DynamicHittingSet(G, d)
print("phase length", hs.t, "size bound", round(hs.size_bound))

worst = 0
for step in range(2000):
    u, v = rng.sample(range(n), 2)
    changes = hs.update("delete" if G.has_edge(u, v) else "insert", u, v)
    worst = max(worst, len(changes))
    assert not hs.coverage_violations()

print("after 2000 updates: |A| =", len(hs.A), "largest change", worst, "phases", hs.phases)
