"""
Exact st distance, diameter, and an all-pairs query oracle
==========================================================

All three sample nodes with a seeded generator, so a run replays exactly.
"""
from dyndist.extras import ApspDistanceOracle, Diameter, ExactSt
from dyndist.graph import DynGraph, bfs

n = 30
cycle = [(i, (i + 1) % n) for i in range(n)]

x = ExactSt(n, 0, 15, h=4, edges=cycle, seed=2)
print("exact d(0, 15) =", x.query(), "with |H| =", len(x.H))
print("after chord (3, 12):", x.update("insert", 3, 12))

D = Diameter(n, cycle, eps=0.25, seed=2)
print("cycle diameter", n // 2, "estimate", D.query())

o = ApspDistanceOracle(n, cycle, eps=0.5, seed=2)
o.update("insert", 0, 10)
G = DynGraph(n, cycle + [(0, 10)])
for u, v in ((0, 20), (5, 25), (7, 8)):
    print(f"d({u}, {v}) = {bfs(G.adj, u)[v]}, oracle {o.query(u, v)}")
