"""
Hop-bounded distances from polynomial matrices
==============================================

Over F[X]/<X^(h+1)> the inverse of I - X*A is the sum of X^k A^k, so the
lowest nonzero degree of an entry is the distance, if it is at most h.
"""
from dyndist.bounded_dist import BoundedDistOracle
from dyndist.field_ring import FieldConfig
from dyndist.graph import DynGraph, bfs

n, h = 12, 4
path = [(i, i + 1) for i in range(n - 1)]
S, T = [0, 6], [3, 4, 5, 11]
bd = BoundedDistOracle(n, h, S, T, path, field=FieldConfig(mode="deterministic"))
print("hop bound", h, "modulus", bd.ring.moduli[0])
print(bd.distances())  # d(0, 5) = 5 > h, so inf

bd.insert(0, 5)
print("after inserting (0, 5):")
print(bd.distances())

bd.set_update("S", "add", 10)
print("S is now", list(bd.S))
print(bd.distances())

G = DynGraph(n, path + [(0, 5)])
ref = bfs(G.adj, 10, h)
print("BFS from 10 capped at", h, ":", [ref[t] for t in T])
