"""
Composed distance oracles
=========================

Each answer is the smaller of an exact hop-bounded distance and a Dijkstra
search on an emulator.  ``channel`` says which one won.
"""
from dyndist.graph import DynGraph, bfs
from dyndist.oracles import ApspOracle, MsspOracle, SsspOracle, StOracle

n = 40
path = [(i, i + 1) for i in range(n - 1)]
clique = [(u, v) for u in range(8) for v in range(u + 2, 8)]
edges = path + clique

st = StOracle(n, 0, n - 1, edges, eps=0.5)
print("st", st.query(), "hop", st.cfg.hop)

sssp = SsspOracle(n, 0, edges, eps=0.5)
sssp.update("insert", 10, 30)
G = DynGraph(n, edges + [(10, 30)])
truth = bfs(G.adj, 0)
est = sssp.query()
print("sssp ok:", all(truth[v] <= est[v].value <= 1.5 * truth[v] for v in range(n)))
print("channels used:", sorted({e.channel for e in est}))

ms = MsspOracle(n, [0, 20], edges, eps=0.5)
print("mssp d(20, 39) =", ms.query()[1][39])

ap = ApspOracle(n, edges, eps=0.5)
print("apsp shape", ap.values().shape)

tiny = SsspOracle(n, 0, edges, eps=0.01)
print("eps below 2/n falls back to BFS:", tiny.exact)
