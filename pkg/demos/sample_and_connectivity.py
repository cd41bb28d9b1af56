"""Sample a few G(v, 1/2) graphs and compare vertex connectivity with min degree.

Run: python demos/sample_and_connectivity.py
"""
from minrank import GnpModel, graph_stats, sample_gnp, vertex_connectivity

for seed in range(5):
    G = sample_gnp(GnpModel(120, 0.5, seed))
    s = graph_stats(G)
    k = vertex_connectivity(G)
    print(f"seed={seed}  e={s.edges}  delta={s.delta}  Delta={s.Delta}  kappa={k}  kappa==delta: {k == s.delta}")
