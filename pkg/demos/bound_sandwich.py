"""Bound reports for small named graphs and one random graph.

Lower bound from zero forcing, upper bounds from v - kappa and a numeric
low-rank completion; the sandwich closes when both meet.
"""
from minrank import (
    GnpModel,
    assemble_bound_report,
    complete_bipartite_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    sample_gnp,
)

graphs = {
    "P6": path_graph(6),
    "C7": cycle_graph(7),
    "K3,4": complete_bipartite_graph(3, 4),
    "Petersen": petersen_graph(),
    "G(12,0.5)": sample_gnp(GnpModel(12, 0.5, 3)),
}
for name, G in graphs.items():
    r = assemble_bound_report(G)
    closed = "closed" if r.mr_lower == r.mr_upper else "open"
    print(f"{name:<10} v={r.v:<3} kappa={r.kappa:<2} mr in [{r.mr_lower}, {r.mr_upper}] ({closed})  mr+ <= {r.mrplus_upper}")
