"""Search for a matrix with the strong Arnold property and maximal nullity, then check
the edge inequality xi(xi+1)/2 <= e + 1."""
from minrank import (
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    verify_xi_edge_inequality,
    xi_certificate_search,
)

for name, G in [("K5", complete_graph(5)), ("C6", cycle_graph(6)), ("K3,3", complete_bipartite_graph(3, 3))]:
    cert = xi_certificate_search(G, trials=4, seed=0)
    chk = verify_xi_edge_inequality(cert)
    print(
        f"{name:<5} nullity={cert.nullity}  SAH={cert.sah.holds}  "
        f"{chk.lhs} <= {chk.e}+1: {chk.holds}  strict: {chk.strict_holds}"
    )
