import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minrank.errors import DataError, ParameterError
from minrank.graph_core import (
    GnpModel,
    LabeledGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    format_edge_list,
    graph_stats,
    local_connectivity,
    parse_edge_list,
    path_graph,
    petersen_graph,
    read_edge_list,
    sample_gnp,
    vertex_connectivity,
    write_edge_list,
)

from .oracles import kappa_bruteforce


@st.composite
def small_graphs(draw, max_v=7):
    v = draw(st.integers(1, max_v))
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return LabeledGraph.from_edges(v, [pq for pq, keep in zip(pairs, mask) if keep])


def test_adjacency_validation():
    with pytest.raises(ParameterError):
        LabeledGraph(np.array([[1, 0], [0, 0]], dtype=bool))
    with pytest.raises(ParameterError):
        LabeledGraph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ParameterError):
        LabeledGraph(np.zeros((0, 0), dtype=bool))
    with pytest.raises(ParameterError):
        LabeledGraph.from_edges(3, [(0, 0)])


def test_graph_is_immutable():
    G = path_graph(3)
    with pytest.raises(ValueError):
        G.adjacency[0, 2] = True


@pytest.mark.parametrize("v,p", [(0, 0.5), (3, 0.0), (3, 1.0), (3, -0.1)])
def test_gnp_model_rejects_bad_parameters(v, p):
    with pytest.raises(ParameterError):
        GnpModel(v, p, 1)


def test_gnp_model_rejects_bad_seed():
    with pytest.raises(ParameterError):
        GnpModel(3, 0.5, -1)
    with pytest.raises(ParameterError):
        GnpModel(3, 0.5, 2**64)


def test_sampling_is_bitwise_deterministic():
    a = sample_gnp(GnpModel(5, 0.5, 42))
    b = sample_gnp(GnpModel(5, 0.5, 42))
    assert np.array_equal(a.adjacency, b.adjacency)
    assert a == b


def test_near_one_probability_gives_complete_graph():
    G = sample_gnp(GnpModel(3, 1 - 1e-15, 0))
    assert G.is_complete


def test_edge_count_mean_matches_binomial():
    v, p, n = 200, 0.5, 1000
    pairs = v * (v - 1) // 2
    es = np.array([sample_gnp(GnpModel(v, p, s)).e for s in range(n)])
    se = math.sqrt(pairs * p * (1 - p) / n)
    assert abs(es.mean() - p * pairs) <= 3 * se
    assert p * pairs == 9950


@pytest.mark.parametrize(
    "G,degrees,delta,Delta,e",
    [
        (complete_graph(4), (3, 3, 3, 3), 3, 3, 6),
        (path_graph(4), (1, 2, 2, 1), 1, 2, 3),
        (empty_graph(5), (0,) * 5, 0, 0, 0),
    ],
)
def test_graph_stats_examples(G, degrees, delta, Delta, e):
    s = graph_stats(G)
    assert tuple(s.degrees) == degrees
    assert (s.delta, s.Delta, s.edges) == (delta, Delta, e)


@pytest.mark.parametrize(
    "G,kappa",
    [
        (complete_graph(4), 3),
        (complete_graph(1), 0),
        (path_graph(3), 1),
        (petersen_graph(), 3),
        (cycle_graph(6), 2),
        (complete_bipartite_graph(3, 4), 3),
        (disjoint_union(complete_graph(3), complete_graph(3)), 0),
        (empty_graph(4), 0),
    ],
)
def test_vertex_connectivity_examples(G, kappa):
    assert vertex_connectivity(G) == kappa


def test_petersen_kappa_matches_bruteforce():
    G = petersen_graph()
    assert kappa_bruteforce(G.v, G.edges()) == 3


def test_vertex_connectivity_matches_exhaustive_search_corpus():
    rng = np.random.default_rng(2024)
    for _ in range(600):
        v = int(rng.integers(1, 8))
        p = float(rng.uniform(0.2, 0.95))
        G = sample_gnp(GnpModel(v, p, int(rng.integers(2**32))))
        assert vertex_connectivity(G) == kappa_bruteforce(v, G.edges()), G.edges()


@given(small_graphs())
@settings(max_examples=200, deadline=None)
def test_kappa_between_zero_and_min_degree(G):
    k = vertex_connectivity(G)
    assert 0 <= k <= graph_stats(G).delta
    assert k == kappa_bruteforce(G.v, G.edges())


@given(small_graphs())
@settings(max_examples=200, deadline=None)
def test_degree_sum_identity(G):
    s = graph_stats(G)
    assert int(np.sum(s.degrees)) == 2 * s.edges
    assert s.delta <= s.Delta <= max(G.v - 1, 0)
    assert 0 <= G.e <= G.v * (G.v - 1) // 2


def test_sampled_graphs_respect_kappa_le_delta():
    for seed in range(50):
        G = sample_gnp(GnpModel(60, 0.3, seed))
        assert vertex_connectivity(G) <= graph_stats(G).delta


def test_local_connectivity_rejects_adjacent_pair():
    with pytest.raises(ParameterError):
        local_connectivity(path_graph(3), 0, 1)
    assert local_connectivity(cycle_graph(6), 0, 3) == 2


def test_components_and_bipartite():
    G = disjoint_union(cycle_graph(5), path_graph(3))
    assert G.components == ((0, 1, 2, 3, 4), (5, 6, 7))
    assert not G.is_connected
    assert not G.is_bipartite
    assert complete_bipartite_graph(2, 3).is_bipartite


@given(small_graphs(max_v=9))
@settings(max_examples=100, deadline=None)
def test_edge_list_roundtrip(G):
    assert parse_edge_list(format_edge_list(G)) == G


def test_edge_list_is_one_indexed(tmp_path):
    path = tmp_path / "g.txt"
    write_edge_list(path_graph(3), path)
    assert path.read_text().split("\n")[:3] == ["3 2", "1 2", "2 3"]
    assert read_edge_list(path) == path_graph(3)


@pytest.mark.parametrize(
    "text",
    ["", "3", "3 1\n1 1", "3 1\n1 4", "3 2\n1 2", "3 1\n2 1", "x y", "3 2\n1 2\n1 2"],
)
def test_malformed_edge_lists(text):
    with pytest.raises(DataError):
        parse_edge_list(text)


def test_connectivity_matches_networkx_on_larger_graphs():
    nx = pytest.importorskip("networkx")
    rng = np.random.default_rng(31)
    for _ in range(150):
        v = int(rng.integers(8, 40))
        G = sample_gnp(GnpModel(v, float(rng.uniform(0.05, 0.9)), int(rng.integers(2**32))))
        H = nx.Graph()
        H.add_nodes_from(range(v))
        H.add_edges_from(G.edges())
        if not G.is_complete:
            assert vertex_connectivity(G) == nx.node_connectivity(H)
        s, t = (int(x) for x in rng.choice(v, 2, replace=False))
        if not G.adjacency[s, t]:
            assert local_connectivity(G, s, t) == nx.node_connectivity(H, s, t)
