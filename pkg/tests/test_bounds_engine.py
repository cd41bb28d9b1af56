import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minrank.bounds_engine import (
    BoundConfig,
    OrthogonalRep,
    assemble_bound_report,
    construct_faithful_rep,
    forcing_closure,
    gram_psd,
    greedy_zero_forcing_set,
    minrank_upper_numeric,
    verify_faithful_rep,
    zero_forcing_number,
)
from minrank.errors import DataError, ParameterError, SizeLimitError
from minrank.graph_core import (
    GnpModel,
    LabeledGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    petersen_graph,
    sample_gnp,
    vertex_connectivity,
)
from minrank.linalg import numeric_rank_nullity, pattern_of_matrix

from .oracles import zero_forcing_bruteforce


@st.composite
def graphs(draw, min_v=1, max_v=8):
    v = draw(st.integers(min_v, max_v))
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return LabeledGraph.from_edges(v, [pq for pq, keep in zip(pairs, mask) if keep])


@pytest.mark.parametrize("n", range(2, 9))
def test_zero_forcing_named_families(n):
    assert zero_forcing_number(path_graph(n)) == 1
    assert zero_forcing_number(complete_graph(n)) == n - 1
    if n >= 3:
        assert zero_forcing_number(cycle_graph(n)) == 2
    for G in (path_graph(n), complete_graph(n)):
        assert zero_forcing_number(G) == zero_forcing_bruteforce(G.v, G.edges())


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_zero_forcing_matches_bruteforce(G):
    assert zero_forcing_number(G) == zero_forcing_bruteforce(G.v, G.edges())


@given(graphs(max_v=10), st.integers(0, 2**32))
@settings(max_examples=100, deadline=None)
def test_greedy_set_forces_and_is_not_below_z(G, seed):
    S = greedy_zero_forcing_set(G, seed)
    full = (1 << G.v) - 1
    assert forcing_closure(G, sum(1 << i for i in S)) == full
    assert len(S) >= zero_forcing_number(G)


def test_zero_forcing_size_limits():
    with pytest.raises(SizeLimitError):
        zero_forcing_number(path_graph(41))
    with pytest.raises(SizeLimitError):
        zero_forcing_number(sample_gnp(GnpModel(30, 0.5, 1)), budget=10)


def test_numeric_minrank_examples():
    assert minrank_upper_numeric(complete_graph(5), 1) == 1
    assert minrank_upper_numeric(path_graph(4), 2, sweep=False) is None
    assert minrank_upper_numeric(path_graph(4), 3, sweep=False) == 3
    for G in (path_graph(5), cycle_graph(5), petersen_graph()):
        assert minrank_upper_numeric(G, G.v, sweep=False) == G.v


def test_numeric_minrank_certificate_is_sound():
    G = cycle_graph(6)
    r, A = minrank_upper_numeric(G, 5, return_matrix=True)
    assert pattern_of_matrix(A) == G
    assert numeric_rank_nullity(A).rank == r
    assert r >= 6 - zero_forcing_number(G)


def test_numeric_minrank_rejects_bad_target():
    with pytest.raises(ParameterError):
        minrank_upper_numeric(path_graph(3), 0)
    with pytest.raises(ParameterError):
        minrank_upper_numeric(path_graph(3), 4)


def test_verify_faithful_rep_examples():
    assert verify_faithful_rep(OrthogonalRep(np.eye(4)), empty_graph(4))
    assert verify_faithful_rep(OrthogonalRep(np.ones((4, 1))), complete_graph(4))
    repeated = np.vstack([np.eye(3), np.eye(3)[:1]])
    assert not verify_faithful_rep(OrthogonalRep(repeated), empty_graph(4))
    with pytest.raises(ParameterError):
        verify_faithful_rep(OrthogonalRep(np.eye(3)), empty_graph(4))


def test_gram_examples():
    assert np.array_equal(gram_psd(OrthogonalRep(np.eye(3))), np.eye(3))
    J = gram_psd(OrthogonalRep(np.ones((3, 1))), complete_graph(3))
    assert np.array_equal(J, np.ones((3, 3)))
    assert numeric_rank_nullity(J).rank == 1
    with pytest.raises(DataError):
        gram_psd(OrthogonalRep(np.eye(3)), complete_graph(3))


def test_faithful_rep_of_c5_in_dimension_three():
    G = cycle_graph(5)
    d = 5 - vertex_connectivity(G)
    assert d == 3
    rep = construct_faithful_rep(G, d, seed=1)
    assert rep is not None and rep.dimension == 3
    A = gram_psd(rep, G)
    assert np.linalg.eigvalsh(A).min() >= -1e-10
    assert numeric_rank_nullity(A).rank <= 3


@pytest.mark.parametrize("n", [1, 3, 6])
def test_faithful_rep_trivial_cases(n):
    assert construct_faithful_rep(complete_graph(n), 1) is not None
    assert construct_faithful_rep(empty_graph(n), n) is not None
    with pytest.raises(ParameterError):
        construct_faithful_rep(empty_graph(n), 0)


def test_faithful_rep_below_independence_bound_fails():
    # the empty graph needs v mutually orthogonal vectors
    assert construct_faithful_rep(empty_graph(4), 3, restarts=3) is None


def _random_connected(rng, max_v):
    while True:
        v = int(rng.integers(2, max_v + 1))
        G = sample_gnp(GnpModel(v, float(rng.uniform(0.2, 0.9)), int(rng.integers(2**32))))
        if G.is_connected:
            return G


def test_faithful_rep_on_random_connected_graphs():
    rng = np.random.default_rng(5)
    ok = 0
    for _ in range(200):
        G = _random_connected(rng, 15)
        d = G.v - vertex_connectivity(G)
        rep = construct_faithful_rep(G, d, seed=int(rng.integers(2**32)))
        if rep is None:
            continue
        A = gram_psd(rep, G)
        assert numeric_rank_nullity(A).rank <= d
        ok += 1
    assert ok >= 190


@pytest.mark.parametrize(
    "G,mr",
    [(complete_graph(n), 1) for n in (2, 5)]
    + [(path_graph(4), 3), (cycle_graph(5), 3)],
)
def test_report_closes(G, mr):
    r = assemble_bound_report(G)
    assert r.closed and r.mr_exact == mr
    assert r.M_lower == r.M_upper == G.v - mr


def test_report_fields_are_coherent():
    r = assemble_bound_report(petersen_graph(), BoundConfig(sah_search=True, xi_trials=2))
    assert r.kappa == 3 and r.mr_upper_kappa == 7
    assert r.mr_lower <= r.mr_upper <= r.mr_upper_kappa
    assert r.kappa <= r.M_lower_kappa
    assert r.nu_interval[0] == r.kappa <= r.nu_interval[1]
    assert r.xi_certified is not None and r.kappa <= r.xi_certified <= r.M_upper
    d = r.as_dict()
    assert d["mr_upper"] == r.mr_upper and d["nu_upper"] == r.nu_interval[1]


def test_report_edgeless_and_single_vertex():
    r = assemble_bound_report(empty_graph(4))
    assert (r.mr_lower, r.mr_upper) == (0, 0)
    r = assemble_bound_report(complete_graph(1))
    assert (r.kappa, r.mr_lower, r.mr_upper) == (0, 0, 0)


def test_report_greedy_fallback_is_flagged():
    G = sample_gnp(GnpModel(45, 0.5, 3))
    r = assemble_bound_report(G, BoundConfig(numeric_minrank=False, faithful_rep=False))
    assert "Z_greedy" in r.flags
    assert not r.zero_forcing_exact
    assert r.mr_lower <= r.mr_upper_kappa


def test_report_check_catches_inconsistency():
    r = assemble_bound_report(path_graph(4))
    r.mr_lower = 4
    with pytest.raises(DataError):
        r.check()


def test_delta_conjecture_flag():
    assert assemble_bound_report(cycle_graph(6)).delta_conjecture == "confirmed"


@given(graphs(min_v=2, max_v=9), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_sandwich_coherence_property(G, seed):
    r = assemble_bound_report(G, BoundConfig(seed=seed, numeric_restarts=2, numeric_max_iter=300))
    r.check()
    z = zero_forcing_number(G)
    assert r.mr_lower == max(G.v - z, 1 if G.e else 0)
    if r.mr_upper_numeric is not None:
        assert r.mr_lower <= r.mr_upper_numeric <= r.mr_upper_kappa
    assert r.mr_upper_kappa == G.v - vertex_connectivity(G)
    assert r.M_upper + r.mr_lower == G.v
    assert r.M_lower + r.mr_upper == G.v
