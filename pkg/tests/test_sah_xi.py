import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minrank.errors import ParameterError
from minrank.graph_core import (
    GnpModel,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    path_graph,
    petersen_graph,
    sample_gnp,
    vertex_connectivity,
)
from minrank.linalg import numeric_rank_nullity, parse_matrix, pattern_of_matrix
from minrank.sah_xi import (
    XiCertificate,
    check_sah,
    format_certificate,
    sah_system,
    tangent_normal_dims,
    verify_xi_edge_inequality,
    xi_certificate_search,
)

from .oracles import sah_solution_dim_exact

P3_MATRIX = np.array([[1.0, 1, 0], [1, 2, 1], [0, 1, 1]])


def _witness_ok(A, X, tol=1e-8):
    return (
        np.abs(A @ X).max() <= tol
        and np.abs(A * X).max() <= tol
        and np.abs(np.diag(X)).max() <= tol
        and np.abs(X).max() > 0.1
    )


@pytest.mark.parametrize("A", [np.ones((3, 3)), np.eye(4), P3_MATRIX])
def test_sah_examples(A):
    verdict = check_sah(A)
    assert verdict.holds and verdict.solution_space_dim == 0 and verdict.witness is None


def test_sah_fails_on_zero_matrix_with_witness():
    A = np.zeros((3, 3))
    verdict = check_sah(A)
    assert not verdict.holds
    assert verdict.solution_space_dim == 3
    assert _witness_ok(A, verdict.witness)


def test_sah_fails_on_block_nullities():
    # two components with nullity each: X couples their kernels
    A = np.zeros((4, 4))
    A[:2, :2] = 1.0
    A[2:, 2:] = 1.0
    verdict = check_sah(A)
    assert not verdict.holds
    assert _witness_ok(A, verdict.witness)


def test_sah_system_columns():
    M, pairs = sah_system(P3_MATRIX)
    assert pairs == [(0, 2)]
    X = np.zeros((3, 3))
    X[0, 2] = X[2, 0] = 1.0
    assert np.allclose(M[:, 0], (P3_MATRIX @ X).ravel())


def _integer_corpus(rng, n):
    for _ in range(n):
        v = int(rng.integers(1, 7))
        B = rng.integers(-2, 3, size=(v, v)) * (rng.random((v, v)) < 0.5)
        A = np.triu(B) + np.triu(B, 1).T
        if v > 1 and rng.random() < 0.5:
            # make singular through a repeated row/column to exercise nullity
            i, j = rng.choice(v, 2, replace=False)
            A[j, :] = A[i, :]
            A[:, j] = A[:, i]
            A[j, j] = A[i, i]
        yield A


def test_sah_matches_exact_oracle():
    rng = np.random.default_rng(8)
    failures = holds_seen = 0
    for A in _integer_corpus(rng, 800):
        exact = sah_solution_dim_exact(A.astype(int).tolist())
        verdict = check_sah(A)
        if verdict.solution_space_dim != exact:
            failures += 1
        holds_seen += verdict.holds
    assert failures == 0
    assert 0 < holds_seen < 800


@pytest.mark.parametrize("v,r,T,N", [(3, 2, 5, 1)])
def test_dims_small_example(v, r, T, N):
    A = np.diag([1.0, 2.0, 0.0])
    dims = tangent_normal_dims(A)
    assert (dims.dim_T_R, dims.dim_N_R) == (T, N)
    assert dims.dim_T_R + dims.dim_N_R == v * (v + 1) // 2


def test_dims_all_ones():
    dims = tangent_normal_dims(np.ones((5, 5)))
    assert (dims.dim_N_R, dims.dim_T_R) == (10, 5)


def test_dims_pattern_of_path():
    from minrank.linalg import random_matrix_with_pattern

    dims = tangent_normal_dims(random_matrix_with_pattern(path_graph(4), 3))
    assert dims.dim_T_S == 7
    assert dims.dim_T_S + dims.dim_N_S == 10


@given(st.integers(1, 12), st.integers(0, 2**32))
@settings(max_examples=200, deadline=None)
def test_dims_identity_property(v, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, v + 1))
    X = rng.standard_normal((v, r))
    A = X @ np.diag(rng.choice([-1.0, 1.0], r)) @ X.T
    dims = tangent_normal_dims(A)
    assert dims.dim_T_R + dims.dim_N_R == v * (v + 1) // 2
    assert dims.dim_N_R == (v - r) * (v - r + 1) // 2


@pytest.mark.parametrize("n", [2, 4, 6])
def test_certificate_complete_graph(n):
    cert = xi_certificate_search(complete_graph(n), trials=2)
    assert cert.nullity == n - 1
    assert cert.sah.holds


def test_certificate_single_vertex():
    # the 1x1 zero matrix: nullity 1, no free SAH unknowns
    cert = xi_certificate_search(complete_graph(1), trials=1)
    assert cert.nullity == 1 and cert.sah.holds


@pytest.mark.parametrize(
    "G,xi",
    [
        (path_graph(3), 1),
        (path_graph(6), 1),
        (cycle_graph(5), 2),
        (cycle_graph(7), 2),
        (complete_bipartite_graph(3, 3), 4),
    ],
)
def test_certificate_reaches_known_xi(G, xi):
    cert = xi_certificate_search(G, trials=4, seed=1)
    assert cert.nullity == xi
    assert cert.sah.holds
    assert pattern_of_matrix(cert.matrix) == G
    assert numeric_rank_nullity(cert.matrix).nullity == cert.nullity
    assert vertex_connectivity(G) <= cert.nullity


def test_k33_certificate_and_edge_equality():
    cert = xi_certificate_search(complete_bipartite_graph(3, 3), trials=2)
    assert cert.nullity == 4
    check = verify_xi_edge_inequality(cert)
    assert check.holds and check.lhs == 10 and check.e == 9
    assert check.lhs == check.e + 1
    assert check.bipartite and not check.strict_holds


def test_k5_strict_form():
    cert = xi_certificate_search(complete_graph(5), trials=1)
    check = verify_xi_edge_inequality(cert)
    assert check.lhs == 10 and check.e == 10
    assert check.strict_holds and check.strict_expected


def test_edgeless_certificate():
    for n in (1, 4):
        cert = xi_certificate_search(empty_graph(n), trials=2)
        assert cert.nullity == 1
        assert verify_xi_edge_inequality(cert).holds


def test_disjoint_union_takes_max():
    pairs = [
        (cycle_graph(5), path_graph(3)),
        (complete_graph(4), cycle_graph(6)),
        (path_graph(2), path_graph(4)),
        (complete_bipartite_graph(3, 3), complete_graph(3)),
    ]
    for G, H in pairs:
        a = xi_certificate_search(G, trials=3, seed=2).nullity
        b = xi_certificate_search(H, trials=3, seed=2).nullity
        U = disjoint_union(G, H)
        cert = xi_certificate_search(U, trials=3, seed=2)
        assert cert.nullity == max(a, b)
        assert cert.sah.holds and pattern_of_matrix(cert.matrix) == U


def test_search_rejects_zero_trials():
    with pytest.raises(ParameterError):
        xi_certificate_search(path_graph(3), trials=0)


def test_edge_inequality_over_random_graphs():
    rng = np.random.default_rng(21)
    violations = strict_violations = 0
    for _ in range(150):
        v = int(rng.integers(1, 13))
        G = sample_gnp(GnpModel(v, float(rng.uniform(0.1, 0.9)), int(rng.integers(2**32))))
        cert = xi_certificate_search(G, trials=1, seed=int(rng.integers(2**32)))
        check = verify_xi_edge_inequality(cert)
        violations += not check.holds
        if check.strict_expected and not check.zero_diagonal:
            strict_violations += not check.strict_holds
    assert violations == 0
    assert strict_violations == 0


def test_certificate_serialization():
    cert = xi_certificate_search(cycle_graph(5), trials=1)
    A, meta = parse_matrix(format_certificate(cert))
    assert np.array_equal(A, cert.matrix)
    assert meta["nullity"] == str(cert.nullity) and meta["sah_holds"] == "True"


def test_petersen_certificate_bounds():
    G = petersen_graph()
    cert = xi_certificate_search(G, trials=2)
    assert 3 <= cert.nullity <= 5
    assert isinstance(cert, XiCertificate)
