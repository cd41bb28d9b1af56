"""Strong Arnold Hypothesis checks, tangent/normal dimensions and xi lower-bound certificates.

A symmetric A has the SAH when the only symmetric X with AX = 0,
A o X = 0 and I o X = 0 is X = 0.  The last two conditions leave one free
unknown x_ij = x_ji per non-adjacent pair i < j of G(A), so the SAH is the
statement that the linear map (x_ij) -> AX is injective.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bounds_engine import construct_faithful_rep, gram_psd
from .errors import DataError, ParameterError
from .graph_core import LabeledGraph, vertex_connectivity
from .linalg import (
    DEFAULT_REL_TOL,
    as_sym_matrix,
    numeric_rank_nullity,
    pattern_of_matrix,
    random_matrix_with_pattern,
)

__all__ = [
    "SahVerdict",
    "XiCertificate",
    "TangentNormalDims",
    "XiEdgeCheck",
    "sah_system",
    "check_sah",
    "tangent_normal_dims",
    "xi_certificate_search",
    "verify_xi_edge_inequality",
    "format_certificate",
]


@dataclass(frozen=True)
class SahVerdict:
    holds: bool
    witness: np.ndarray | None
    solution_space_dim: int


@dataclass(frozen=True)
class XiCertificate:
    graph: LabeledGraph
    matrix: np.ndarray
    nullity: int
    sah: SahVerdict
    construction: str = ""


@dataclass(frozen=True)
class TangentNormalDims:
    dim_T_R: int
    dim_N_R: int
    dim_T_S: int
    dim_N_S: int


@dataclass(frozen=True)
class XiEdgeCheck:
    holds: bool  # nullity (nullity + 1) / 2 <= e + 1
    strict_holds: bool  # nullity (nullity + 1) / 2 <= e
    lhs: int
    e: int
    bipartite: bool
    connected: bool
    zero_diagonal: bool

    @property
    def strict_expected(self) -> bool:
        # the form without the +1 is guaranteed for connected non-bipartite graphs
        return self.connected and not self.bipartite

    def __bool__(self):
        return self.holds


def sah_system(A, rel_tol: float = DEFAULT_REL_TOL) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Coefficient matrix of X -> AX in the unknowns x_ij, {i, j} a non-edge of G(A).

    Column k corresponds to X = E_ij + E_ji for the k-th non-adjacent pair;
    rows index the v^2 entries of AX.
    """
    A = as_sym_matrix(A)
    v = A.shape[0]
    G = pattern_of_matrix(A, rel_tol)
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v) if not G.adjacency[i, j]]
    M = np.zeros((v, v, len(pairs)))
    for k, (i, j) in enumerate(pairs):
        # A (E_ij + E_ji): column j gets A[:, i], column i gets A[:, j]
        M[:, j, k] = A[:, i]
        M[:, i, k] = A[:, j]
    return M.reshape(v * v, len(pairs)), pairs


def check_sah(A, rel_tol: float = DEFAULT_REL_TOL) -> SahVerdict:
    """Decide the SAH by the numerical nullity of the constraint system.

    Singular values at or below rel_tol * max(1, sigma_max) count as zero.
    When the SAH fails the witness is the symmetric X built from a null vector.
    """
    A = as_sym_matrix(A)
    v = A.shape[0]
    M, pairs = sah_system(A, rel_tol)
    if not pairs:
        return SahVerdict(True, None, 0)
    _, s, Vt = scipy.linalg.svd(M, full_matrices=True, lapack_driver="gesvd")
    threshold = rel_tol * max(1.0, float(s.max()) if s.size else 0.0)
    rank = int(np.count_nonzero(s > threshold))
    dim = len(pairs) - rank
    if dim == 0:
        return SahVerdict(True, None, 0)
    x = Vt[-1]
    X = np.zeros((v, v))
    for val, (i, j) in zip(x, pairs):
        X[i, j] = X[j, i] = val
    return SahVerdict(False, X, dim)


def tangent_normal_dims(A, rel_tol: float = DEFAULT_REL_TOL) -> TangentNormalDims:
    """Dimensions of tangent and normal spaces of the rank and pattern manifolds at A.

    With r = rank A, q = v - r:  dim N_R = q(q+1)/2, dim T_R = v r - r(r-1)/2,
    dim T_S = e(G(A)) + v, dim N_S = v(v+1)/2 - dim T_S.
    """
    A = as_sym_matrix(A)
    v = A.shape[0]
    prof = numeric_rank_nullity(A, rel_tol)
    r, q = prof.rank, prof.nullity
    total = v * (v + 1) // 2
    dims = TangentNormalDims(
        dim_T_R=v * r - r * (r - 1) // 2,
        dim_N_R=q * (q + 1) // 2,
        dim_T_S=pattern_of_matrix(A, rel_tol).e + v,
        dim_N_S=total - (pattern_of_matrix(A, rel_tol).e + v),
    )
    if dims.dim_T_R + dims.dim_N_R != total:
        raise DataError("tangent and normal dimensions of the rank manifold do not add up")
    return dims


# -- certificate search ---------------------------------------------------------

def _bipartition_if_complete_bipartite(G):
    if not (G.is_connected and G.is_bipartite) or G.v < 2:
        return None
    color = np.full(G.v, -1)
    color[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for w in G.neighbors(u):
            if color[w] < 0:
                color[w] = 1 - color[u]
                stack.append(w)
    left = np.flatnonzero(color == 0)
    right = np.flatnonzero(color == 1)
    if G.e != len(left) * len(right):
        return None
    return left, right


def _candidates(G, trials, rng, rel_tol):
    """Yield (label, matrix) pairs whose pattern is G."""
    v = G.v
    if v == 1:
        yield "zero 1x1", np.zeros((1, 1))
    if G.is_complete:
        yield "all-ones", np.ones((v, v))
    parts = _bipartition_if_complete_bipartite(G)
    if parts is not None:
        left, right = parts
        B = np.zeros((v, v))
        B[np.ix_(left, right)] = 1.0
        B[np.ix_(right, left)] = 1.0
        yield "complete bipartite rank 2", B
    kappa = vertex_connectivity(G)
    if v - kappa >= 1:
        rep = construct_faithful_rep(G, v - kappa, restarts=10, seed=rng.integers(2**63), tol=rel_tol)
        if rep is not None:
            yield "faithful representation Gram", gram_psd(rep)
    for _ in range(trials):
        for mode in ("free", "zero"):
            A = random_matrix_with_pattern(G, rng.integers(2**63), mode)
            yield f"random ({mode} diagonal)", A
            w = np.linalg.eigvalsh(A)
            for lam in w[rng.permutation(v)[: min(v, 4)]]:
                yield f"random ({mode} diagonal) shifted", A - lam * np.eye(v)


def _search_connected(G, trials, rng, rel_tol):
    best = None
    for label, A in _candidates(G, trials, rng, rel_tol):
        if pattern_of_matrix(A, rel_tol) != G:
            continue
        q = numeric_rank_nullity(A, rel_tol).nullity
        if best is not None and q <= best.nullity:
            continue
        verdict = check_sah(A, rel_tol)
        if verdict.holds:
            best = XiCertificate(G, as_sym_matrix(A), q, verdict, label)
    return best


def xi_certificate_search(G: LabeledGraph, trials: int = 8, seed=0, rel_tol: float = DEFAULT_REL_TOL) -> XiCertificate:
    """Largest-nullity SAH matrix with pattern G among structured and random candidates.

    The certified nullity is a lower bound on xi(G).  Disconnected graphs are
    searched one component at a time; the best component matrix is placed
    next to nonsingular matrices on the other components, which keeps the
    SAH, so the certificate attains the maximum over components.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    comps = G.components
    if len(comps) == 1:
        best = _search_connected(G, trials, rng, rel_tol)
        if best is None:
            raise DataError(f"no SAH matrix found for {G.graph_id}")
        return best
    per_comp = []
    for comp in comps:
        H = G.subgraph(comp)
        cert = _search_connected(H, trials, np.random.default_rng(rng.integers(2**63)), rel_tol)
        if cert is None:
            raise DataError(f"no SAH matrix found for a component of {G.graph_id}")
        per_comp.append(cert)
    top = max(range(len(comps)), key=lambda k: per_comp[k].nullity)
    A = np.zeros((G.v, G.v))
    for k, comp in enumerate(comps):
        idx = np.ix_(comp, comp)
        if k == top:
            A[idx] = per_comp[k].matrix
            continue
        H = G.subgraph(comp)
        for _ in range(100):
            block = random_matrix_with_pattern(H, rng.integers(2**63), "free")
            if numeric_rank_nullity(block, rel_tol).nullity == 0:
                break
        else:
            raise DataError("could not draw a nonsingular component matrix")
        A[idx] = block
    q = numeric_rank_nullity(A, rel_tol).nullity
    verdict = check_sah(A, rel_tol)
    if not verdict.holds or pattern_of_matrix(A, rel_tol) != G:
        raise DataError(f"assembled disjoint-union certificate failed for {G.graph_id}")
    return XiCertificate(G, A, q, verdict, f"component {top}: {per_comp[top].construction}")


def verify_xi_edge_inequality(cert: XiCertificate) -> XiEdgeCheck:
    """Check nullity (nullity + 1) / 2 <= e(G) + 1 for an SAH certificate.

    Also reports the form without the +1, which is guaranteed when G is
    connected and not bipartite.
    """
    G = cert.graph
    q = cert.nullity
    lhs = q * (q + 1) // 2
    return XiEdgeCheck(
        holds=lhs <= G.e + 1,
        strict_holds=lhs <= G.e,
        lhs=lhs,
        e=G.e,
        bipartite=G.is_bipartite,
        connected=G.is_connected,
        zero_diagonal=bool(np.all(np.diag(cert.matrix) == 0)),
    )


def format_certificate(cert: XiCertificate) -> str:
    """Matrix text preceded by ``#`` metadata lines, for audit."""
    from .linalg import format_matrix

    check = verify_xi_edge_inequality(cert)
    meta = {
        "graph": cert.graph.graph_id,
        "v": cert.graph.v,
        "e": cert.graph.e,
        "nullity": cert.nullity,
        "sah_holds": cert.sah.holds,
        "sah_solution_dim": cert.sah.solution_space_dim,
        "construction": cert.construction,
        "xi_edge_inequality": check.holds,
    }
    return format_matrix(cert.matrix, meta)
