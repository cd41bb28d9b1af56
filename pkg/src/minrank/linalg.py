"""Dense symmetric eigensolvers, tolerance-based rank, and the pattern graph G(A)."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericError, ParameterError
from .graph_core import LabeledGraph

__all__ = [
    "DEFAULT_REL_TOL",
    "RankProfile",
    "as_sym_matrix",
    "jacobi_eigh",
    "sym_eigen",
    "numeric_rank_nullity",
    "pattern_of_matrix",
    "random_matrix_with_pattern",
    "format_matrix",
    "parse_matrix",
    "read_matrix",
    "write_matrix",
]

DEFAULT_REL_TOL = 1e-8


def as_sym_matrix(a) -> np.ndarray:
    """Validate a real symmetric matrix and return a float64 copy stored exactly symmetric."""
    A = np.array(a, dtype=np.float64, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ParameterError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.T).max() > 1e-12 * scale:
        raise ParameterError("matrix is not symmetric")
    return (A + A.T) / 2


def _round_robin(n):
    # circle method: every pair (p, q) meets exactly once in m-1 rounds
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[k], players[m - 1 - k]) for k in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            p, q = np.array(pairs).T
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(A, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition with a parallel (round-robin) ordering.

    Each round applies n/2 disjoint plane rotations at once; a sweep visits
    every off-diagonal pair once.  Returns ascending eigenvalues and the
    matching orthonormal eigenvectors as columns.
    """
    A = as_sym_matrix(A)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    rounds = _round_robin(n)
    norm = np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= 1e-15 * norm or off == 0.0:
            break
        for p, q in rounds:
            apq = A[p, q]
            live = apq != 0.0
            if not live.any():
                continue
            theta = np.zeros_like(apq)
            theta[live] = (A[q, q][live] - A[p, p][live]) / (2.0 * apq[live])
            t = np.where(live, np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
            t[live & (theta == 0.0)] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(n)
            J[p, p] = c
            J[q, q] = c
            J[p, q] = s
            J[q, p] = -s
            A = J.T @ A @ J
            A = (A + A.T) / 2
            V = V @ J
    else:
        raise NumericError("Jacobi iteration did not converge")
    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def sym_eigen(A, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix.

    ``method="jacobi"`` uses the in-package cyclic Jacobi solver;
    ``"lapack"`` (default) calls the LAPACK symmetric driver, which is much
    faster inside iterative loops.
    """
    A = as_sym_matrix(A)
    if method == "jacobi":
        return jacobi_eigh(A)
    if method == "lapack":
        w, Q = np.linalg.eigh(A)
        return w, Q
    raise ParameterError(f"unknown eigensolver {method!r}")


@dataclass(frozen=True)
class RankProfile:
    rank: int
    nullity: int
    eigenvalues: tuple[float, ...]
    tolerance: float


def numeric_rank_nullity(A, rel_tol: float = DEFAULT_REL_TOL, method: str = "lapack") -> RankProfile:
    """Rank counts eigenvalues with |lambda| > rel_tol * max(1, max|lambda|)."""
    if not rel_tol > 0:
        raise ParameterError("rel_tol must be positive")
    w, _ = sym_eigen(A, method=method)
    threshold = rel_tol * max(1.0, float(np.abs(w).max()))
    rank = int(np.count_nonzero(np.abs(w) > threshold))
    return RankProfile(rank, len(w) - rank, tuple(w.tolist()), threshold)


def pattern_of_matrix(A, rel_tol: float = DEFAULT_REL_TOL) -> LabeledGraph:
    """G(A): {i, j} is an edge iff |a_ij| > rel_tol * max(1, max|a|); the diagonal is ignored."""
    if not rel_tol > 0:
        raise ParameterError("rel_tol must be positive")
    A = as_sym_matrix(A)
    threshold = rel_tol * max(1.0, float(np.abs(A).max()))
    adj = np.abs(A) > threshold
    np.fill_diagonal(adj, False)
    return LabeledGraph(adj)


def _signed_uniform(rng, size):
    # magnitudes uniform on [0.1, 1], random sign
    mag = rng.uniform(0.1, 1.0, size=size)
    return np.where(rng.random(size) < 0.5, -mag, mag)


def random_matrix_with_pattern(G: LabeledGraph, seed=0, diagonal_mode: str = "free") -> np.ndarray:
    """Random symmetric matrix whose off-diagonal support is exactly E(G).

    Nonzero entries are drawn from [-1, -0.1] U [0.1, 1].  The diagonal is
    drawn the same way in mode ``"free"`` and is zero in mode ``"zero"``.
    """
    if diagonal_mode not in ("free", "zero"):
        raise ParameterError(f"diagonal_mode must be 'free' or 'zero', got {diagonal_mode!r}")
    rng = np.random.default_rng(seed)
    v = G.v
    A = np.zeros((v, v))
    iu = np.triu_indices(v, 1)
    vals = _signed_uniform(rng, len(iu[0]))
    A[iu] = np.where(G.adjacency[iu], vals, 0.0)
    A += A.T
    diag = _signed_uniform(rng, v)
    if diagonal_mode == "free":
        A[np.diag_indices(v)] = diag
    return A


# -- dense text format -----------------------------------------------------

def format_matrix(A, metadata: dict | None = None) -> str:
    """First line ``v``, then v whitespace-separated rows.  Metadata goes in leading ``#`` lines."""
    A = np.asarray(A, dtype=float)
    lines = [f"# {k}: {val}" for k, val in (metadata or {}).items()]
    lines.append(str(A.shape[0]))
    lines += [" ".join(repr(float(x)) for x in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[np.ndarray, dict]:
    meta = {}
    rows = []
    for ln in text.splitlines():
        s = ln.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, _, val = s[1:].partition(":")
            meta[key.strip()] = val.strip()
            continue
        rows.append(s.split())
    if not rows or len(rows[0]) != 1:
        raise DataError("matrix file must start with a single 'v' line")
    try:
        v = int(rows[0][0])
        body = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise DataError(f"malformed matrix file: {exc}") from None
    if body.shape != (v, v):
        raise DataError(f"expected {v}x{v} entries, got shape {body.shape}")
    return body, meta


def read_matrix(path) -> tuple[np.ndarray, dict]:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(A, path, metadata: dict | None = None) -> None:
    text = format_matrix(A, metadata)
    if isinstance(path, io.TextIOBase):
        path.write(text)
        return
    with open(os.fspath(path), "w") as fh:
        fh.write(text)
