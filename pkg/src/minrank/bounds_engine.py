"""Per-graph bound sandwich for mr(G) and M(G) = v - mr(G).

Lower bound: mr(G) >= v - Z(G) with Z the zero forcing number (M <= Z).
Upper bounds: mr(G) <= mr_+(G) <= v - kappa(G), numeric realizations found
by alternating projections, and explicit matrices (xi certificates).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import xi_edge_upper
from .errors import DataError, ParameterError, SizeLimitError
from .graph_core import LabeledGraph, graph_stats, vertex_connectivity
from .linalg import (
    DEFAULT_REL_TOL,
    numeric_rank_nullity,
    pattern_of_matrix,
    random_matrix_with_pattern,
)

__all__ = [
    "OrthogonalRep",
    "BoundConfig",
    "BoundReport",
    "forcing_closure",
    "zero_forcing_number",
    "greedy_zero_forcing_set",
    "minrank_upper_numeric",
    "verify_faithful_rep",
    "gram_psd",
    "construct_faithful_rep",
    "assemble_bound_report",
]

ZF_EXACT_MAX_V = 40
ZF_DEFAULT_BUDGET = 2_000_000


# -- zero forcing ---------------------------------------------------------------

def forcing_closure(G: LabeledGraph, filled: int) -> int:
    """Bitmask closure of ``filled`` under the forcing rule.

    A filled vertex with exactly one unfilled neighbour fills it.
    """
    nbr = G.neighbor_masks
    changed = True
    while changed:
        changed = False
        todo = filled
        while todo:
            low = todo & -todo
            todo ^= low
            open_ = nbr[low.bit_length() - 1] & ~filled
            if open_ and open_ & (open_ - 1) == 0:
                filled |= open_
                changed = True
    return filled


def zero_forcing_number(G: LabeledGraph, budget: int = ZF_DEFAULT_BUDGET) -> int:
    """Exact Z(G) by iterative deepening over initial set sizes.

    Sizes below the minimum degree are skipped (Z >= delta).  Raises
    SizeLimitError for v > 40 or when more than ``budget`` closures would be
    needed.
    """
    v = G.v
    if v > ZF_EXACT_MAX_V:
        raise SizeLimitError(f"exact zero forcing limited to v <= {ZF_EXACT_MAX_V}, got {v}")
    full = (1 << v) - 1
    if G.e == 0:
        return v
    spent = 0
    start = max(1, int(G.degrees.min()))
    for k in range(start, v + 1):
        if spent + math.comb(v, k) > budget:
            raise SizeLimitError(f"zero forcing search over size {k} exceeds budget {budget}")
        for combo in itertools.combinations(range(v), k):
            spent += 1
            if forcing_closure(G, sum(1 << i for i in combo)) == full:
                return k
    return v


def greedy_zero_forcing_set(G: LabeledGraph, seed=0, rounds: int = 4) -> list[int]:
    """A zero forcing set (not necessarily minimum) found by randomized greedy growth.

    Each round repeatedly adds the unfilled vertex that leaves some filled
    vertex with the fewest unfilled neighbours, then re-closes; ties are
    broken at random.  A final pass drops redundant vertices.  The smallest
    set over ``rounds`` is returned.  Its size is an upper bound on Z(G).
    """
    rng = np.random.default_rng(seed)
    v = G.v
    full = (1 << v) - 1
    nbr = G.neighbor_masks
    best = None
    for _ in range(rounds):
        chosen = 0
        filled = 0
        while filled != full:
            candidates = []
            best_open = v + 1
            todo = filled
            while todo:
                low = todo & -todo
                todo ^= low
                open_ = nbr[low.bit_length() - 1] & ~filled
                n_open = open_.bit_count()
                if 0 < n_open < best_open:
                    best_open, candidates = n_open, [open_]
                elif n_open == best_open:
                    candidates.append(open_)
            if candidates:
                pool = candidates[rng.integers(len(candidates))]
            else:
                pool = full & ~filled
            bits = [i for i in range(v) if pool >> i & 1]
            pick = bits[rng.integers(len(bits))]
            chosen |= 1 << pick
            filled = forcing_closure(G, filled | (1 << pick))
        for i in rng.permutation(v).tolist():
            if chosen >> i & 1 and forcing_closure(G, chosen & ~(1 << i)) == full:
                chosen &= ~(1 << i)
        members = [i for i in range(v) if chosen >> i & 1]
        if best is None or len(members) < len(best):
            best = members
    return best


# -- alternating projections ---------------------------------------------------

def _project_to_rank(G, target_rank, rng, rel_tol, max_iter, floor, mode="free"):
    v = G.v
    edge = G.adjacency
    off = ~np.eye(v, dtype=bool)
    A = random_matrix_with_pattern(G, rng.integers(2**63), mode)
    A /= np.abs(A).max()
    for _ in range(max_iter):
        w, Q = np.linalg.eigh(A)
        keep = np.argsort(-np.abs(w), kind="stable")[:target_rank]
        B = (Q[:, keep] * w[keep]) @ Q[:, keep].T
        B[off & ~edge] = 0.0
        scale = np.abs(B).max()
        if scale == 0.0:
            return None
        B /= scale
        weak = edge & (np.abs(B) < floor)
        B[weak] = np.where(A[weak] < 0, -floor, floor)
        B = (B + B.T) / 2
        A = B
        tail = np.sort(np.abs(np.linalg.eigvalsh(A)))[::-1][target_rank:]
        if tail.size == 0 or tail.max() <= rel_tol * max(1.0, np.abs(w).max()):
            break
    prof = numeric_rank_nullity(A, rel_tol)
    if prof.rank > target_rank or pattern_of_matrix(A, rel_tol) != G:
        return None
    return prof.rank, A


def minrank_upper_numeric(
    G: LabeledGraph,
    target_rank: int,
    restarts: int = 8,
    seed=0,
    rel_tol: float = DEFAULT_REL_TOL,
    max_iter: int = 2000,
    floor: float = 0.05,
    sweep: bool = True,
    return_matrix: bool = False,
    min_rank: int = 1,
):
    """Certified upper bound on mr(G) from alternating projections, or None.

    Alternates between truncation to the ``target_rank`` eigenvalues of
    largest magnitude and restoration of the pattern (non-edges zeroed,
    edge entries kept at least ``floor`` times the largest entry, diagonal
    free).  A bound is returned only for a matrix whose pattern is exactly
    G and whose numeric rank is at most the target.  With ``sweep`` every
    lower target down to ``min_rank`` is tried as well; a failure at one
    target does not stop the sweep, since success is not monotone in the
    target for a heuristic.
    """
    if not (1 <= target_rank <= G.v):
        raise ParameterError(f"target_rank must lie in [1, {G.v}]")
    rng = np.random.default_rng(seed)
    best = None
    r = target_rank
    while r >= max(1, min_rank):
        found = None
        for k in range(restarts):
            # alternate free and zero starting diagonals
            mode = "zero" if k % 2 else "free"
            found = _project_to_rank(G, r, rng, rel_tol, max_iter, floor, mode)
            if found is not None:
                break
        if found is not None:
            best = found
            r = found[0]
        if not sweep:
            break
        r -= 1
    if best is None:
        return None
    return best if return_matrix else best[0]


# -- orthogonal representations ------------------------------------------------

@dataclass(frozen=True)
class OrthogonalRep:
    vectors: np.ndarray  # shape (v, d), row i belongs to vertex i

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


def verify_faithful_rep(rep: OrthogonalRep, G: LabeledGraph, tol: float = DEFAULT_REL_TOL) -> bool:
    """True iff |<u_i, u_j>| <= tol exactly on non-edges and > tol on edges (i != j)."""
    U = np.asarray(rep.vectors, dtype=float)
    if U.ndim != 2 or U.shape[0] != G.v:
        raise ParameterError(f"representation has {U.shape[0]} vectors for a graph on {G.v} vertices")
    gram = np.abs(U @ U.T)
    off = ~np.eye(G.v, dtype=bool)
    adj = G.adjacency
    return bool(np.all(gram[off & adj] > tol) and np.all(gram[off & ~adj] <= tol))


def gram_psd(rep: OrthogonalRep, G: LabeledGraph | None = None, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Gram matrix of the representation; with ``G``, check that its pattern is G."""
    U = np.asarray(rep.vectors, dtype=float)
    A = U @ U.T
    A = (A + A.T) / 2
    if G is not None and pattern_of_matrix(A, rel_tol) != G:
        raise DataError("Gram matrix pattern differs from the graph")
    return A


def construct_faithful_rep(G: LabeledGraph, d: int, restarts: int = 20, seed=0, tol: float = DEFAULT_REL_TOL):
    """Randomized sequential faithful orthogonal representation in R^d, or None.

    Vertices are placed in random order; each gets a Gaussian vector
    projected onto the orthogonal complement of its already placed
    non-neighbours, normalized to unit length.
    """
    if d < 1:
        raise ParameterError("d must be >= 1")
    rng = np.random.default_rng(seed)
    v = G.v
    adj = G.adjacency
    for _ in range(restarts):
        U = np.zeros((v, d))
        placed: list[int] = []
        ok = True
        for i in rng.permutation(v).tolist():
            blockers = [j for j in placed if not adj[i, j]]
            g = rng.standard_normal(d)
            if blockers:
                W = U[blockers].T
                # orthonormal basis of span(W) via SVD
                Ub, s, _ = np.linalg.svd(W, full_matrices=False)
                basis = Ub[:, s > 1e-10 * max(1.0, s.max())]
                if basis.shape[1] >= d:
                    ok = False
                    break
                g = g - basis @ (basis.T @ g)
            norm = np.linalg.norm(g)
            if norm < 1e-12:
                ok = False
                break
            U[i] = g / norm
            placed.append(i)
        if ok:
            rep = OrthogonalRep(U)
            if verify_faithful_rep(rep, G, tol):
                return rep
    return None


# -- report --------------------------------------------------------------------

@dataclass(frozen=True)
class BoundConfig:
    rel_tol: float = DEFAULT_REL_TOL
    seed: int = 0
    zero_forcing: bool = True
    zf_budget: int = ZF_DEFAULT_BUDGET
    numeric_minrank: bool = True
    numeric_restarts: int = 4
    numeric_max_iter: int = 2000
    faithful_rep: bool = True
    faithful_restarts: int = 20
    sah_search: bool = False
    xi_trials: int = 8


@dataclass
class BoundReport:
    graph_id: str
    v: int
    e: int
    delta: int
    kappa: int
    zero_forcing: int | None
    zero_forcing_exact: bool
    mr_lower: int
    mr_lower_provenance: str
    mr_upper_kappa: int
    mr_upper_numeric: int | None
    mrplus_upper: int
    mrplus_constructive: bool | None
    xi_edge_upper: int
    xi_certified: int | None
    nu_interval: tuple[int, int]
    flags: list[str] = field(default_factory=list)

    @property
    def mr_upper(self) -> int:
        ups = [self.mr_upper_kappa] + ([self.mr_upper_numeric] if self.mr_upper_numeric is not None else [])
        return min(ups)

    @property
    def M_lower(self) -> int:
        return self.v - self.mr_upper

    @property
    def M_upper(self) -> int:
        return self.v - self.mr_lower

    @property
    def M_lower_kappa(self) -> int:
        return self.v - self.mr_upper_kappa

    @property
    def closed(self) -> bool:
        return self.mr_lower == self.mr_upper

    @property
    def mr_exact(self) -> int | None:
        return self.mr_lower if self.closed else None

    @property
    def delta_conjecture(self) -> str:
        """Status of delta(G) <= M(G) given the sandwich: confirmed, undecided or refuted."""
        if self.delta <= self.M_lower:
            return "confirmed"
        if self.delta > self.M_upper:
            return "refuted"
        return "undecided"

    def check(self) -> None:
        """Raise DataError if the report is internally inconsistent."""
        if self.mr_lower > self.mr_upper:
            raise DataError(f"{self.graph_id}: mr_lower {self.mr_lower} > mr_upper {self.mr_upper}")
        if self.mr_upper_kappa != self.v - self.kappa:
            raise DataError(f"{self.graph_id}: mr_upper_kappa != v - kappa")
        if self.kappa > self.M_lower_kappa:
            raise DataError(f"{self.graph_id}: kappa exceeds M_+ lower bound")
        if self.xi_certified is not None and self.xi_certified > self.M_upper:
            raise DataError(f"{self.graph_id}: certified xi exceeds M upper bound")

    def as_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "v": self.v,
            "e": self.e,
            "delta": self.delta,
            "kappa": self.kappa,
            "Z": self.zero_forcing,
            "Z_exact": self.zero_forcing_exact,
            "mr_lower": self.mr_lower,
            "mr_lower_provenance": self.mr_lower_provenance,
            "mr_upper_kappa": self.mr_upper_kappa,
            "mr_upper_numeric": self.mr_upper_numeric,
            "mr_upper": self.mr_upper,
            "mrplus_upper": self.mrplus_upper,
            "mrplus_constructive": self.mrplus_constructive,
            "M_lower": self.M_lower,
            "M_upper": self.M_upper,
            "mr_exact": self.mr_exact,
            "xi_edge_upper": self.xi_edge_upper,
            "xi_certified": self.xi_certified,
            "nu_lower": self.nu_interval[0],
            "nu_upper": self.nu_interval[1],
            "delta_conjecture": self.delta_conjecture,
            "flags": ";".join(self.flags),
        }


def assemble_bound_report(G: LabeledGraph, config: BoundConfig | None = None) -> BoundReport:
    """Run every per-graph bound and combine them into a checked BoundReport.

    Degraded components (greedy Z, failed constructions) are recorded in
    ``flags`` rather than silently dropped.
    """
    cfg = config or BoundConfig()
    seeds = np.random.SeedSequence(cfg.seed).generate_state(4, np.uint64).tolist()
    stats = graph_stats(G)
    v = G.v
    kappa = vertex_connectivity(G)
    flags: list[str] = []

    Z, z_exact = None, False
    if cfg.zero_forcing:
        try:
            Z = zero_forcing_number(G, cfg.zf_budget)
            z_exact = True
            mr_lower, prov = v - Z, "zero forcing (exact Z)"
        except SizeLimitError:
            Z = len(greedy_zero_forcing_set(G, seeds[0]))
            flags.append("Z_greedy")
            mr_lower, prov = v - Z, "zero forcing (greedy upper bound on Z)"
    else:
        mr_lower, prov = (1 if G.e else 0), "trivial"
    mr_lower = max(mr_lower, 1 if G.e else 0)

    mr_upper_kappa = v - kappa
    numeric = None
    if G.e == 0:
        numeric = 0  # the zero matrix
    elif cfg.numeric_minrank and mr_upper_kappa - 1 >= max(mr_lower, 1):
        numeric = minrank_upper_numeric(
            G,
            mr_upper_kappa - 1,
            restarts=cfg.numeric_restarts,
            seed=seeds[1],
            rel_tol=cfg.rel_tol,
            max_iter=cfg.numeric_max_iter,
            min_rank=max(mr_lower, 1),
        )

    constructive = None
    if cfg.faithful_rep and v - kappa >= 1:
        rep = construct_faithful_rep(G, v - kappa, cfg.faithful_restarts, seeds[2], cfg.rel_tol)
        constructive = rep is not None
        if rep is None:
            flags.append("faithful_rep_not_found")
        else:
            rank = numeric_rank_nullity(gram_psd(rep, G, cfg.rel_tol), cfg.rel_tol).rank
            if rank > v - kappa:
                raise DataError(f"{G.graph_id}: faithful representation Gram rank exceeds v - kappa")

    xi_cert = None
    if cfg.sah_search:
        from .sah_xi import xi_certificate_search

        cert = xi_certificate_search(G, cfg.xi_trials, seeds[3], cfg.rel_tol)
        xi_cert = cert.nullity
        realized = v - cert.nullity
        if numeric is None or realized < numeric:
            if realized < mr_upper_kappa:
                numeric = realized

    xi_up = xi_edge_upper(G.e)
    M_upper = v - mr_lower
    report = BoundReport(
        graph_id=G.graph_id,
        v=v,
        e=G.e,
        delta=stats.delta,
        kappa=kappa,
        zero_forcing=Z,
        zero_forcing_exact=z_exact,
        mr_lower=mr_lower,
        mr_lower_provenance=prov,
        mr_upper_kappa=mr_upper_kappa,
        mr_upper_numeric=numeric,
        mrplus_upper=mr_upper_kappa,
        mrplus_constructive=constructive,
        xi_edge_upper=xi_up,
        xi_certified=xi_cert,
        nu_interval=(kappa, min(xi_up, M_upper)),
        flags=flags,
    )
    report.check()
    return report
