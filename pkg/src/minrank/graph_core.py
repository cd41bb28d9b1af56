"""Labeled simple graphs, seeded G(v, p) sampling and exact vertex connectivity.

Vertices are stored 0-indexed; the text edge-list format is 1-indexed.
"""
from __future__ import annotations

import hashlib
import io
import itertools
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, ParameterError

__all__ = [
    "LabeledGraph",
    "GnpModel",
    "DegreeStats",
    "sample_gnp",
    "graph_stats",
    "vertex_connectivity",
    "local_connectivity",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "complete_bipartite_graph",
    "empty_graph",
    "petersen_graph",
    "disjoint_union",
    "format_edge_list",
    "parse_edge_list",
    "read_edge_list",
    "write_edge_list",
]


class LabeledGraph:
    """Simple undirected graph on vertices 0..v-1.

    The adjacency matrix is copied, validated and frozen on construction.
    """

    def __init__(self, adjacency, name: str | None = None):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ParameterError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] < 1:
            raise ParameterError("a graph needs at least one vertex")
        if np.any(np.diag(adj)):
            raise ParameterError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ParameterError("adjacency must be symmetric")
        adj.setflags(write=False)
        self.adjacency = adj
        self.name = name

    @classmethod
    def from_edges(cls, v: int, edges: Iterable[tuple[int, int]], name: str | None = None):
        """Build from 0-indexed vertex pairs."""
        if v < 1:
            raise ParameterError("v must be >= 1")
        adj = np.zeros((v, v), dtype=bool)
        for i, j in edges:
            if not (0 <= i < v and 0 <= j < v) or i == j:
                raise ParameterError(f"bad edge ({i}, {j}) for v={v}")
            adj[i, j] = adj[j, i] = True
        return cls(adj, name=name)

    @property
    def v(self) -> int:
        return self.adjacency.shape[0]

    @cached_property
    def e(self) -> int:
        return int(self.adjacency.sum()) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    def edges(self) -> list[tuple[int, int]]:
        """Edges as 0-indexed pairs (i, j), i < j, in lexicographic order."""
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    def neighbors(self, i: int) -> list[int]:
        return np.flatnonzero(self.adjacency[i]).tolist()

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        # bit j of entry i set iff {i, j} is an edge
        weights = [1 << j for j in range(self.v)]
        return tuple(sum(w for w, a in zip(weights, row) if a) for row in self.adjacency.tolist())

    @property
    def is_complete(self) -> bool:
        return self.e == self.v * (self.v - 1) // 2

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = 0
        comps = []
        nbr = self.neighbor_masks
        for s in range(self.v):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                low = frontier & -frontier
                u = low.bit_length() - 1
                frontier ^= low
                new = nbr[u] & ~comp
                comp |= new
                frontier |= new
            seen |= comp
            comps.append(tuple(k for k in range(self.v) if comp >> k & 1))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def is_bipartite(self) -> bool:
        color = [-1] * self.v
        for s in range(self.v):
            if color[s] >= 0:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.neighbors(u):
                    if color[w] < 0:
                        color[w] = 1 - color[u]
                        queue.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def subgraph(self, vertices: Sequence[int]) -> "LabeledGraph":
        idx = np.asarray(vertices, dtype=int)
        return LabeledGraph(self.adjacency[np.ix_(idx, idx)])

    @cached_property
    def graph_id(self) -> str:
        digest = hashlib.sha1(np.packbits(self.adjacency).tobytes()).hexdigest()[:12]
        return self.name or f"v{self.v}-{digest}"

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash((self.v, np.packbits(self.adjacency).tobytes()))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<LabeledGraph{label} v={self.v} e={self.e}>"


@dataclass(frozen=True)
class GnpModel:
    v: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.v) != self.v or self.v < 1:
            raise ParameterError(f"v must be a positive integer, got {self.v!r}")
        if not (0.0 < self.p < 1.0):
            raise ParameterError(f"p must lie in (0, 1), got {self.p!r}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True)
class DegreeStats:
    degrees: tuple[int, ...]
    delta: int
    Delta: int
    edges: int


def sample_gnp(model: GnpModel) -> LabeledGraph:
    """Draw G(v, p) deterministically from ``model.seed``.

    Seeding scheme: a PCG64 generator seeded with the 64-bit seed draws one
    uniform double per vertex pair, pairs taken in lexicographic order
    (0,1), (0,2), ..., (v-2,v-1); the pair is an edge iff its draw is < p.
    """
    v = model.v
    rng = np.random.Generator(np.random.PCG64(model.seed))
    draws = rng.random(v * (v - 1) // 2)
    adj = np.zeros((v, v), dtype=bool)
    iu = np.triu_indices(v, 1)
    adj[iu] = draws < model.p
    adj |= adj.T
    return LabeledGraph(adj)


def graph_stats(G: LabeledGraph) -> DegreeStats:
    deg = G.degrees
    return DegreeStats(tuple(deg.tolist()), int(deg.min()), int(deg.max()), G.e)


# -- vertex connectivity ---------------------------------------------------

def _path_lower_bound(nbr, a, b, need):
    # Disjoint a-b paths of length 2 (common neighbours) plus length 3 paths
    # through a greedy matching of private neighbours.  Stops once `need` is met.
    common = nbr[a] & nbr[b]
    count = common.bit_count()
    if count >= need:
        return count
    side_a = nbr[a] & ~common
    side_b = nbr[b] & ~common
    while side_a and count < need:
        low = side_a & -side_a
        side_a ^= low
        hit = nbr[low.bit_length() - 1] & side_b
        if hit:
            side_b ^= hit & -hit
            count += 1
    return count


def local_connectivity(G: LabeledGraph, s: int, t: int, cap: int | None = None) -> int:
    """Maximum number of internally disjoint s-t paths, for non-adjacent s != t.

    Unit-capacity max flow on the vertex-split network (u_in -> u_out of
    capacity 1 for inner vertices), searched with BFS directly on neighbour
    bitsets instead of a materialized arc list.  With ``cap`` the search
    stops as soon as ``cap`` paths are found.
    """
    if s == t or G.adjacency[s, t]:
        raise ParameterError("local connectivity needs two distinct non-adjacent vertices")
    n = G.v
    nbr = G.neighbor_masks
    limit = n if cap is None else cap
    out_flow = [0] * n  # bitmask of w with one unit of flow on u -> w
    in_flow = [0] * n  # bitmask of u with one unit of flow on u -> w
    flow = 0
    while flow < limit:
        # BFS nodes: 2u is u_in, 2u+1 is u_out
        parent = {2 * s + 1: -1}
        seen_in = 1 << s
        seen_out = 1 << s
        queue = deque([2 * s + 1])
        found = False
        while queue and not found:
            node = queue.popleft()
            u = node >> 1
            if node & 1:
                # u_out -> w_in along edges without flow u -> w
                fresh = nbr[u] & ~out_flow[u] & ~seen_in
                seen_in |= fresh
                while fresh:
                    low = fresh & -fresh
                    fresh ^= low
                    w = low.bit_length() - 1
                    parent[2 * w] = node
                    if w == t:
                        found = True
                        break
                    queue.append(2 * w)
                # u_out -> u_in undoes the unit through a used inner vertex
                if not found and u != s and in_flow[u] and not seen_in >> u & 1:
                    seen_in |= 1 << u
                    parent[2 * u] = node
                    queue.append(2 * u)
            else:
                if in_flow[u]:
                    # used vertex: only backwards along the arc that feeds it
                    fresh = in_flow[u] & ~seen_out
                    seen_out |= fresh
                    while fresh:
                        low = fresh & -fresh
                        fresh ^= low
                        w = low.bit_length() - 1
                        parent[2 * w + 1] = node
                        queue.append(2 * w + 1)
                elif not seen_out >> u & 1:
                    seen_out |= 1 << u
                    parent[2 * u + 1] = node
                    queue.append(2 * u + 1)
        if not found:
            break
        node = 2 * t
        while parent[node] != -1:
            prev = parent[node]
            a, b = prev >> 1, node >> 1
            if prev & 1 and not node & 1 and a != b:
                # forward edge arc a_out -> b_in
                if in_flow[a] >> b & 1:
                    in_flow[a] &= ~(1 << b)
                    out_flow[b] &= ~(1 << a)
                else:
                    out_flow[a] |= 1 << b
                    in_flow[b] |= 1 << a
            elif not prev & 1 and node & 1 and a != b:
                # residual arc a_in -> b_out cancels flow b -> a
                out_flow[b] &= ~(1 << a)
                in_flow[a] &= ~(1 << b)
            node = prev
        flow += 1
    return flow


def vertex_connectivity(G: LabeledGraph) -> int:
    """Exact vertex connectivity, with kappa(K_v) = v - 1 and 0 if disconnected.

    Fix a vertex x of minimum degree.  A minimum separator either misses x,
    and then separates x from some non-neighbour, or contains x, and then x
    has neighbours on two sides of it.  So only pairs (x, y) with y not
    adjacent to x, and non-adjacent pairs inside N(x), need a flow; each
    pair is first tested against a cheap disjoint-path count and skipped
    when that already reaches the current best.
    """
    v = G.v
    if G.is_complete:
        return v - 1
    if not G.is_connected:
        return 0
    nbr = G.neighbor_masks
    deg = G.degrees
    x = int(np.argmin(deg))
    best = int(deg[x])
    adj = G.adjacency
    pairs = [(x, y) for y in range(v) if y != x and not adj[x, y]]
    nx_ = G.neighbors(x)
    pairs += [(a, b) for a, b in itertools.combinations(nx_, 2) if not adj[a, b]]
    for a, b in pairs:
        if _path_lower_bound(nbr, a, b, best) >= best:
            continue
        best = min(best, local_connectivity(G, a, b, cap=best))
    return best


# -- named graphs ----------------------------------------------------------

def empty_graph(n: int) -> LabeledGraph:
    return LabeledGraph(np.zeros((n, n), dtype=bool), name=f"E{n}")


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph(~np.eye(n, dtype=bool), name=f"K{n}")


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def cycle_graph(n: int) -> LabeledGraph:
    if n < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    return LabeledGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def complete_bipartite_graph(m: int, n: int) -> LabeledGraph:
    edges = [(i, m + j) for i in range(m) for j in range(n)]
    return LabeledGraph.from_edges(m + n, edges, name=f"K{m},{n}")


def petersen_graph() -> LabeledGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return LabeledGraph.from_edges(10, outer + spokes + inner, name="Petersen")


def disjoint_union(G: LabeledGraph, H: LabeledGraph) -> LabeledGraph:
    adj = np.zeros((G.v + H.v, G.v + H.v), dtype=bool)
    adj[: G.v, : G.v] = G.adjacency
    adj[G.v :, G.v :] = H.adjacency
    return LabeledGraph(adj)


# -- edge-list text format ---------------------------------------------------

def format_edge_list(G: LabeledGraph) -> str:
    """First line ``v e``, then one ``i j`` line per edge, 1-indexed, i < j."""
    lines = [f"{G.v} {G.e}"]
    lines += [f"{i + 1} {j + 1}" for i, j in G.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> LabeledGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise DataError("edge list must start with a 'v e' header line")
    try:
        v, e = int(rows[0][0]), int(rows[0][1])
        pairs = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise DataError(f"malformed edge list: {exc}") from None
    if v < 1:
        raise DataError(f"vertex count must be positive, got {v}")
    if len(pairs) != e:
        raise DataError(f"header announces {e} edges, found {len(pairs)}")
    for i, j in pairs:
        if not (1 <= i < j <= v):
            raise DataError(f"edge ({i}, {j}) violates 1 <= i < j <= {v}")
    if len(set(pairs)) != len(pairs):
        raise DataError("duplicate edge in edge list")
    return LabeledGraph.from_edges(v, [(i - 1, j - 1) for i, j in pairs])


def read_edge_list(path) -> LabeledGraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(G: LabeledGraph, path) -> None:
    if isinstance(path, io.TextIOBase):
        path.write(format_edge_list(G))
        return
    with open(os.fspath(path), "w") as fh:
        fh.write(format_edge_list(G))
