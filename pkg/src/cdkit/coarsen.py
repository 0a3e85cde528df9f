"""Heavy-edge-matching multilevel coarsening and fixed-width feature extraction.

Coarsening merges a graph with ``N`` nodes into exactly ``L`` supernodes by
repeatedly matching the heaviest still-unmatched edge per level, where edge
weights come from a structural matrix (modularity Q or normalized adjacency M).
The resulting coarsening matrix ``C`` (``C_ij = |v_j|^-1/2`` for node i merged
into supernode j) turns the N x N structural matrix into an N x L feature
block ``Z = X C``, giving every graph the same feature width regardless of N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse

from .errors import InputError
from .graph import Graph, StructMatrix


@dataclass(frozen=True)
class CoarseningMap:
    """Supernode membership plus the sparse coarsening matrix.

    ``supernodes`` partitions ``[0, N)``; column j of ``matrix`` holds
    ``|v_j|^-1/2`` on the members of supernode j, so every column has unit
    squared norm and columns are mutually orthogonal.
    """

    supernodes: tuple
    matrix: sparse.csr_array

    @property
    def num_supernodes(self) -> int:
        return len(self.supernodes)

    def gram_diagonal_exact(self) -> list[Fraction]:
        """Column squared norms of C as exact rationals (each is 1 by construction)."""
        return [Fraction(len(s), 1) * Fraction(1, len(s)) for s in self.supernodes]


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense N x L node features; ``source_kind`` records what X they came from."""

    values: np.ndarray
    source_kind: str  # "modularity" | "norm_adj" | "constant"


def quotient_edges(edges, assignment) -> list:
    """Map weighted edges through a merge assignment.

    Parallel edges produced by a merge are combined by summing their weights;
    edges that become self-edges of a supernode are dropped. Returns
    ``(u, v, w)`` triples with ``u < v`` sorted by endpoint ids.
    """
    agg = {}
    for u, v, w in edges:
        a, b = assignment[u], assignment[v]
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        agg[key] = agg.get(key, 0.0) + w
    return [(a, b, w) for (a, b), w in sorted(agg.items())]


def _edge_weights(g: Graph, x: StructMatrix) -> list:
    if x.kind not in ("modularity", "norm_adj"):
        raise InputError("coarsening weights must come from Q or M")
    if isinstance(x.values, np.ndarray):
        w = x.values[g.edges[:, 0], g.edges[:, 1]]
    else:
        w = np.asarray(x.values[g.edges[:, 0], g.edges[:, 1]]).ravel()
    return [(int(i), int(j), float(wij)) for (i, j), wij in zip(g.edges, w)]


def _coarsening_matrix(supernodes, num_nodes: int) -> sparse.csr_array:
    rows, cols, data = [], [], []
    for j, members in enumerate(supernodes):
        coef = 1.0 / np.sqrt(len(members))
        rows.extend(members)
        cols.extend([j] * len(members))
        data.extend([coef] * len(members))
    return sparse.csr_array((data, (rows, cols)), shape=(num_nodes, len(supernodes)))


def hem_coarsen(g: Graph, x: StructMatrix, width: int) -> CoarseningMap:
    """Coarsen ``g`` to exactly ``width`` supernodes by heavy-edge matching.

    Per level the reweighted edges are sorted by descending weight (ties broken
    lexicographically on the endpoint pair) and consumed as a queue: an edge is
    matched only if both endpoints are still unmatched at the current level.
    Merging stops the instant the supernode count reaches ``width``, mid-level
    if needed. When ``N <= width`` every node is its own supernode.

    If the graph has more connected pieces than ``width`` the edge queue can
    drain without reaching the target; remaining supernodes are then paired by
    ascending id with zero-weight merges so the contract of exactly ``width``
    supernodes always holds.
    """
    if width < 1:
        raise InputError("target width must be >= 1")
    n = g.num_nodes
    if n <= width:
        supernodes = tuple(np.array([i], dtype=np.int64) for i in range(n))
        return CoarseningMap(supernodes, _coarsening_matrix(supernodes, n))

    members = [[i] for i in range(n)]
    edges = _edge_weights(g, x)
    count = n
    while count > width:
        queue = sorted(edges, key=lambda t: (-t[2], t[0], t[1]))
        assignment = {}
        next_members = []
        for u, v, _ in queue:
            if u in assignment or v in assignment:
                continue
            assignment[u] = assignment[v] = len(next_members)
            next_members.append(members[u] + members[v])
            count -= 1
            if count == width:
                break
        merged = len(next_members)
        for u in range(len(members)):
            if u not in assignment:
                assignment[u] = len(next_members)
                next_members.append(members[u])
        if count == width:
            members = next_members
            break
        if merged == 0:
            # queue drained without a single match: pair supernodes by ascending id
            while count > width:
                next_members[-2] = next_members[-2] + next_members[-1]
                next_members.pop()
                count -= 1
            members = next_members
            break
        edges = quotient_edges(edges, assignment)
        members = next_members

    supernodes = tuple(np.array(sorted(m), dtype=np.int64) for m in members)
    return CoarseningMap(supernodes, _coarsening_matrix(supernodes, n))


def extract_features(g: Graph, x: StructMatrix, width: int) -> FeatureMatrix:
    """Reduce the N x N structural matrix to the fixed-width block ``Z``.

    For ``N > width``: ``Z[:, j] = sum_{i in v_j} C_ij * X[:, i]`` over the
    coarsening map. For ``N <= width``: ``Z = [X, 0]`` (zero padding on the
    right).
    """
    n = g.num_nodes
    if n <= width:
        z = np.zeros((n, width))
        z[:, :n] = x.values if isinstance(x.values, np.ndarray) else x.values.toarray()
        return FeatureMatrix(z, x.source_kind if isinstance(x, FeatureMatrix) else x.kind)

    cmap = hem_coarsen(g, x, width)
    dense = isinstance(x.values, np.ndarray)
    xcols = x.values if dense else sparse.csc_array(x.values)
    z = np.zeros((n, width))
    for j, members_j in enumerate(cmap.supernodes):
        coef = 1.0 / np.sqrt(len(members_j))
        if dense:
            z[:, j] = coef * xcols[:, members_j].sum(axis=1)
        else:
            z[:, j] = coef * np.asarray(xcols[:, members_j].sum(axis=1)).ravel()
    return FeatureMatrix(z, x.kind)


def constant_features(num_nodes: int, width: int) -> FeatureMatrix:
    """All-ones feature block (the degenerate no-extraction mode)."""
    return FeatureMatrix(np.ones((num_nodes, width)), "constant")
