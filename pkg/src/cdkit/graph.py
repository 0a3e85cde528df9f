"""Sparse undirected graphs and the structural matrices / quality objectives built on them.

A :class:`Graph` is an immutable simple undirected graph. From it we derive the
modularity matrix ``Q`` (dense), the symmetrically normalized adjacency
``M = D^-1/2 A D^-1/2`` and the normalized Laplacian ``L = I - M`` (both sparse),
plus the two classic set-form quality objectives: modularity (larger is better)
and normalized cut (smaller is better).

Convention note: the normalized-cut objective here carries a 1/2 prefactor, so
for the degree-weighted membership indicator ``H`` the matrix identity reads
``tr(H^T L H) = 2 * ncut_score`` (the identity without the prefactor is the
textbook ``tr(H^T L H) = sum_r cut_r / vol_r``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import DegenerateGraphError, DegeneratePartitionError, InputError

_NODES_HEADER = re.compile(r"^#\s*nodes\s+(\d+)\s*$")


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with CSR adjacency.

    ``edges`` is deduplicated with ``i < j`` and sorted lexicographically;
    ``adjacency`` is the symmetric 0/1 matrix with zero diagonal and
    ``degrees[i]`` equals the number of nonzeros in row ``i``.
    """

    num_nodes: int
    edges: np.ndarray
    adjacency: sparse.csr_array
    degrees: np.ndarray

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> np.ndarray:
        return self.adjacency.indices[self.adjacency.indptr[i]:self.adjacency.indptr[i + 1]]


@dataclass(frozen=True)
class StructMatrix:
    """A structural matrix derived from one graph.

    ``kind`` is one of ``"modularity"`` (dense Q), ``"norm_adj"`` (sparse M)
    or ``"norm_laplacian"`` (sparse L).
    """

    kind: str
    values: object  # np.ndarray for Q, scipy.sparse.csr_array for M / L

    def dense(self) -> np.ndarray:
        v = self.values
        return v if isinstance(v, np.ndarray) else v.toarray()


def build_graph(num_nodes: int, edge_list) -> Graph:
    """Build a :class:`Graph` from an edge list, symmetrizing and deduplicating.

    Self-loops are dropped. Endpoints outside ``[0, num_nodes)`` raise
    :class:`InputError`, as does ``num_nodes == 0``.
    """
    if num_nodes <= 0:
        raise InputError("graph needs at least one node")
    pairs = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray) else edge_list,
                       dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise InputError("edge list must be pairs of node ids")
    if pairs.size and (pairs.min() < 0 or pairs.max() >= num_nodes):
        raise InputError(f"edge endpoint outside [0, {num_nodes})")

    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    edges = np.unique(np.column_stack([lo, hi]), axis=0)

    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    data = np.ones(len(rows))
    adj = sparse.csr_array((data, (rows, cols)), shape=(num_nodes, num_nodes))
    degrees = np.diff(adj.indptr).astype(np.int64)
    return Graph(num_nodes, _freeze(edges), adj, _freeze(degrees))


def modularity_matrix(g: Graph) -> StructMatrix:
    """Dense modularity matrix ``Q_ij = A_ij - d_i d_j / (2e)``; rows sum to 0."""
    e = g.num_edges
    if e == 0:
        raise DegenerateGraphError("modularity matrix undefined for an edgeless graph")
    d = g.degrees.astype(np.float64)
    q = g.adjacency.toarray() - np.outer(d, d) / (2.0 * e)
    return StructMatrix("modularity", q)


def _inv_sqrt_degrees(g: Graph, strict: bool) -> np.ndarray:
    d = g.degrees.astype(np.float64)
    if np.any(d == 0):
        if strict:
            raise DegenerateGraphError("graph has isolated nodes")
        # non-strict: treat 1/sqrt(0) as 0, zeroing the node's row and column of M
        out = np.zeros_like(d)
        nz = d > 0
        out[nz] = 1.0 / np.sqrt(d[nz])
        return out
    return 1.0 / np.sqrt(d)


def norm_adj(g: Graph, strict: bool = False) -> StructMatrix:
    """Sparse symmetrically normalized adjacency ``M = D^-1/2 A D^-1/2``."""
    dis = sparse.diags_array(_inv_sqrt_degrees(g, strict), format="csr")
    m = sparse.csr_array(dis @ g.adjacency @ dis)
    return StructMatrix("norm_adj", m)


def norm_laplacian(g: Graph, strict: bool = False) -> StructMatrix:
    """Sparse normalized Laplacian ``L = I - M`` (PSD, smallest eigenvalue 0)."""
    m = norm_adj(g, strict).values
    lap = sparse.csr_array(sparse.eye_array(g.num_nodes, format="csr") - m)
    return StructMatrix("norm_laplacian", lap)


def modularity_score(g: Graph, p) -> float:
    """Modularity of a partition by the set definition.

    ``Mod = (1/2e) * sum_r sum_{i,j in C_r} [A_ij - d_i d_j / (2e)]``, i.e. per
    community the internal ordered-pair adjacency mass minus ``vol_r^2 / (2e)``.
    """
    if len(p.labels) != g.num_nodes:
        raise InputError("partition size does not match the graph")
    e = g.num_edges
    if e == 0:
        raise DegenerateGraphError("modularity undefined for an edgeless graph")
    two_e = 2.0 * e
    total = 0.0
    for members in p.members():
        internal = g.adjacency[members][:, members].sum()
        vol = float(g.degrees[members].sum())
        total += internal - vol * vol / two_e
    return float(total / two_e)


def ncut_score(g: Graph, p) -> float:
    """Normalized cut of a partition: ``(1/2) * sum_r cut(C_r, ~C_r) / vol(C_r)``."""
    if len(p.labels) != g.num_nodes:
        raise InputError("partition size does not match the graph")
    total = 0.0
    for members in p.members():
        vol = float(g.degrees[members].sum())
        if vol == 0.0:
            raise DegeneratePartitionError("community with zero volume")
        internal = g.adjacency[members][:, members].sum()
        total += (vol - internal) / vol
    return 0.5 * float(total)


def load_edge_list(path) -> Graph:
    """Read the plain-text edge format: two ids per line, '#' comment lines.

    Node count is ``1 + max id`` unless a ``# nodes <N>`` header is present.
    """
    declared = None
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _NODES_HEADER.match(line)
                if m:
                    declared = int(m.group(1))
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"malformed edge line: {line!r}")
            pairs.append((int(parts[0]), int(parts[1])))
    if declared is None:
        if not pairs:
            raise InputError(f"{path}: no edges and no '# nodes N' header")
        declared = 1 + max(max(i, j) for i, j in pairs)
    return build_graph(declared, pairs)


def save_edge_list(g: Graph, path) -> None:
    """Write a graph in the edge-list text format with a node-count header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes {g.num_nodes}\n")
        for i, j in g.edges:
            fh.write(f"{i} {j}\n")
