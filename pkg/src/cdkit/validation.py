"""Input validation helpers for the estimator-facing API."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .errors import InputError
from .graph import Graph, build_graph
from .partition import Partition


def as_graph(obj) -> Graph:
    """Coerce a :class:`Graph`, a square sparse matrix, or a square dense array.

    Matrix inputs are read as adjacency: any nonzero entry becomes an edge
    (weights are ignored, the diagonal is dropped, symmetry is forced).
    """
    if isinstance(obj, Graph):
        return obj
    if sparse.issparse(obj):
        coo = obj.tocoo()
        if coo.shape[0] != coo.shape[1]:
            raise InputError("adjacency matrix must be square")
        return build_graph(coo.shape[0], np.column_stack([coo.row, coo.col]))
    arr = np.asarray(obj)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        rows, cols = np.nonzero(arr)
        return build_graph(arr.shape[0], np.column_stack([rows, cols]))
    raise InputError("expected a Graph or a square adjacency matrix")


def as_partition(y, num_nodes: int | None = None) -> Partition:
    """Coerce a :class:`Partition` or an integer label vector."""
    part = y if isinstance(y, Partition) else Partition.from_labels(y)
    if num_nodes is not None and len(part) != num_nodes:
        raise InputError(f"labels cover {len(part)} nodes, graph has {num_nodes}")
    return part


def check_collection(graphs, y) -> tuple[list[Graph], list[Partition]]:
    """Validate a fit()-style collection of graphs and aligned label vectors."""
    if len(graphs) == 0:
        raise InputError("need at least one graph")
    if y is None or len(y) != len(graphs):
        raise InputError("y must hold one label vector per graph")
    gs = [as_graph(g) for g in graphs]
    ps = [as_partition(labels, g.num_nodes) for g, labels in zip(gs, y)]
    return gs, ps
