"""In-house reference methods: spectral clustering and greedy modularity merging.

Both serve two roles: quality reference points in evaluation, and label
sources for training when a dataset has no ground truth.
"""

from __future__ import annotations

import numpy as np

from .errors import CapabilityError, DegenerateGraphError, InputError
from .graph import Graph, norm_laplacian
from .kmeans import kmeans
from .partition import Partition

SPECTRAL_DENSE_CAP = 4096


def baseline_spectral(g: Graph, k: int, restarts: int = 10, seed: int = 0,
                      dense_cap: int = SPECTRAL_DENSE_CAP) -> Partition:
    """Cluster the rows of the K bottom eigenvectors of the normalized Laplacian.

    Uses a dense symmetric eigensolver, so it is capped at ``dense_cap`` nodes.
    """
    if not 1 <= k <= g.num_nodes:
        raise InputError(f"k must be in [1, {g.num_nodes}]")
    if g.num_nodes > dense_cap:
        raise CapabilityError(f"dense eigensolve capped at {dense_cap} nodes")
    lap = norm_laplacian(g).values.toarray()
    _, vectors = np.linalg.eigh(lap)
    embedding = vectors[:, :k]
    return kmeans(embedding, k, restarts=restarts, seed=seed).labels


def baseline_greedy_modularity(g: Graph, k: int) -> Partition:
    """Agglomerative modularity maximization down to exactly ``k`` communities.

    Starts from singletons and repeatedly merges the community pair with the
    largest modularity gain ``2 (e_ij - a_i a_j)`` until ``k`` communities
    remain (merging continues through negative gains so the contract on ``k``
    always holds). Ties resolve to the lexicographically first pair.
    """
    if not 1 <= k <= g.num_nodes:
        raise InputError(f"k must be in [1, {g.num_nodes}]")
    if g.num_edges == 0:
        raise DegenerateGraphError("greedy modularity needs at least one edge")
    n = g.num_nodes
    two_e = 2.0 * g.num_edges
    frac = g.adjacency.toarray() / two_e
    stub = g.degrees / two_e
    active = np.ones(n, dtype=bool)
    comm = np.arange(n)

    count = n
    while count > k:
        gain = 2.0 * (frac - np.outer(stub, stub))
        gain[~active, :] = -np.inf
        gain[:, ~active] = -np.inf
        np.fill_diagonal(gain, -np.inf)
        i, j = np.unravel_index(int(np.argmax(gain)), gain.shape)
        if i > j:
            i, j = j, i
        frac[i, :] += frac[j, :]
        frac[:, i] += frac[:, j]
        stub[i] += stub[j]
        active[j] = False
        comm[comm == j] = i
        count -= 1
    return Partition.from_labels(comm)
