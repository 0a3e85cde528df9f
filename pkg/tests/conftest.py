import numpy as np
import pytest

from cdkit import build_graph


def random_graph(rng, n, p=0.3, min_degree=0):
    """Random simple graph; resamples until every degree >= min_degree."""
    iu, ju = np.triu_indices(n, 1)
    while True:
        mask = rng.random(len(iu)) < p
        g = build_graph(n, np.column_stack([iu[mask], ju[mask]]))
        if g.num_edges > 0 and g.degrees.min() >= min_degree:
            return g


def random_partition(rng, n, k):
    """Random labels with every community nonempty (k is clamped to n)."""
    k = min(k, n)
    while True:
        labels = rng.integers(0, k, size=n)
        if len(np.unique(labels)) == k:
            return labels


@pytest.fixture
def eight_node_fixture():
    """Two K4 blocks bridged at (3, 4): the running 8-node example topology."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
             (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (3, 4)]
    return build_graph(8, edges)
