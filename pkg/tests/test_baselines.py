import itertools

import numpy as np
import pytest

from cdkit import (InputError, Partition, baseline_greedy_modularity,
                   baseline_spectral, build_graph, modularity_score, ncut_score)
from cdkit.errors import CapabilityError, DegenerateGraphError


def two_triangles():
    return build_graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def bridged_triangles():
    return build_graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def as_sets(p):
    return {frozenset(m.tolist()) for m in p.members()}


class TestSpectral:
    def test_disjoint_triangles(self):
        p = baseline_spectral(two_triangles(), 2, seed=0)
        assert as_sets(p) == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
        assert ncut_score(two_triangles(), p) == 0.0

    def test_bridge_split_matches_exhaustive_ncut(self):
        g = bridged_triangles()
        best, best_sets = np.inf, None
        for bits in itertools.product([0, 1], repeat=5):
            labels = np.array((0,) + bits)
            if labels.min() == labels.max():
                continue
            p = Partition.from_labels(labels)
            score = ncut_score(g, p)
            if score < best:
                best, best_sets = score, as_sets(p)
        found = baseline_spectral(g, 2, seed=0)
        assert as_sets(found) == best_sets
        assert ncut_score(g, found) == pytest.approx(best)

    def test_k_one(self):
        p = baseline_spectral(two_triangles(), 1, seed=0)
        assert p.num_communities == 1

    def test_dense_cap(self):
        with pytest.raises(CapabilityError):
            baseline_spectral(two_triangles(), 2, dense_cap=3)

    def test_k_bounds(self):
        with pytest.raises(InputError):
            baseline_spectral(two_triangles(), 7)


class TestGreedyModularity:
    def test_disjoint_triangles(self):
        g = two_triangles()
        p = baseline_greedy_modularity(g, 2)
        assert as_sets(p) == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
        assert modularity_score(g, p) == pytest.approx(0.5)

    def test_k_equals_n_singletons(self):
        g = two_triangles()
        p = baseline_greedy_modularity(g, 6)
        assert p.num_communities == 6
        d = g.degrees.astype(float)
        expected = -float((d ** 2).sum()) / (2 * g.num_edges) ** 2
        assert modularity_score(g, p) == pytest.approx(expected)

    def test_k_one(self):
        g = two_triangles()
        p = baseline_greedy_modularity(g, 1)
        assert modularity_score(g, p) == pytest.approx(0.0, abs=1e-12)

    def test_reaches_k_on_disconnected_graph(self):
        g = build_graph(6, [(0, 1), (2, 3), (4, 5)])
        p = baseline_greedy_modularity(g, 2)
        assert p.num_communities == 2

    def test_errors(self):
        g = two_triangles()
        with pytest.raises(InputError):
            baseline_greedy_modularity(g, 7)
        with pytest.raises(DegenerateGraphError):
            baseline_greedy_modularity(build_graph(3, []), 2)
