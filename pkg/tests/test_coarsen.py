import time
from fractions import Fraction

import numpy as np
import pytest

from cdkit import (InputError, build_graph, extract_features, hem_coarsen,
                   modularity_matrix, norm_adj)
from cdkit.coarsen import constant_features, quotient_edges

from conftest import random_graph


def supernode_sets(cmap):
    return {frozenset(s.tolist()) for s in cmap.supernodes}


class TestHemFixture:
    def test_eight_nodes_to_two_supernodes(self, eight_node_fixture):
        # the running example merges into {1,2,3,4} and {5,6,7,8} (1-based)
        for x in (modularity_matrix(eight_node_fixture), norm_adj(eight_node_fixture)):
            cmap = hem_coarsen(eight_node_fixture, x, 2)
            assert supernode_sets(cmap) == {frozenset({0, 1, 2, 3}),
                                            frozenset({4, 5, 6, 7})}

    def test_intermediate_level(self, eight_node_fixture):
        # after the first matching level the fixture holds four size-2 supernodes
        cmap = hem_coarsen(eight_node_fixture, modularity_matrix(eight_node_fixture), 4)
        assert supernode_sets(cmap) == {frozenset({0, 1}), frozenset({2, 3}),
                                        frozenset({4, 7}), frozenset({5, 6})}


class TestHemContract:
    def test_identity_when_small(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        cmap = hem_coarsen(g, modularity_matrix(g), 5)
        assert cmap.num_supernodes == 3
        assert all(len(s) == 1 for s in cmap.supernodes)
        assert np.array_equal(cmap.matrix.toarray(), np.eye(3))

    def test_exact_width(self):
        rng = np.random.default_rng(21)
        width = 8
        for _ in range(50):
            n = int(rng.integers(width + 1, 10 * width + 1))
            g = random_graph(rng, n, p=0.3)
            cmap = hem_coarsen(g, modularity_matrix(g), width)
            assert cmap.num_supernodes == width
            members = np.concatenate(cmap.supernodes)
            assert sorted(members.tolist()) == list(range(n))

    def test_gram_identity(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            n = int(rng.integers(10, 60))
            g = random_graph(rng, n, p=0.3)
            cmap = hem_coarsen(g, modularity_matrix(g), 6)
            gram = (cmap.matrix.T @ cmap.matrix).toarray()
            off = gram - np.diag(np.diag(gram))
            assert (off == 0.0).all()
            assert np.abs(np.diag(gram) - 1.0).max() < 1e-12
            # exact form: every column's squared norm is size * (1/size) as a rational
            assert all(v == Fraction(1) for v in cmap.gram_diagonal_exact())

    def test_deterministic(self):
        rng = np.random.default_rng(23)
        g = random_graph(rng, 40, p=0.2)
        x = norm_adj(g)
        a = hem_coarsen(g, x, 5)
        b = hem_coarsen(g, x, 5)
        assert [s.tolist() for s in a.supernodes] == [s.tolist() for s in b.supernodes]

    def test_disconnected_fallback_still_reaches_width(self):
        # more connected pieces than the target width
        g = build_graph(9, [(0, 1), (2, 3), (4, 5), (6, 7)])
        cmap = hem_coarsen(g, norm_adj(g), 2)
        assert cmap.num_supernodes == 2

    def test_errors(self):
        g = build_graph(3, [(0, 1)])
        with pytest.raises(InputError):
            hem_coarsen(g, modularity_matrix(g), 0)
        from cdkit import norm_laplacian
        with pytest.raises(InputError):
            hem_coarsen(g, norm_laplacian(g), 2)

    def test_cost_scaling(self):
        # loose near-linearithmic check: 4x the edges (and nodes) must stay far
        # below the 16x a quadratic algorithm would show
        rng = np.random.default_rng(24)
        sizes = [(300, 2400), (1200, 9600)]
        times = []
        for n, e in sizes:
            pairs = rng.integers(0, n, size=(3 * e, 2))
            g = build_graph(n, pairs)
            x = norm_adj(g)
            best = np.inf
            for _ in range(3):
                t0 = time.perf_counter()
                hem_coarsen(g, x, 16)
                best = min(best, time.perf_counter() - t0)
            times.append(best)
        assert times[1] < 12.0 * times[0] + 0.1


class TestQuotientEdges:
    def test_parallel_edges_sum(self):
        # c reaches both endpoints of the merged pair with weights 2 and 3
        edges = [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)]
        merged = quotient_edges(edges, {0: 0, 1: 0, 2: 1})
        assert merged == [(0, 1, 5.0)]

    def test_self_edge_dropped(self):
        assert quotient_edges([(0, 1, 4.0)], {0: 0, 1: 0}) == []

    def test_no_edges_no_output(self):
        assert quotient_edges([], {0: 0, 1: 0}) == []

    def test_matches_from_scratch_recompute(self):
        rng = np.random.default_rng(25)
        pairs = sorted({(min(i, j), max(i, j))
                        for i, j in rng.integers(0, 10, size=(30, 2)) if i != j})
        edges = [(int(i), int(j), float(w))
                 for (i, j), w in zip(pairs, rng.normal(size=len(pairs)))]
        assignment = {v: int(rng.integers(0, 4)) for v in range(10)}
        got = quotient_edges(edges, assignment)
        expected = {}
        for u, v, w in edges:
            a, b = sorted((assignment[u], assignment[v]))
            if a != b:
                expected[(a, b)] = expected.get((a, b), 0.0) + w
        assert {(a, b): w for a, b, w in got} == pytest.approx(expected)


class TestExtractFeatures:
    def test_padding_branch(self):
        g = build_graph(3, [(0, 1), (0, 2), (1, 2)])
        x = modularity_matrix(g)
        z = extract_features(g, x, 5)
        assert z.values.shape == (3, 5)
        assert np.array_equal(z.values[:, :3], x.values)
        assert (z.values[:, 3:] == 0).all()

    def test_supernode_coefficient(self, eight_node_fixture):
        cmap = hem_coarsen(eight_node_fixture, modularity_matrix(eight_node_fixture), 2)
        # both supernodes have four members, so every stored coefficient is 1/2
        assert np.allclose(cmap.matrix.toarray()[cmap.matrix.toarray() != 0], 0.5)

    def test_matches_dense_product(self):
        rng = np.random.default_rng(26)
        g = random_graph(rng, 12, p=0.4)
        for x in (modularity_matrix(g), norm_adj(g)):
            z = extract_features(g, x, 4)
            cmap = hem_coarsen(g, x, 4)
            dense = x.values if isinstance(x.values, np.ndarray) else x.values.toarray()
            oracle = dense @ cmap.matrix.toarray()
            assert np.abs(z.values - oracle).max() < 1e-12
            assert z.source_kind == x.kind

    def test_constant_features(self):
        z = constant_features(4, 6)
        assert (z.values == 1.0).all() and z.source_kind == "constant"
