import numpy as np
import pytest

from cdkit import GenerationError, InputError, generate_gn, generate_lfr
from cdkit.generators import (GnSpec, LfrSpec, _pair_index_to_edge,
                              _powerlaw_mean, _powerlaw_sample, realized_mixing)


class TestGnSpec:
    def test_invariants(self):
        with pytest.raises(InputError):
            GnSpec(10, 3, 0.5)  # K does not divide N
        with pytest.raises(InputError):
            GnSpec(10, 1, 0.5)  # cross probability undefined
        with pytest.raises(InputError):
            GnSpec(10, 10, 0.5)  # size-1 blocks
        with pytest.raises(InputError):
            GnSpec(10, 2, 0.0)
        with pytest.raises(InputError):
            GnSpec(10, 2, 1.2)

    def test_cross_probability(self):
        assert GnSpec(300, 6, 0.25).p_cross == pytest.approx(0.15)


class TestGenerateGn:
    def test_reproducible(self):
        a, _ = generate_gn(GnSpec(200, 4, 0.5, seed=7))
        b, _ = generate_gn(GnSpec(200, 4, 0.5, seed=7))
        assert np.array_equal(a.edges, b.edges)

    def test_degenerate_probability_one(self):
        g, p = generate_gn(GnSpec(4, 2, 1.0, seed=0))
        # both within pairs are sure, cross pairs impossible
        assert g.edges.tolist() == [[0, 1], [2, 3]]
        assert p.labels.tolist() == [0, 0, 1, 1]

    def test_partition_is_block_assignment(self):
        _, p = generate_gn(GnSpec(12, 3, 0.5, seed=1))
        assert p.labels.tolist() == [0] * 4 + [1] * 4 + [2] * 4

    def test_mean_edges_small_scale(self):
        n, k, p_in = 400, 8, 0.3
        spec0 = GnSpec(n, k, p_in)
        within_pairs = k * (n // k) * (n // k - 1) // 2
        cross_pairs = n * (n - 1) // 2 - within_pairs
        expected = within_pairs * p_in + cross_pairs * spec0.p_cross
        counts = [generate_gn(GnSpec(n, k, p_in, seed=s))[0].num_edges
                  for s in range(15)]
        assert abs(np.mean(counts) - expected) / expected < 0.02

    def test_pair_index_mapping_exhaustive(self):
        for n in (2, 3, 7, 20):
            total = n * (n - 1) // 2
            i, j = _pair_index_to_edge(np.arange(total), n)
            expected = [(a, b) for a in range(n) for b in range(a + 1, n)]
            assert list(zip(i.tolist(), j.tolist())) == expected


class TestLfrSpec:
    def test_invariants(self):
        with pytest.raises(InputError):
            LfrSpec(100, 5, 50, 10, 5, 0.3)  # c_min > c_max
        with pytest.raises(InputError):
            LfrSpec(100, 5, 50, 10, 200, 0.3)  # c_max > N
        with pytest.raises(InputError):
            LfrSpec(100, 60, 50, 10, 50, 0.3)  # d > d_max
        with pytest.raises(InputError):
            LfrSpec(100, 5, 50, 10, 50, 1.5)  # mixing out of range


class TestGenerateLfr:
    def test_zero_mixing_no_cross_edges(self):
        g, p = generate_lfr(LfrSpec(400, 8, 40, 10, 80, 0.0, seed=3))
        lab = p.labels
        assert all(lab[i] == lab[j] for i, j in g.edges)

    def test_structural_contracts(self):
        spec = LfrSpec(1500, 10, 100, 10, 200, 0.3, seed=5)
        g, p = generate_lfr(spec)
        assert g.degrees.max() <= spec.max_degree
        sizes = p.sizes()
        assert sizes.min() >= spec.min_community
        assert sizes.max() <= spec.max_community
        assert sizes.sum() == g.num_nodes
        # simple graph: build_graph guarantees no self loops or duplicates
        assert len({tuple(e) for e in g.edges.tolist()}) == g.num_edges

    def test_realized_mixing_near_target(self):
        spec = LfrSpec(2000, 10, 100, 10, 200, 0.3, seed=6)
        g, p = generate_lfr(spec)
        assert abs(realized_mixing(g, p) - 0.3) < 0.05

    def test_node_count_range(self):
        spec = LfrSpec(300, 8, 40, 10, 60, 0.2, seed=8, num_nodes_max=360)
        g, _ = generate_lfr(spec)
        assert 300 <= g.num_nodes <= 360

    def test_infeasible_internal_degree(self):
        # minimum internal degree cannot fit the largest allowed community
        spec = LfrSpec(100, 40, 60, 5, 20, 0.0, seed=1)
        with pytest.raises(GenerationError):
            generate_lfr(spec)

    def test_powerlaw_sampler_statistics(self):
        rng = np.random.default_rng(9)
        for tau in (1.0, 2.0, 2.5):
            xs = _powerlaw_sample(rng, tau, 10.0, 200.0, 200000)
            assert xs.min() >= 10.0 and xs.max() <= 200.0
            assert abs(xs.mean() - _powerlaw_mean(tau, 10.0, 200.0)) < 1.0

    def test_paper_style_community_count(self):
        # (d, d_max, c_min, c_max) = (10, 100, 10, 200), mu = 0.3 at N = 5000
        # yields community counts inside the published range
        for seed in (0, 1):
            _, p = generate_lfr(LfrSpec(5000, 10, 100, 10, 200, 0.3, seed=seed))
            assert 57 <= p.num_communities <= 104
