import itertools
import math

import numpy as np
import pytest
from scipy.sparse import csgraph, csr_array

from cdkit import (InputError, Partition, accuracy, build_graph,
                   label_induced_adjacency, load_labels, nmi, save_labels)
from cdkit.errors import CapabilityError, DegeneratePartitionError
from cdkit.partition import indicator

from conftest import random_partition


def nmi_oracle(truth, result):
    # explicit contingency-table evaluation with natural logs
    n = len(truth.labels)
    table = {}
    for t, r in zip(truth.labels, result.labels):
        table[(t, r)] = table.get((t, r), 0) + 1
    n_r = {}
    n_s = {}
    for (t, r), c in table.items():
        n_r[t] = n_r.get(t, 0) + c
        n_s[r] = n_s.get(r, 0) + c
    mutual = sum((c / n) * math.log(n * c / (n_r[t] * n_s[r]))
                 for (t, r), c in table.items())
    h1 = -sum((c / n) * math.log(c / n) for c in n_r.values())
    h2 = -sum((c / n) * math.log(c / n) for c in n_s.values())
    if h1 + h2 == 0:
        return 1.0
    return 2 * mutual / (h1 + h2)


def accuracy_oracle(truth, result):
    # exhaustive assignment enumeration on the zero-padded confusion matrix
    kt, kr = truth.num_communities, result.num_communities
    k = max(kt, kr)
    table = np.zeros((k, k))
    for t, r in zip(truth.labels, result.labels):
        table[t, r] += 1
    best = max(sum(table[i, perm[i]] for i in range(k))
               for perm in itertools.permutations(range(k)))
    return best / len(truth.labels)


class TestPartition:
    def test_compaction(self):
        p = Partition.from_labels([5, 5, 9, 2])
        assert p.num_communities == 3
        assert p.labels.tolist() == [1, 1, 2, 0]

    def test_members_and_sizes(self):
        p = Partition.from_labels([0, 1, 1, 0, 2])
        assert [m.tolist() for m in p.members()] == [[0, 3], [1, 2], [4]]
        assert p.sizes().tolist() == [2, 2, 1]

    def test_rejects_bad_labels(self):
        with pytest.raises(InputError):
            Partition.from_labels([])
        with pytest.raises(InputError):
            Partition.from_labels([0.5, 1.0])

    def test_label_file_round_trip(self, tmp_path):
        p = Partition.from_labels([0, 2, 2, 1])
        path = tmp_path / "p.labels"
        save_labels(p, path)
        p2 = load_labels(path)
        assert np.array_equal(p2.labels, p.labels)


class TestIndicator:
    def test_binary(self):
        p = Partition.from_labels([0, 1, 1])
        r = indicator(p, "binary")
        assert r.tolist() == [[1, 0], [0, 1], [0, 1]]
        assert np.array_equal(indicator(p, "modularity"), r)

    def test_binary_gram_is_sizes(self):
        p = Partition.from_labels([0, 1, 1, 2, 2, 2])
        r = indicator(p, "binary")
        assert np.array_equal(r.T @ r, np.diag([1.0, 2.0, 3.0]))

    def test_ncut_path_graph(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        p = Partition.from_labels([0, 0, 1])
        h = indicator(p, "ncut", g)
        assert np.allclose(h[:, 0], [np.sqrt(1 / 3), np.sqrt(2 / 3), 0.0])
        assert np.allclose(h[:, 1], [0.0, 0.0, 1.0])

    def test_ncut_requires_graph(self):
        with pytest.raises(InputError):
            indicator(Partition.from_labels([0, 1]), "ncut")

    def test_ncut_zero_volume(self):
        g = build_graph(3, [(0, 1)])
        with pytest.raises(DegeneratePartitionError):
            indicator(Partition.from_labels([0, 0, 1]), "ncut", g)

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            indicator(Partition.from_labels([0, 1]), "onehot")


class TestLabelInducedGraph:
    def test_two_blocks_of_four(self):
        # first four nodes one community, last four the other
        p = Partition.from_labels([0, 0, 0, 0, 1, 1, 1, 1])
        lig = label_induced_adjacency(p)
        dense = lig.dense()
        expected = np.zeros((8, 8))
        expected[:4, :4] = 1.0
        expected[4:, 4:] = 1.0
        assert np.array_equal(dense, expected)
        n_comp, comp = csgraph.connected_components(csr_array(dense))
        assert n_comp == 2

    def test_single_community_all_ones(self):
        lig = label_induced_adjacency(Partition.from_labels([0, 0, 0]))
        assert np.array_equal(lig.dense(), np.ones((3, 3)))

    def test_diagonal_is_one(self):
        p = Partition.from_labels([0, 1, 2, 1])
        assert np.array_equal(np.diag(label_induced_adjacency(p).dense()),
                              np.ones(4))

    def test_dense_matches_rrt(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            n = int(rng.integers(5, 51))
            p = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 6))))
            r = indicator(p, "binary")
            assert np.array_equal(label_induced_adjacency(p).dense(), r @ r.T)

    def test_components_round_trip(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            n = int(rng.integers(5, 201))
            p = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 8))))
            lig = label_induced_adjacency(p)
            n_comp, comp = csgraph.connected_components(csr_array(lig.dense(cap=256)))
            assert n_comp == p.num_communities
            ours = {frozenset(m.tolist()) for m in p.members()}
            theirs = {frozenset(m.tolist())
                      for m in Partition.from_labels(comp).members()}
            assert ours == theirs

    def test_dense_cap(self):
        p = Partition.from_labels(np.zeros(10, dtype=int))
        with pytest.raises(CapabilityError):
            label_induced_adjacency(p).dense(cap=5)


class TestNmi:
    def test_identical(self):
        rng = np.random.default_rng(13)
        p = Partition.from_labels(random_partition(rng, 30, 4))
        assert nmi(p, p) == pytest.approx(1.0)

    def test_single_vs_multiclass(self):
        truth = Partition.from_labels([0, 0, 1, 1, 2, 2])
        single = Partition.from_labels([0] * 6)
        assert nmi(truth, single) == 0.0
        assert nmi(single, truth) == 0.0

    def test_both_single(self):
        p = Partition.from_labels([0, 0, 0])
        assert nmi(p, p) == 1.0

    def test_matches_oracle(self):
        truth = Partition.from_labels([0, 0, 1, 1])
        result = Partition.from_labels([0, 1, 1, 1])
        assert nmi(truth, result) == pytest.approx(nmi_oracle(truth, result), abs=1e-12)
        rng = np.random.default_rng(14)
        for _ in range(20):
            n = int(rng.integers(4, 40))
            a = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 5))))
            b = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 5))))
            assert nmi(a, b) == pytest.approx(nmi_oracle(a, b), abs=1e-12)
            assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)
            assert 0.0 <= nmi(a, b) <= 1.0 + 1e-12

    def test_matches_sklearn(self):
        from sklearn.metrics import normalized_mutual_info_score
        rng = np.random.default_rng(15)
        for _ in range(10):
            a = random_partition(rng, 25, 3)
            b = random_partition(rng, 25, 4)
            ours = nmi(Partition.from_labels(a), Partition.from_labels(b))
            ref = normalized_mutual_info_score(a, b, average_method="arithmetic")
            assert ours == pytest.approx(ref, abs=1e-10)

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(16)
        a = random_partition(rng, 30, 4)
        b = random_partition(rng, 30, 3)
        base = nmi(Partition.from_labels(a), Partition.from_labels(b))
        for _ in range(5):
            perm = rng.permutation(4)
            assert nmi(Partition.from_labels(perm[a]),
                       Partition.from_labels(b)) == pytest.approx(base, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            nmi(Partition.from_labels([0, 1]), Partition.from_labels([0, 1, 1]))


class TestAccuracy:
    def test_permuted_labels(self):
        rng = np.random.default_rng(17)
        labels = random_partition(rng, 40, 5)
        perm = rng.permutation(5)
        assert accuracy(Partition.from_labels(labels),
                        Partition.from_labels(perm[labels])) == 1.0

    def test_swap(self):
        assert accuracy(Partition.from_labels([0, 0, 1, 1]),
                        Partition.from_labels([1, 1, 0, 0])) == 1.0

    def test_three_of_four(self):
        assert accuracy(Partition.from_labels([0, 0, 1, 1]),
                        Partition.from_labels([0, 0, 0, 1])) == 0.75

    def test_hungarian_matches_enumeration(self):
        rng = np.random.default_rng(18)
        for _ in range(25):
            n = int(rng.integers(6, 30))
            a = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 7))))
            b = Partition.from_labels(random_partition(rng, n, int(rng.integers(2, 7))))
            assert accuracy(a, b) == pytest.approx(accuracy_oracle(a, b), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            accuracy(Partition.from_labels([0, 1]), Partition.from_labels([0, 1, 1]))
