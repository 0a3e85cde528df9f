import numpy as np
import pytest
from scipy import sparse
from sklearn.base import clone

from cdkit import InductiveCommunityDetector, InputError, nmi
from cdkit.generators import GnSpec, generate_gn
from cdkit.partition import Partition
from cdkit.validation import as_graph, as_partition, check_collection


def collection(count=12, n=40, k=2, p_in=0.85, seed=11):
    items = [generate_gn(GnSpec(n, k, p_in, seed=seed + i)) for i in range(count)]
    return [g for g, _ in items], [p.labels for _, p in items]


def small_estimator(**kw):
    base = dict(gen_widths=(16, 8), disc_widths=(8, 4, 1), epochs=2,
                graphs_per_epoch=2, random_state=0)
    base.update(kw)
    return InductiveCommunityDetector(**base)


class TestSklearnProtocol:
    def test_get_set_params_and_clone(self):
        est = small_estimator(alpha=0.5)
        params = est.get_params()
        assert params["alpha"] == 0.5
        assert params["objective"] == "modularity"
        est.set_params(beta=3.0)
        assert est.beta == 3.0
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fit_returns_self_and_sets_attributes(self):
        graphs, y = collection()
        est = small_estimator()
        assert est.fit(graphs, y) is est
        assert hasattr(est, "checkpoint_")
        assert est.best_epoch_ >= 0
        assert len(est.history_) == est.epochs + 1

    def test_unfitted_predict_raises(self):
        graphs, _ = collection(count=2)
        with pytest.raises(InputError):
            small_estimator().predict(graphs[0], 2)


class TestFitPredict:
    def test_predict_and_transform(self):
        graphs, y = collection()
        est = small_estimator().fit(graphs[:-1], y[:-1])
        labels = est.predict(graphs[-1], 2)
        assert labels.shape == (40,)
        assert set(np.unique(labels)) == {0, 1}
        u = est.transform(graphs[-1])
        assert u.shape == (40, 8)
        quality = nmi(Partition.from_labels(y[-1]), Partition.from_labels(labels))
        assert quality > 0.9  # dense blocks are easy

    def test_accepts_adjacency_matrices(self):
        graphs, y = collection(count=6)
        dense = [g.adjacency.toarray() for g in graphs]
        est = small_estimator(epochs=1).fit(dense, y)
        pred = est.predict(sparse.csr_array(dense[-1]), 2)
        assert pred.shape == (40,)

    def test_ncut_objective(self):
        graphs, y = collection(count=8)
        est = small_estimator(objective="ncut", epochs=1).fit(graphs, y)
        assert est.checkpoint_.variant == "ncut"

    def test_too_few_graphs(self):
        graphs, y = collection(count=1)
        with pytest.raises(InputError):
            small_estimator().fit(graphs, y)


class TestValidationHelpers:
    def test_as_graph_round_trips(self):
        graphs, _ = collection(count=1)
        g = graphs[0]
        assert as_graph(g) is g
        from_dense = as_graph(g.adjacency.toarray())
        assert np.array_equal(from_dense.edges, g.edges)
        from_sparse = as_graph(g.adjacency)
        assert np.array_equal(from_sparse.edges, g.edges)

    def test_as_graph_rejects_nonsquare(self):
        with pytest.raises(InputError):
            as_graph(np.zeros((3, 4)))

    def test_as_partition_checks_length(self):
        with pytest.raises(InputError):
            as_partition([0, 1, 1], num_nodes=4)

    def test_check_collection_alignment(self):
        graphs, y = collection(count=3)
        with pytest.raises(InputError):
            check_collection(graphs, y[:2])
        with pytest.raises(InputError):
            check_collection([], [])
