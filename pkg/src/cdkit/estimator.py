"""Scikit-learn style estimator wrapping offline training and online inference.

``fit`` trains on a collection of labeled graphs (the trailing
``validation_fraction`` of the collection, by position, drives checkpoint
selection); ``transform`` embeds a new graph with the frozen feature encoder;
``predict`` clusters that embedding into a requested number of communities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .dataset import DatasetSplit
from .errors import InputError
from .model import TrainConfig, adjacency_propagation, encode, infer, reduced_features
from .model import structural_features, train
from .validation import as_graph, check_collection


class InductiveCommunityDetector(BaseEstimator):
    """Community detection that trains once and generalizes to unseen graphs.

    Parameters mirror :class:`cdkit.model.TrainConfig`; ``objective`` selects
    the variant ("modularity" trains on the modularity matrix with binary
    indicators, "ncut" on the normalized adjacency with degree-weighted
    indicators).
    """

    def __init__(self, objective="modularity", gen_widths=(256, 128, 64),
                 disc_widths=(64, 32, 16, 1), alpha=1.0, beta=1.0,
                 graphs_per_epoch=1, updates_per_sample=1, epochs=30,
                 lr_gen=5e-4, lr_disc=5e-4, validation_metric="nmi",
                 validation_fraction=0.1, kmeans_restarts=10,
                 constant_features=False, random_state=0):
        self.objective = objective
        self.gen_widths = gen_widths
        self.disc_widths = disc_widths
        self.alpha = alpha
        self.beta = beta
        self.graphs_per_epoch = graphs_per_epoch
        self.updates_per_sample = updates_per_sample
        self.epochs = epochs
        self.lr_gen = lr_gen
        self.lr_disc = lr_disc
        self.validation_metric = validation_metric
        self.validation_fraction = validation_fraction
        self.kmeans_restarts = kmeans_restarts
        self.constant_features = constant_features
        self.random_state = random_state

    def _config(self) -> TrainConfig:
        return TrainConfig(
            gen_widths=tuple(self.gen_widths), disc_widths=tuple(self.disc_widths),
            alpha=self.alpha, beta=self.beta, graphs_per_epoch=self.graphs_per_epoch,
            updates_per_sample=self.updates_per_sample, epochs=self.epochs,
            lr_gen=self.lr_gen, lr_disc=self.lr_disc,
            validation_metric=self.validation_metric,
            kmeans_restarts=self.kmeans_restarts,
            constant_features=self.constant_features, seed=self.random_state)

    def fit(self, graphs, y):
        """Train on labeled graphs; the trailing fraction validates checkpoints."""
        gs, ps = check_collection(graphs, y)
        if len(gs) < 2:
            raise InputError("need at least two graphs (one trains, one validates)")
        n_val = max(1, int(round(self.validation_fraction * len(gs))))
        n_train = len(gs) - n_val
        if n_train < 1:
            raise InputError("validation_fraction leaves no training graphs")
        split = DatasetSplit(gs, ps, [p.num_communities for p in ps],
                             [f"graph_{i:04d}" for i in range(len(gs))], n_train, n_val)
        result = train(split, self._config(), self.objective)
        self.checkpoint_ = result.checkpoint
        self.history_ = result.history
        self.best_score_ = result.checkpoint.best_val_score
        self.best_epoch_ = result.checkpoint.best_epoch
        return self

    def transform(self, graph) -> np.ndarray:
        """Embed one graph with the trained feature encoder."""
        self._check_fitted()
        g = as_graph(graph)
        ckpt = self.checkpoint_
        x = structural_features(g, ckpt.variant)
        z = reduced_features(g, x, ckpt.config)
        u, _ = encode(ckpt.generator(), adjacency_propagation(g), z)
        return u

    def predict(self, graph, n_communities: int, seed: int = 0) -> np.ndarray:
        """Community labels for one unseen graph with a given community count."""
        self._check_fitted()
        result = infer(self.checkpoint_, as_graph(graph), n_communities, seed=seed)
        return result.partition.labels

    def _check_fitted(self):
        if not hasattr(self, "checkpoint_"):
            raise InputError("estimator is not fitted; call fit first")
