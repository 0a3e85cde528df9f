"""Lloyd k-means with k-means++ seeding and multiple restarts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .partition import Partition


@dataclass(frozen=True)
class KMeansResult:
    labels: Partition
    centroids: np.ndarray
    inertia: float
    restarts_run: int


def _plusplus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centroids[c] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[c]) ** 2).sum(axis=1))
    return centroids


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # |x|^2 + |c|^2 - 2 x.c, clipped at 0 against cancellation
    d2 = (points ** 2).sum(axis=1)[:, None] + (centroids ** 2).sum(axis=1)[None, :]
    d2 -= 2.0 * points @ centroids.T
    return np.maximum(d2, 0.0)


def _lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int):
    n, k = len(points), len(centroids)
    labels = None
    for _ in range(max_iter):
        d2 = _squared_distances(points, centroids)
        new_labels = d2.argmin(axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, points)
        nonempty = counts > 0
        centroids[nonempty] = sums[nonempty] / counts[nonempty, None]
        empties = np.flatnonzero(~nonempty)
        if len(empties):
            # reseed each empty centroid at the point farthest from its own centroid
            dist_home = d2[np.arange(n), labels].copy()
            for c in empties:
                far = int(dist_home.argmax())
                centroids[c] = points[far]
                dist_home[far] = -1.0
    d2 = _squared_distances(points, centroids)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(n), labels].sum())
    return labels, centroids, inertia


def kmeans(points: np.ndarray, k: int, restarts: int = 10, seed=None,
           max_iter: int = 300) -> KMeansResult:
    """Best-of-``restarts`` k-means clustering of the rows of ``points``.

    Each restart is seeded with k-means++ and run to an assignment fixpoint
    (or ``max_iter``). Empty clusters are repaired during the update step by
    reseeding at the point farthest from its assigned centroid. Deterministic
    given ``seed``.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InputError("points must be a 2-d array")
    n = len(points)
    if not 1 <= k <= n:
        raise InputError(f"k must be in [1, {n}]")
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        init = _plusplus_init(points, k, rng)
        labels, centroids, inertia = _lloyd(points, init, max_iter)
        if best is None or inertia < best[2]:
            best = (labels, centroids.copy(), inertia)
    labels, centroids, inertia = best
    return KMeansResult(Partition.from_labels(labels), centroids, inertia, restarts)
