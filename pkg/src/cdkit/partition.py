"""Node partitions, membership indicators, the label-induced graph, and NMI / accuracy.

A :class:`Partition` assigns every node to exactly one of ``K`` communities.
From it we derive the binary membership matrix ``R`` (one-hot rows), the two
membership-indicator conventions used by the training losses, and the
label-induced adjacency ``A = R R^T`` whose connected components reproduce
the communities exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import CapabilityError, DegeneratePartitionError, InputError

INDICATOR_KINDS = ("binary", "modularity", "ncut")


@dataclass(frozen=True)
class Partition:
    """Disjoint assignment of ``N`` nodes to communities ``0..K-1``, all nonempty."""

    labels: np.ndarray
    num_communities: int

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build a partition from arbitrary integer labels, compacting them to 0..K-1.

        Compaction keeps the sorted order of the distinct input values, so a
        relabeling permutation of the input yields a permutation-equivalent
        partition.
        """
        arr = np.asarray(labels)
        if arr.ndim != 1 or arr.size == 0:
            raise InputError("labels must be a nonempty 1-d integer sequence")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(arr == arr.astype(np.int64)):
                raise InputError("labels must be integers")
        uniq, inverse = np.unique(arr.astype(np.int64), return_inverse=True)
        compact = inverse.astype(np.int64)
        compact.flags.writeable = False
        return cls(compact, len(uniq))

    def __len__(self) -> int:
        return len(self.labels)

    def members(self) -> list[np.ndarray]:
        """Node index arrays per community, ordered by community id."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.num_communities + 1))
        return [order[bounds[r]:bounds[r + 1]] for r in range(self.num_communities)]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_communities)


def indicator(p: Partition, kind: str, g=None) -> np.ndarray:
    """N x K membership indicator.

    ``"binary"`` / ``"modularity"``: one-hot rows (``R``), which satisfies
    ``tr(H^T H) = N``. ``"ncut"``: degree-weighted entries
    ``H_ir = sqrt(d_i / vol(C_r))`` for members, which satisfies ``H^T H = I``;
    this kind needs the graph for its degrees.
    """
    if kind not in INDICATOR_KINDS:
        raise InputError(f"unknown indicator kind {kind!r}")
    n, k = len(p.labels), p.num_communities
    h = np.zeros((n, k))
    if kind in ("binary", "modularity"):
        h[np.arange(n), p.labels] = 1.0
        return h
    if g is None:
        raise InputError("the ncut indicator requires the graph")
    d = g.degrees.astype(np.float64)
    vols = np.zeros(k)
    np.add.at(vols, p.labels, d)
    if np.any(vols == 0.0):
        raise DegeneratePartitionError("community with zero volume")
    h[np.arange(n), p.labels] = np.sqrt(d / vols[p.labels])
    return h


@dataclass(frozen=True)
class LabelInducedGraph:
    """The graph with adjacency ``R R^T`` implied by a partition.

    Its off-diagonal support makes every community a fully connected component
    and the diagonal entries equal 1. The matrix is kept implicit as block
    structure; ``dense`` materializes it for small node counts.
    """

    partition: Partition
    block_sizes: np.ndarray = field(init=False)

    def __post_init__(self):
        sizes = self.partition.sizes()
        sizes.flags.writeable = False
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def num_nodes(self) -> int:
        return len(self.partition)

    def members(self) -> list[np.ndarray]:
        return self.partition.members()

    def dense(self, cap: int = 4096) -> np.ndarray:
        if self.num_nodes > cap:
            raise CapabilityError(f"dense materialization capped at {cap} nodes")
        lab = self.partition.labels
        return (lab[:, None] == lab[None, :]).astype(np.float64)


def label_induced_adjacency(p: Partition) -> LabelInducedGraph:
    """Label-induced graph of a partition (communities become all-ones blocks)."""
    return LabelInducedGraph(p)


def _check_same_length(truth: Partition, result: Partition) -> int:
    if len(truth) != len(result):
        raise InputError("partitions cover different numbers of nodes")
    return len(truth)


def _contingency(truth: Partition, result: Partition) -> np.ndarray:
    table = np.zeros((truth.num_communities, result.num_communities), dtype=np.int64)
    np.add.at(table, (truth.labels, result.labels), 1)
    return table


def nmi(truth: Partition, result: Partition) -> float:
    """Normalized mutual information in [0, 1], symmetric in its arguments.

    Computed as ``2 I / (H_truth + H_result)`` with natural logs and the
    ``0 * log 0 = 0`` convention. When both partitions are single-community the
    partitions are identical and the value is 1.
    """
    n = _check_same_length(truth, result)
    table = _contingency(truth, result)
    n_r = table.sum(axis=1)
    n_s = table.sum(axis=0)
    mutual = 0.0
    for r in range(table.shape[0]):
        for s in range(table.shape[1]):
            n_rs = table[r, s]
            if n_rs == 0:
                continue
            mutual += (n_rs / n) * math.log(n * n_rs / (n_r[r] * n_s[s]))
    h_truth = -sum((c / n) * math.log(c / n) for c in n_r if c)
    h_result = -sum((c / n) * math.log(c / n) for c in n_s if c)
    denom = h_truth + h_result
    if denom == 0.0:
        return 1.0  # both single-community, hence identical
    return float(2.0 * mutual / denom)


def accuracy(truth: Partition, result: Partition) -> float:
    """Best-mapping clustering accuracy in [0, 1].

    Builds the confusion matrix (zero-padded to square when the community
    counts differ), solves the maximum-weight assignment, and returns the
    matched node fraction. Invariant under relabeling of either argument.
    """
    n = _check_same_length(truth, result)
    table = _contingency(truth, result).astype(np.float64)
    k = max(table.shape)
    padded = np.zeros((k, k))
    padded[:table.shape[0], :table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum() / n)


def load_labels(path) -> Partition:
    """Read the label text format: one integer community id per line, line i for node i."""
    with open(path, "r", encoding="utf-8") as fh:
        values = [int(line.strip()) for line in fh if line.strip()]
    return Partition.from_labels(values)


def save_labels(p: Partition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in p.labels:
            fh.write(f"{v}\n")
