"""Graph-collection handling: manifests, positional train/val/test splits, disk IO.

A dataset directory holds ``graph_%04d.edges`` / ``graph_%04d.labels`` files
plus ``manifest.tsv`` with one line per graph: path, node count, edge count,
community count, and a split tag (``-`` until :func:`assign_splits` runs).
Splits are positional, never random: the first 80% of graphs train, the next
10% validate, the last 10% test.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import InputError
from .graph import Graph, load_edge_list, save_edge_list
from .partition import Partition, load_labels, save_labels

MANIFEST_NAME = "manifest.tsv"
SPLIT_TAGS = ("train", "val", "test")


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    num_nodes: int
    num_edges: int
    num_communities: int
    split: str = "-"


def write_manifest(entries, manifest_path) -> None:
    with open(manifest_path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.path}\t{e.num_nodes}\t{e.num_edges}\t"
                     f"{e.num_communities}\t{e.split}\n")


def read_manifest(manifest_path) -> list[ManifestEntry]:
    entries = []
    with open(manifest_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise InputError(f"malformed manifest line: {line!r}")
            entries.append(ManifestEntry(parts[0], int(parts[1]), int(parts[2]),
                                         int(parts[3]), parts[4]))
    return entries


def split_counts(total: int) -> tuple[int, int, int]:
    """Positional 80/10/10 sizes; training takes any rounding remainder."""
    n_val = max(total // 10, 1) if total >= 3 else 0
    n_test = max(total // 10, 1) if total >= 3 else 0
    n_train = total - n_val - n_test
    if n_train < 1:
        raise InputError("too few graphs to split")
    return n_train, n_val, n_test


def assign_splits(entries) -> list[ManifestEntry]:
    """Tag manifest entries train/val/test by position (first 80% / 10% / 10%)."""
    n_train, n_val, _ = split_counts(len(entries))
    out = []
    for i, e in enumerate(entries):
        tag = "train" if i < n_train else ("val" if i < n_train + n_val else "test")
        out.append(replace(e, split=tag))
    return out


def write_dataset(outdir, items, manifest: bool = True) -> str:
    """Write ``(Graph, Partition)`` pairs as edge/label files plus a manifest."""
    os.makedirs(outdir, exist_ok=True)
    entries = []
    for i, (g, p) in enumerate(items):
        stem = f"graph_{i:04d}"
        save_edge_list(g, os.path.join(outdir, stem + ".edges"))
        if p is not None:
            save_labels(p, os.path.join(outdir, stem + ".labels"))
        k = p.num_communities if p is not None else 0
        entries.append(ManifestEntry(stem + ".edges", g.num_nodes, g.num_edges, k))
    path = os.path.join(outdir, MANIFEST_NAME)
    if manifest:
        write_manifest(entries, path)
    return path


@dataclass
class DatasetSplit:
    """An ordered graph collection with optional labels and positional splits."""

    graphs: list[Graph]
    labels: list  # Partition | None per graph
    num_communities: list[int]
    names: list[str]
    n_train: int
    n_val: int

    @classmethod
    def from_lists(cls, graphs, labels=None, names=None) -> "DatasetSplit":
        labels = list(labels) if labels is not None else [None] * len(graphs)
        if len(labels) != len(graphs):
            raise InputError("labels list must match the graph list")
        ks = [p.num_communities if p is not None else 0 for p in labels]
        names = list(names) if names is not None else [f"graph_{i:04d}" for i in range(len(graphs))]
        n_train, n_val, _ = split_counts(len(graphs))
        return cls(list(graphs), labels, ks, names, n_train, n_val)

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def train_indices(self) -> range:
        return range(0, self.n_train)

    @property
    def val_indices(self) -> range:
        return range(self.n_train, self.n_train + self.n_val)

    @property
    def test_indices(self) -> range:
        return range(self.n_train + self.n_val, len(self.graphs))


def load_dataset(directory, labels_dir=None) -> DatasetSplit:
    """Load a dataset directory via its manifest.

    Ground-truth labels come from the ``.labels`` file next to each graph.
    ``labels_dir`` overrides training/validation labels with synthesized ones
    (files of the same stem); test-set labels are never read from there.
    """
    manifest_path = os.path.join(directory, MANIFEST_NAME)
    if not os.path.exists(manifest_path):
        raise InputError(f"no {MANIFEST_NAME} in {directory}")
    entries = read_manifest(manifest_path)
    if any(e.split in SPLIT_TAGS for e in entries):
        order = [e for e in entries if e.split == "train"] + \
                [e for e in entries if e.split == "val"] + \
                [e for e in entries if e.split == "test"]
        n_train = sum(e.split == "train" for e in entries)
        n_val = sum(e.split == "val" for e in entries)
    else:
        order = entries
        n_train, n_val, _ = split_counts(len(entries))

    graphs, labels, ks, names = [], [], [], []
    for i, e in enumerate(order):
        graphs.append(load_edge_list(os.path.join(directory, e.path)))
        stem = os.path.splitext(e.path)[0]
        label_path = os.path.join(directory, stem + ".labels")
        if labels_dir is not None and i < n_train + n_val:
            override = os.path.join(labels_dir, stem + ".labels")
            if os.path.exists(override):
                label_path = override
        part = load_labels(label_path) if os.path.exists(label_path) else None
        labels.append(part)
        ks.append(part.num_communities if part is not None else e.num_communities)
        names.append(stem)
    return DatasetSplit(graphs, labels, ks, names, n_train, n_val)
