"""Evaluation harness: per-method quality/runtime records and trade-off scores.

Evaluation runs methods on the test portion of a dataset split only, records
the four quality metrics (NMI / AC when ground truth exists, modularity and
normalized cut always) plus wall-clock runtime per graph, and summarizes the
quality-efficiency trade-off of each method as the product of its normalized
quality and normalized efficiency.
"""

from __future__ import annotations

import csv
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .baselines import baseline_greedy_modularity, baseline_spectral
from .dataset import DatasetSplit
from .errors import InputError, NormalizationError
from .graph import Graph, modularity_score, ncut_score
from .model import Checkpoint, infer
from .partition import accuracy, nmi

QUALITY_METRICS = ("nmi", "ac", "modularity", "ncut")
RESULT_COLUMNS = ("method", "graph", "nmi", "ac", "modularity", "ncut",
                  "runtime", "feat", "prop", "clus")


def tos(quality: float, kind: str, runtime: float, max_runtime: float,
        max_ncut: float | None = None) -> float:
    """Trade-off score: normalized quality times normalized efficiency, in [0, 1].

    Quality normalizes as ``Q`` for NMI/AC, ``(Q + 1)/2`` for modularity and
    ``(Q_m - Q)/Q_m`` for NCut (``Q_m`` = worst cut among the compared
    methods); efficiency normalizes as ``(E_m - E)/E_m`` against the slowest
    compared method. Larger is better on both axes.
    """
    if kind not in QUALITY_METRICS:
        raise InputError(f"unknown quality metric {kind!r}")
    if max_runtime == 0.0:
        raise NormalizationError("max runtime is zero")
    if runtime > max_runtime:
        raise InputError("runtime exceeds the stated maximum")
    if kind in ("nmi", "ac"):
        q_hat = quality
    elif kind == "modularity":
        q_hat = (quality + 1.0) / 2.0
    else:
        if max_ncut is None:
            raise InputError("ncut scores need the maximum cut value")
        if max_ncut == 0.0:
            raise NormalizationError("max ncut is zero")
        if quality > max_ncut:
            raise InputError("ncut exceeds the stated maximum")
        q_hat = (max_ncut - quality) / max_ncut
    e_hat = (max_runtime - runtime) / max_runtime
    return float(q_hat * e_hat)


@dataclass
class MethodRecord:
    """Per-graph metrics and runtimes of one method, with recomputable aggregates."""

    method: str
    graphs: list = field(default_factory=list)
    metrics: dict = field(default_factory=lambda: {m: [] for m in QUALITY_METRICS})
    runtimes: list = field(default_factory=list)
    breakdowns: list = field(default_factory=list)  # {"feat","prop","clus"} or None

    def add(self, graph_name: str, metrics: dict, runtime: float, breakdown=None) -> None:
        self.graphs.append(graph_name)
        for m in QUALITY_METRICS:
            self.metrics[m].append(metrics.get(m))
        self.runtimes.append(runtime)
        self.breakdowns.append(breakdown)

    def mean(self, metric: str):
        values = self.runtimes if metric == "runtime" else self.metrics[metric]
        present = [v for v in values if v is not None]
        return float(np.mean(present)) if present else None

    def std(self, metric: str):
        values = self.runtimes if metric == "runtime" else self.metrics[metric]
        present = [v for v in values if v is not None]
        return float(np.std(present)) if present else None


class CheckpointMethod:
    """Online inference with a trained checkpoint (records feat/prop/clus phases)."""

    def __init__(self, ckpt: Checkpoint, seed: int = 0, name: str | None = None):
        self.ckpt = ckpt
        self.seed = seed
        self.name = name or f"model-{ckpt.variant}"

    def run(self, g: Graph, k: int):
        result = infer(self.ckpt, g, k, seed=self.seed)
        return result.partition, result.timings


class SpectralMethod:
    name = "spectral"

    def __init__(self, restarts: int = 10, seed: int = 0):
        self.restarts = restarts
        self.seed = seed

    def run(self, g: Graph, k: int):
        t0 = time.perf_counter()
        part = baseline_spectral(g, k, restarts=self.restarts, seed=self.seed)
        return part, {"total": time.perf_counter() - t0}


class GreedyModularityMethod:
    name = "greedy"

    def run(self, g: Graph, k: int):
        t0 = time.perf_counter()
        part = baseline_greedy_modularity(g, k)
        return part, {"total": time.perf_counter() - t0}


def run_eval(split: DatasetSplit, methods, out_dir=None, strict_labels: bool = False):
    """Evaluate methods on the test graphs of a split.

    Returns ``(records, tos_table)`` where ``tos_table`` maps
    ``(method, metric)`` to a trade-off score computed over the evaluated
    method set. With fewer than two methods every efficiency normalizer
    degenerates to zero and a warning is emitted. When ``out_dir`` is given the
    per-graph rows, the aggregates and the trade-off scores are written as CSV.
    """
    test_idx = list(split.test_indices)
    if not test_idx:
        raise InputError("the split has no test graphs")
    if len(methods) < 2:
        warnings.warn("trade-off scores need at least two methods; "
                      "a lone method always scores 0", stacklevel=2)

    records = []
    for method in methods:
        rec = MethodRecord(method.name)
        for i in test_idx:
            g = split.graphs[i]
            k = split.num_communities[i]
            if k < 1:
                raise InputError(f"test graph {split.names[i]} has no community count")
            part, timings = method.run(g, k)
            row = {"modularity": modularity_score(g, part),
                   "ncut": ncut_score(g, part)}
            truth = split.labels[i]
            if truth is not None:
                row["nmi"] = nmi(truth, part)
                row["ac"] = accuracy(truth, part)
            elif strict_labels:
                raise InputError(f"test graph {split.names[i]} has no ground truth")
            breakdown = {k2: timings[k2] for k2 in ("feat", "prop", "clus")
                         if k2 in timings}
            rec.add(split.names[i], row, timings["total"], breakdown or None)
        records.append(rec)

    tos_table = compute_tos(records)
    if out_dir is not None:
        write_eval_csv(records, tos_table, out_dir)
    return records, tos_table


def compute_tos(records) -> dict:
    """Trade-off scores per (method, metric) from aggregate means.

    The runtime and worst-cut normalizers are taken over the supplied record
    set, mirroring how the scores are defined relative to a comparison set.
    """
    max_runtime = max(r.mean("runtime") for r in records)
    ncut_means = [r.mean("ncut") for r in records if r.mean("ncut") is not None]
    max_ncut = max(ncut_means) if ncut_means else None
    table = {}
    for r in records:
        for metric in QUALITY_METRICS:
            q = r.mean(metric)
            if q is None:
                continue
            table[(r.method, metric)] = tos(q, metric, r.mean("runtime"),
                                            max_runtime, max_ncut)
    return table


def _fmt(v) -> str:
    return "" if v is None else f"{v:.6g}"


def write_eval_csv(records, tos_table, out_dir) -> None:
    import os
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "results.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_COLUMNS)
        for rec in records:
            for i, name in enumerate(rec.graphs):
                bd = rec.breakdowns[i] or {}
                w.writerow([rec.method, name,
                            _fmt(rec.metrics["nmi"][i]), _fmt(rec.metrics["ac"][i]),
                            _fmt(rec.metrics["modularity"][i]), _fmt(rec.metrics["ncut"][i]),
                            _fmt(rec.runtimes[i]), _fmt(bd.get("feat")),
                            _fmt(bd.get("prop")), _fmt(bd.get("clus"))])
    with open(os.path.join(out_dir, "aggregates.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        header = ["method"]
        for m in QUALITY_METRICS + ("runtime",):
            header += [f"{m}_mean", f"{m}_std"]
        w.writerow(header)
        for rec in records:
            row = [rec.method]
            for m in QUALITY_METRICS + ("runtime",):
                row += [_fmt(rec.mean(m)), _fmt(rec.std(m))]
            w.writerow(row)
    write_tos_csv(tos_table, os.path.join(out_dir, "tos.csv"))


def write_tos_csv(tos_table, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "metric", "tos"])
        for (method, metric), value in sorted(tos_table.items()):
            w.writerow([method, metric, _fmt(value)])


def tos_from_aggregates_csv(in_path, out_path) -> dict:
    """Recompute trade-off scores from a previously written aggregates CSV."""
    rows = []
    with open(in_path, "r", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows.append(row)
    if not rows:
        raise InputError(f"{in_path} holds no aggregate rows")
    records = []
    for row in rows:
        rec = MethodRecord(row["method"])
        metrics = {m: float(row[f"{m}_mean"]) for m in QUALITY_METRICS
                   if row.get(f"{m}_mean")}
        rec.add("aggregate", metrics, float(row["runtime_mean"]))
        records.append(rec)
    table = compute_tos(records)
    write_tos_csv(table, out_path)
    return table
