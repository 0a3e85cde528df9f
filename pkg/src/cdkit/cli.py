"""Command-line front end.

Subcommands: ``generate`` (benchmark datasets), ``split`` (tag the manifest
80/10/10), ``label`` (synthesize training labels with a baseline), ``train``,
``infer``, ``eval``, ``tos`` (recompute trade-off scores from an aggregates
CSV), and ``gradcheck`` (gradient self-test). Training hyperparameters come
from a key=value config file; any flag given on the command line overrides the
file.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import model as M
from .baselines import baseline_greedy_modularity, baseline_spectral
from .dataset import (MANIFEST_NAME, assign_splits, load_dataset, read_manifest,
                      write_dataset, write_manifest)
from .errors import InputError
from .generators import GnSpec, LfrSpec, generate_gn, generate_lfr
from .graph import load_edge_list
from .harness import (CheckpointMethod, GreedyModularityMethod, SpectralMethod,
                      run_eval, tos_from_aggregates_csv)
from .partition import save_labels

_CONFIG_FIELDS = {
    "gen_widths": lambda s: tuple(int(v) for v in str(s).split(",")),
    "disc_widths": lambda s: tuple(int(v) for v in str(s).split(",")),
    "alpha": float,
    "beta": float,
    "graphs_per_epoch": int,
    "updates_per_sample": int,
    "epochs": int,
    "lr_gen": float,
    "lr_disc": float,
    "validation_metric": str,
    "kmeans_restarts": int,
    "constant_features": lambda s: str(s).lower() in ("1", "true", "yes"),
    "seed": int,
}


def parse_config_file(path) -> dict:
    """Read key=value lines ('#' comments allowed) into TrainConfig keyword args."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError(f"config line is not key=value: {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_FIELDS:
                raise InputError(f"unknown config key {key!r}")
            values[key] = _CONFIG_FIELDS[key](raw)
    return values


def _build_config(args) -> M.TrainConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config))
    for key, conv in _CONFIG_FIELDS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = conv(flag)
    return M.TrainConfig(**values)


def _cmd_generate(args) -> int:
    items = []
    if args.family == "gn":
        for i in range(args.count):
            spec = GnSpec(args.nodes, args.communities, args.p_in, seed=args.seed + i)
            items.append(generate_gn(spec))
    else:
        for i in range(args.count):
            spec = LfrSpec(args.nodes, args.avg_degree, args.max_degree,
                           args.min_community, args.max_community, args.mixing,
                           tau_degree=args.tau_degree, tau_community=args.tau_community,
                           seed=args.seed + i, num_nodes_max=args.nodes_max)
            items.append(generate_lfr(spec))
    manifest = write_dataset(args.outdir, items)
    print(f"wrote {len(items)} graphs to {args.outdir} ({manifest})")
    return 0


def _cmd_split(args) -> int:
    manifest = os.path.join(args.dataset, MANIFEST_NAME)
    entries = assign_splits(read_manifest(manifest))
    write_manifest(entries, manifest)
    counts = {tag: sum(e.split == tag for e in entries) for tag in ("train", "val", "test")}
    print(f"tagged {manifest}: {counts['train']} train / {counts['val']} val / "
          f"{counts['test']} test")
    return 0


def _cmd_label(args) -> int:
    split = load_dataset(args.dataset)
    os.makedirs(args.outdir, exist_ok=True)
    written = 0
    for i in list(split.train_indices) + list(split.val_indices):
        g = split.graphs[i]
        k = split.num_communities[i]
        if k < 1:
            raise InputError(f"{split.names[i]}: community count unknown, cannot label")
        if args.method == "spectral":
            part = baseline_spectral(g, k, seed=args.seed)
        else:
            part = baseline_greedy_modularity(g, k)
        save_labels(part, os.path.join(args.outdir, split.names[i] + ".labels"))
        written += 1
    print(f"labeled {written} train/val graphs with {args.method} into {args.outdir}")
    return 0


def _cmd_train(args) -> int:
    cfg = _build_config(args)
    split = load_dataset(args.dataset, labels_dir=args.labels_dir)
    result = M.train(split, cfg, args.variant)
    M.save_checkpoint(result.checkpoint, args.out)
    print(f"saved {args.out}: best {cfg.validation_metric} "
          f"{result.checkpoint.best_val_score:.4f} at epoch {result.checkpoint.best_epoch}")
    return 0


def _cmd_infer(args) -> int:
    ckpt = M.load_checkpoint(args.checkpoint)
    g = load_edge_list(args.graph)
    result = M.infer(ckpt, g, args.communities, seed=args.seed)
    if args.out:
        save_labels(result.partition, args.out)
        print(f"wrote {args.out}")
    else:
        print(" ".join(str(v) for v in result.partition.labels))
    t = result.timings
    print(f"timings: feat {t['feat']:.4f}s  prop {t['prop']:.4f}s  "
          f"clus {t['clus']:.4f}s  total {t['total']:.4f}s", file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    split = load_dataset(args.dataset)
    methods = []
    for name in args.methods.split(","):
        name = name.strip()
        if name == "model":
            if not args.checkpoint:
                raise InputError("the model method needs --checkpoint")
            methods.append(CheckpointMethod(M.load_checkpoint(args.checkpoint),
                                            seed=args.seed))
        elif name == "spectral":
            methods.append(SpectralMethod(seed=args.seed))
        elif name == "greedy":
            methods.append(GreedyModularityMethod())
        else:
            raise InputError(f"unknown method {name!r}")
    records, tos_table = run_eval(split, methods, out_dir=args.out)
    for rec in records:
        parts = [f"{m}={rec.mean(m):.4f}" for m in ("nmi", "ac", "modularity", "ncut")
                 if rec.mean(m) is not None]
        parts.append(f"runtime={rec.mean('runtime'):.4f}s")
        print(f"{rec.method}: " + "  ".join(parts))
    print(f"wrote CSVs to {args.out}")
    return 0


def _cmd_tos(args) -> int:
    table = tos_from_aggregates_csv(args.records, args.out)
    for (method, metric), value in sorted(table.items()):
        print(f"{method} {metric}: {value:.4f}")
    return 0


def _cmd_gradcheck(args) -> int:
    results = M.gradient_selftest(seed=args.seed)
    worst = 0.0
    for name, err in sorted(results.items()):
        print(f"{name}: max relative error {err:.3e}")
        worst = max(worst, err)
    if worst >= 1e-4:
        print("FAIL: a gradient check exceeded 1e-4", file=sys.stderr)
        return 1
    print("all gradient checks passed (< 1e-4)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdkit",
                                     description="Inductive community detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a benchmark dataset")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    gn = gen_sub.add_parser("gn", help="equal-block stochastic block model")
    gn.add_argument("--nodes", type=int, required=True)
    gn.add_argument("--communities", type=int, required=True)
    gn.add_argument("--p-in", dest="p_in", type=float, required=True)
    lfr = gen_sub.add_parser("lfr", help="power-law benchmark")
    lfr.add_argument("--nodes", type=int, required=True)
    lfr.add_argument("--nodes-max", dest="nodes_max", type=int, default=None)
    lfr.add_argument("--avg-degree", dest="avg_degree", type=float, required=True)
    lfr.add_argument("--max-degree", dest="max_degree", type=int, required=True)
    lfr.add_argument("--min-community", dest="min_community", type=int, required=True)
    lfr.add_argument("--max-community", dest="max_community", type=int, required=True)
    lfr.add_argument("--mixing", type=float, required=True)
    lfr.add_argument("--tau-degree", dest="tau_degree", type=float, default=2.0)
    lfr.add_argument("--tau-community", dest="tau_community", type=float, default=1.0)
    for p in (gn, lfr):
        p.add_argument("--count", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--outdir", required=True)
        p.set_defaults(func=_cmd_generate)

    spl = sub.add_parser("split", help="tag a dataset manifest 80/10/10 by position")
    spl.add_argument("--dataset", required=True)
    spl.set_defaults(func=_cmd_split)

    lab = sub.add_parser("label", help="synthesize train/val labels with a baseline")
    lab.add_argument("--dataset", required=True)
    lab.add_argument("--method", choices=("spectral", "greedy"), default="spectral")
    lab.add_argument("--outdir", required=True)
    lab.add_argument("--seed", type=int, default=0)
    lab.set_defaults(func=_cmd_label)

    trn = sub.add_parser("train", help="offline training")
    trn.add_argument("--dataset", required=True)
    trn.add_argument("--variant", choices=M.VARIANTS, required=True)
    trn.add_argument("--config", default=None, help="key=value config file")
    trn.add_argument("--labels-dir", dest="labels_dir", default=None,
                     help="directory of synthesized train/val labels")
    trn.add_argument("--out", required=True)
    for key in _CONFIG_FIELDS:
        trn.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    trn.set_defaults(func=_cmd_train)

    inf = sub.add_parser("infer", help="online community detection on one graph")
    inf.add_argument("--checkpoint", required=True)
    inf.add_argument("--graph", required=True)
    inf.add_argument("--communities", type=int, required=True)
    inf.add_argument("--out", default=None)
    inf.add_argument("--seed", type=int, default=0)
    inf.set_defaults(func=_cmd_infer)

    ev = sub.add_parser("eval", help="evaluate methods on the test split")
    ev.add_argument("--dataset", required=True)
    ev.add_argument("--checkpoint", default=None)
    ev.add_argument("--methods", default="model,spectral")
    ev.add_argument("--out", required=True)
    ev.add_argument("--seed", type=int, default=0)
    ev.set_defaults(func=_cmd_eval)

    ts = sub.add_parser("tos", help="trade-off scores from an aggregates CSV")
    ts.add_argument("--records", required=True)
    ts.add_argument("--out", required=True)
    ts.set_defaults(func=_cmd_tos)

    gc = sub.add_parser("gradcheck", help="finite-difference gradient self-test")
    gc.add_argument("--seed", type=int, default=0)
    gc.set_defaults(func=_cmd_gradcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
