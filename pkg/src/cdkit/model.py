"""Adversarial dual-GNN community model: offline training, online inference.

The generator holds one stack of graph-convolution weights used by two
encoders: the *feature encoder* propagates the reduced features over the
original topology, the *label-induced encoder* propagates the same features
over the block graph implied by the training labels. A discriminator learns to
tell the two embeddings apart while the generator learns to fool it, on top of
a feature-reconstruction term and a clustering-regularization term weighted by
``alpha`` and ``beta``. Online, only the feature encoder runs: features in,
embedding out, k-means on top.
"""

from __future__ import annotations

import copy
import json
import struct
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import sparse

from .coarsen import constant_features, extract_features
from .dataset import DatasetSplit
from .errors import InputError, TrainingDivergedError
from .graph import Graph, StructMatrix, modularity_matrix, modularity_score, norm_adj
from .kmeans import kmeans
from .nn import (Adam, SIGMOID_CLAMP, dense_backward, dense_forward, gcn_backward,
                 gcn_forward, xavier_init)
from .partition import Partition, indicator, nmi

VARIANTS = ("modularity", "ncut")
_MAGIC = b"CDKITCKP"
_VERSION = 1


# ---------------------------------------------------------------------------
# Propagation operators
# ---------------------------------------------------------------------------

class DenseProp:
    """Propagation by an explicit dense matrix (test oracle / tiny graphs)."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ f

    def dense(self) -> np.ndarray:
        return self.matrix


class SparseProp:
    """Propagation by a symmetric sparse matrix."""

    def __init__(self, matrix: sparse.csr_array):
        self.matrix = matrix

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ f

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


class BlockProp:
    """Normalized propagation over a label-induced graph, in closed block form.

    With self-edges added on top of the unit diagonal of ``R R^T``, every
    member of a community of size s has degree s + 1, so propagation reduces to
    ``out_i = (sum_{j in community} f_j + f_i) / (s + 1)``.
    """

    def __init__(self, members: list):
        self.members = members

    def apply(self, f: np.ndarray) -> np.ndarray:
        out = np.empty_like(f)
        for idx in self.members:
            block = f[idx]
            out[idx] = (block.sum(axis=0) + block) / (len(idx) + 1.0)
        return out

    def dense(self) -> np.ndarray:
        n = sum(len(m) for m in self.members)
        p = np.zeros((n, n))
        for idx in self.members:
            s = len(idx)
            p[np.ix_(idx, idx)] = 1.0 / (s + 1.0)
            p[idx, idx] = 2.0 / (s + 1.0)
        return p


def adjacency_propagation(g: Graph) -> SparseProp:
    """``D^-1/2 (A + I) D^-1/2`` for the original topology."""
    a_hat = sparse.csr_array(g.adjacency + sparse.eye_array(g.num_nodes, format="csr"))
    dis = sparse.diags_array(1.0 / np.sqrt(g.degrees + 1.0), format="csr")
    return SparseProp(sparse.csr_array(dis @ a_hat @ dis))


def community_propagation(p: Partition) -> BlockProp:
    """Normalized propagation over the label-induced graph of a partition."""
    return BlockProp(p.members())


# ---------------------------------------------------------------------------
# Networks
# ---------------------------------------------------------------------------

class GeneratorNet:
    """Stack of bias-free tanh graph-convolution layers shared by both encoders."""

    def __init__(self, weights: list):
        self.weights = weights

    @classmethod
    def init(cls, widths, rng: np.random.Generator) -> "GeneratorNet":
        if len(widths) < 2:
            raise InputError("generator needs at least input and output widths")
        return cls([xavier_init((a, b), rng) for a, b in zip(widths, widths[1:])])

    @property
    def widths(self) -> tuple:
        return tuple([self.weights[0].shape[0]] + [w.shape[1] for w in self.weights])


class DiscriminatorNet:
    """Fully connected classifier: ReLU hidden layers, sigmoid scalar output."""

    def __init__(self, weights: list, biases: list):
        self.weights = weights
        self.biases = biases

    @classmethod
    def init(cls, widths, rng: np.random.Generator) -> "DiscriminatorNet":
        if len(widths) < 2 or widths[-1] != 1:
            raise InputError("discriminator widths must end in 1")
        weights = [xavier_init((a, b), rng) for a, b in zip(widths, widths[1:])]
        biases = [np.zeros(b) for b in widths[1:]]
        return cls(weights, biases)

    @property
    def widths(self) -> tuple:
        return tuple([self.weights[0].shape[0]] + [w.shape[1] for w in self.weights])

    def params(self) -> list:
        return self.weights + self.biases


def encode(gen: GeneratorNet, prop, z: np.ndarray):
    """Run one encoder over features ``z``; returns the embedding and layer caches."""
    f = z
    caches = []
    for w in gen.weights:
        f, cache = gcn_forward(prop, f, w)
        caches.append(cache)
    return f, caches


def encoder_backward(gen: GeneratorNet, caches, d_out: np.ndarray):
    grads = [None] * len(gen.weights)
    d = d_out
    for i in range(len(gen.weights) - 1, -1, -1):
        d, grads[i] = gcn_backward(caches[i], gen.weights[i], d)
    return d, grads


def decode(u: np.ndarray) -> np.ndarray:
    """Reconstructed features ``tanh(U U^T)`` (symmetric by construction)."""
    return np.tanh(u @ u.T)


def disc_forward(disc: DiscriminatorNet, s: np.ndarray):
    """Discriminator probabilities for each row of ``s``; returns (y, caches)."""
    f = s
    caches = []
    last = len(disc.weights) - 1
    for i, (w, b) in enumerate(zip(disc.weights, disc.biases)):
        act = "sigmoid" if i == last else "relu"
        f, cache = dense_forward(f, w, b, act)
        caches.append(cache)
    return f.ravel(), caches


def disc_backward(disc: DiscriminatorNet, caches, dy: np.ndarray):
    d = dy
    dws = [None] * len(disc.weights)
    dbs = [None] * len(disc.biases)
    for i in range(len(disc.weights) - 1, -1, -1):
        d, dws[i], dbs[i] = dense_backward(caches[i], disc.weights[i], d)
    return d, dws, dbs


# ---------------------------------------------------------------------------
# Losses (values and hand-derived gradients)
# ---------------------------------------------------------------------------

def _clamp(y: np.ndarray) -> np.ndarray:
    return np.clip(y, SIGMOID_CLAMP, 1.0 - SIGMOID_CLAMP)


def loss_d(u: np.ndarray, ug: np.ndarray, disc: DiscriminatorNet) -> float:
    """Discriminator objective ``-[sum log(1 - D(U)) + sum log D(U_g)] / N``."""
    if len(u) != len(ug):
        raise InputError("embeddings must cover the same nodes")
    yu = _clamp(disc_forward(disc, u)[0])
    yg = _clamp(disc_forward(disc, ug)[0])
    return float(-(np.log(1.0 - yu).sum() + np.log(yg).sum()) / len(u))


def loss_al(u: np.ndarray, disc: DiscriminatorNet) -> float:
    """Adversarial generator term ``-(1/N) sum log D(U)``."""
    y = _clamp(disc_forward(disc, u)[0])
    return float(-np.log(y).sum() / len(u))


def loss_fr(u: np.ndarray, x) -> float:
    """Feature-reconstruction error ``||tanh(U U^T) - X||_F^2`` (unnormalized)."""
    xd = x.dense() if isinstance(x, StructMatrix) else np.asarray(x)
    diff = decode(u) - xd
    return float((diff * diff).sum())


def loss_cr(u: np.ndarray, h: np.ndarray) -> float:
    """Clustering regularization ``-tr(H^T tanh(U U^T) H)`` for a fixed indicator."""
    xt = decode(u)
    return float(-np.einsum("ij,ij->", h @ h.T, xt))


def loss_g(u: np.ndarray, disc: DiscriminatorNet, x, h: np.ndarray,
           alpha: float, beta: float) -> float:
    """Generator objective: adversarial + alpha * reconstruction + beta * regularizer."""
    return loss_al(u, disc) + alpha * loss_fr(u, x) + beta * loss_cr(u, h)


def loss_d_with_grads(u: np.ndarray, ug: np.ndarray, disc: DiscriminatorNet):
    """Value of the discriminator loss plus gradients.

    Returns ``(loss, (d_weights, d_biases), (d_u, d_ug))``; the embedding
    gradients serve the shared-weight dual-encoder path and are ignored by the
    alternating D-step, which treats both embeddings as constants.
    """
    n = len(u)
    y_u, cache_u = disc_forward(disc, u)
    y_g, cache_g = disc_forward(disc, ug)
    yu, yg = _clamp(y_u), _clamp(y_g)
    loss = float(-(np.log(1.0 - yu).sum() + np.log(yg).sum()) / n)
    dy_u = 1.0 / (n * (1.0 - yu))
    dy_u[y_u != yu] = 0.0
    dy_g = -1.0 / (n * yg)
    dy_g[y_g != yg] = 0.0
    du, dws_u, dbs_u = disc_backward(disc, cache_u, dy_u[:, None])
    dug, dws_g, dbs_g = disc_backward(disc, cache_g, dy_g[:, None])
    dws = [a + b for a, b in zip(dws_u, dws_g)]
    dbs = [a + b for a, b in zip(dbs_u, dbs_g)]
    return loss, (dws, dbs), (du, dug)


def _loss_al_with_input_grad(u: np.ndarray, disc: DiscriminatorNet):
    n = len(u)
    y, caches = disc_forward(disc, u)
    yc = _clamp(y)
    loss = float(-np.log(yc).sum() / n)
    dy = -1.0 / (n * yc)
    dy[y != yc] = 0.0
    du, _, _ = disc_backward(disc, caches, dy[:, None])
    return loss, du


def loss_g_with_grads(gen: GeneratorNet, prop, z: np.ndarray, disc: DiscriminatorNet,
                      x_dense: np.ndarray, hht: np.ndarray, alpha: float, beta: float):
    """Value of the generator loss plus gradients w.r.t. the shared weights.

    The discriminator is treated as frozen; gradients flow through the feature
    encoder, through the decoder for the reconstruction / regularization terms,
    and through the frozen discriminator for the adversarial term. ``hht`` is
    the precomputed ``H H^T`` of the training indicator.
    """
    u, enc_caches = encode(gen, prop, z)
    al, du = _loss_al_with_input_grad(u, disc)
    s = u @ u.T
    xt = np.tanh(s)
    diff = xt - x_dense
    fr = float((diff * diff).sum())
    cr = float(-np.einsum("ij,ij->", hht, xt))
    d_xt = (2.0 * alpha) * diff - beta * hht
    ds = d_xt * (1.0 - xt * xt)
    du = du + (ds + ds.T) @ u
    _, d_weights = encoder_backward(gen, enc_caches, du)
    loss = al + alpha * fr + beta * cr
    return loss, d_weights


def dual_loss_d_grads(gen: GeneratorNet, prop_a, prop_g, z: np.ndarray,
                      disc: DiscriminatorNet):
    """Discriminator loss as a function of the shared encoder weights.

    Not used by the alternating training loop (there the encoders are frozen
    during the D-step); exists to exercise and verify gradient flow through
    both weight-sharing encoder branches at once.
    """
    u, caches_a = encode(gen, prop_a, z)
    ug, caches_g = encode(gen, prop_g, z)
    loss, _, (du, dug) = loss_d_with_grads(u, ug, disc)
    _, dwa = encoder_backward(gen, caches_a, du)
    _, dwg = encoder_backward(gen, caches_g, dug)
    return loss, [a + b for a, b in zip(dwa, dwg)]


# ---------------------------------------------------------------------------
# Configuration / checkpoints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of offline training.

    ``gen_widths`` runs feature width down to embedding width; ``disc_widths``
    runs embedding width down to 1. Defaults are the desk-scale layer setup.
    """

    gen_widths: tuple = (256, 128, 64)
    disc_widths: tuple = (64, 32, 16, 1)
    alpha: float = 1.0
    beta: float = 1.0
    graphs_per_epoch: int = 1
    updates_per_sample: int = 1
    epochs: int = 30
    # desk-scale losses carry a ~N^2-smaller reconstruction mass than the
    # full-scale runs the published rates were tuned for; gentler steps keep
    # the adversarial terms from distorting the embedding
    lr_gen: float = 1e-4
    lr_disc: float = 1e-4
    validation_metric: str = "nmi"
    kmeans_restarts: int = 10
    constant_features: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gen_widths", tuple(int(w) for w in self.gen_widths))
        object.__setattr__(self, "disc_widths", tuple(int(w) for w in self.disc_widths))
        if self.alpha < 0 or self.beta < 0:
            raise InputError("alpha and beta must be non-negative")
        if min(self.graphs_per_epoch, self.updates_per_sample, self.epochs) < 1:
            raise InputError("graphs_per_epoch, updates_per_sample and epochs must be >= 1")
        if len(self.gen_widths) < 2:
            raise InputError("gen_widths needs at least input and output widths")
        if len(self.disc_widths) < 2 or self.disc_widths[-1] != 1:
            raise InputError("disc_widths must end in 1")
        if self.disc_widths[0] != self.gen_widths[-1]:
            raise InputError("discriminator input width must equal the embedding width")
        if self.validation_metric not in ("nmi", "modularity"):
            raise InputError("validation_metric must be 'nmi' or 'modularity'")
        if self.kmeans_restarts < 1:
            raise InputError("kmeans_restarts must be >= 1")

    @property
    def feature_dim(self) -> int:
        return self.gen_widths[0]

    @property
    def embed_dim(self) -> int:
        return self.gen_widths[-1]


def full_scale_defaults(variant: str) -> TrainConfig:
    """Recommended hyperparameters for full-scale runs (graphs of ~5000 nodes
    with a few hundred equal communities and hard-to-separate structure).

    Feature width 2048 with a 3-layer generator and a 5-layer discriminator;
    1000 graph samples per epoch for 100 epochs.
    """
    if variant == "modularity":
        return TrainConfig(gen_widths=(2048, 1024, 512),
                           disc_widths=(512, 128, 64, 16, 1),
                           alpha=1.0, beta=5.0, updates_per_sample=1,
                           graphs_per_epoch=1000, epochs=100,
                           lr_gen=5e-4, lr_disc=5e-4)
    if variant == "ncut":
        return TrainConfig(gen_widths=(2048, 1024, 512),
                           disc_widths=(512, 128, 64, 16, 1),
                           alpha=1.0, beta=1.0, updates_per_sample=1,
                           graphs_per_epoch=1000, epochs=100,
                           lr_gen=1e-4, lr_disc=1e-4)
    raise InputError(f"unknown variant {variant!r}")


@dataclass
class Checkpoint:
    """Trained (or freshly initialized) model parameters plus their provenance."""

    variant: str
    config: TrainConfig
    gen_weights: list
    disc_weights: list
    disc_biases: list
    best_val_score: float
    best_epoch: int

    def generator(self) -> GeneratorNet:
        return GeneratorNet(self.gen_weights)

    def discriminator(self) -> DiscriminatorNet:
        return DiscriminatorNet(self.disc_weights, self.disc_biases)


def structural_features(g: Graph, variant: str) -> StructMatrix:
    """The neighbor-similarity matrix of a variant: Q (modularity) or M (ncut)."""
    if variant == "modularity":
        return modularity_matrix(g)
    if variant == "ncut":
        return norm_adj(g)
    raise InputError(f"unknown variant {variant!r}")


def training_indicator(p: Partition, variant: str, g: Graph) -> np.ndarray:
    """Membership indicator convention matching a variant's objective."""
    if variant == "modularity":
        return indicator(p, "modularity")
    if variant == "ncut":
        return indicator(p, "ncut", g)
    raise InputError(f"unknown variant {variant!r}")


def reduced_features(g: Graph, x: StructMatrix, cfg: TrainConfig) -> np.ndarray:
    if cfg.constant_features:
        return constant_features(g.num_nodes, cfg.feature_dim).values
    return extract_features(g, x, cfg.feature_dim).values


def save_checkpoint(ckpt: Checkpoint, path) -> None:
    """Binary checkpoint: magic, version, config JSON, per-layer named matrices.

    All floats are 64-bit little-endian; the config block is canonical JSON, so
    a save -> load -> save round trip is byte-identical.
    """
    header = {
        "variant": ckpt.variant,
        "best_val_score": ckpt.best_val_score,
        "best_epoch": ckpt.best_epoch,
        "config": asdict(ckpt.config),
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    layers = [(f"gen.w{i}", w) for i, w in enumerate(ckpt.gen_weights)]
    layers += [(f"disc.w{i}", w) for i, w in enumerate(ckpt.disc_weights)]
    layers += [(f"disc.b{i}", b.reshape(1, -1)) for i, b in enumerate(ckpt.disc_biases)]
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _VERSION))
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(struct.pack("<I", len(layers)))
        for name, mat in layers:
            nb = name.encode("utf-8")
            fh.write(struct.pack("<I", len(nb)))
            fh.write(nb)
            fh.write(struct.pack("<II", mat.shape[0], mat.shape[1]))
            fh.write(np.ascontiguousarray(mat, dtype="<f8").tobytes())


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise InputError(f"{path} is not a checkpoint file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != _VERSION:
            raise InputError(f"unsupported checkpoint version {version}")
        (blob_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(blob_len).decode("utf-8"))
        (layer_count,) = struct.unpack("<I", fh.read(4))
        layers = {}
        order = []
        for _ in range(layer_count):
            (name_len,) = struct.unpack("<I", fh.read(4))
            name = fh.read(name_len).decode("utf-8")
            rows, cols = struct.unpack("<II", fh.read(8))
            data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
            layers[name] = data.reshape(rows, cols).astype(np.float64)
            order.append(name)
    cfg_kwargs = dict(header["config"])
    cfg = TrainConfig(**cfg_kwargs)
    gen_w = [layers[n] for n in order if n.startswith("gen.w")]
    disc_w = [layers[n] for n in order if n.startswith("disc.w")]
    disc_b = [layers[n].ravel() for n in order if n.startswith("disc.b")]
    return Checkpoint(header["variant"], cfg, gen_w, disc_w, disc_b,
                      float(header["best_val_score"]), int(header["best_epoch"]))


# ---------------------------------------------------------------------------
# Training and inference
# ---------------------------------------------------------------------------

@dataclass
class TrainResult:
    checkpoint: Checkpoint
    history: list  # (epoch, mean validation score); epoch 0 is the initial model


@dataclass
class InferResult:
    embedding: np.ndarray
    partition: Partition
    timings: dict = field(default_factory=dict)


def init_checkpoint(cfg: TrainConfig, variant: str) -> Checkpoint:
    """Xavier-initialized untrained model (identical to what training starts from)."""
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    rng = np.random.default_rng([cfg.seed, 0])
    gen = GeneratorNet.init(cfg.gen_widths, rng)
    disc = DiscriminatorNet.init(cfg.disc_widths, rng)
    return Checkpoint(variant, cfg, gen.weights, disc.weights, disc.biases,
                      float("nan"), -1)


def train(split: DatasetSplit, cfg: TrainConfig, variant: str) -> TrainResult:
    """Offline training with alternating D-step / G-step updates.

    Per epoch, ``graphs_per_epoch`` training graphs are sampled with
    replacement; each sample gets ``updates_per_sample`` alternating update
    pairs (discriminator first, with the generator frozen; then the generator,
    with the discriminator frozen). After every epoch the current feature
    encoder is validated by clustering every validation graph and averaging the
    validation metric; the best-scoring parameters seen (the untrained model
    included) are returned.
    """
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    train_idx = list(split.train_indices)
    val_idx = list(split.val_indices)
    if not train_idx or not val_idx:
        raise InputError("training and validation sets must be nonempty")
    for i in train_idx:
        if split.labels[i] is None:
            raise InputError(f"training graph {split.names[i]} has no labels")
    if cfg.validation_metric == "nmi":
        for i in val_idx:
            if split.labels[i] is None:
                raise InputError("nmi validation needs labels on every validation graph")

    rng_init = np.random.default_rng([cfg.seed, 0])
    rng_sample = np.random.default_rng([cfg.seed, 1])
    rng_val = np.random.default_rng([cfg.seed, 2])
    gen = GeneratorNet.init(cfg.gen_widths, rng_init)
    disc = DiscriminatorNet.init(cfg.disc_widths, rng_init)
    opt_g = Adam(gen.weights, cfg.lr_gen)
    opt_d = Adam(disc.params(), cfg.lr_disc)

    train_cache: dict = {}

    def sample_data(i: int):
        if i not in train_cache:
            g, p = split.graphs[i], split.labels[i]
            x = structural_features(g, variant)
            z = reduced_features(g, x, cfg)
            h = training_indicator(p, variant, g)
            train_cache[i] = (z, x.dense(), adjacency_propagation(g),
                              community_propagation(p), h @ h.T)
        return train_cache[i]

    val_cache: dict = {}

    def val_data(i: int):
        if i not in val_cache:
            g = split.graphs[i]
            x = structural_features(g, variant)
            z = reduced_features(g, x, cfg)
            k = split.num_communities[i]
            if k < 1:
                raise InputError(f"validation graph {split.names[i]} has no community count")
            val_cache[i] = (z, adjacency_propagation(g), k)
        return val_cache[i]

    def validate() -> float:
        scores = []
        for i in val_idx:
            z, prop, k = val_data(i)
            u, _ = encode(gen, prop, z)
            result = kmeans(u, k, cfg.kmeans_restarts, seed=int(rng_val.integers(2 ** 31)))
            if cfg.validation_metric == "nmi":
                scores.append(nmi(split.labels[i], result.labels))
            else:
                scores.append(modularity_score(split.graphs[i], result.labels))
        return float(np.mean(scores))

    def snapshot():
        return ([w.copy() for w in gen.weights],
                [w.copy() for w in disc.weights],
                [b.copy() for b in disc.biases])

    best_score = validate()
    best_params = snapshot()
    best_epoch = 0
    history = [(0, best_score)]

    for epoch in range(1, cfg.epochs + 1):
        for _ in range(cfg.graphs_per_epoch):
            i = train_idx[int(rng_sample.integers(len(train_idx)))]
            z, x_dense, prop_a, prop_g, hht = sample_data(i)
            for _ in range(cfg.updates_per_sample):
                u, _ = encode(gen, prop_a, z)
                ug, _ = encode(gen, prop_g, z)
                ld, (dws, dbs), _ = loss_d_with_grads(u, ug, disc)
                if not np.isfinite(ld):
                    raise TrainingDivergedError(
                        f"discriminator loss non-finite at epoch {epoch}")
                opt_d.step(disc.params(), dws + dbs)
                lg, d_gen = loss_g_with_grads(gen, prop_a, z, disc, x_dense, hht,
                                              cfg.alpha, cfg.beta)
                if not np.isfinite(lg):
                    raise TrainingDivergedError(
                        f"generator loss non-finite at epoch {epoch}")
                opt_g.step(gen.weights, d_gen)
        score = validate()
        history.append((epoch, score))
        if score > best_score:
            best_score = score
            best_params = snapshot()
            best_epoch = epoch

    gen_w, disc_w, disc_b = best_params
    ckpt = Checkpoint(variant, cfg, gen_w, disc_w, disc_b, best_score, best_epoch)
    return TrainResult(ckpt, history)


def infer(ckpt: Checkpoint, g: Graph, k: int, seed: int = 0) -> InferResult:
    """Online community detection on a new graph with frozen parameters.

    Extracts features, runs one feedforward pass through the feature encoder
    only (training labels are never consulted), then clusters the embedding
    with multi-restart k-means for the given community count. Timings record
    the three phases as ``feat`` / ``prop`` / ``clus`` seconds.
    """
    if k < 1 or k > g.num_nodes:
        raise InputError(f"k must be in [1, {g.num_nodes}]")
    cfg = ckpt.config
    t0 = time.perf_counter()
    x = structural_features(g, ckpt.variant)
    z = reduced_features(g, x, cfg)
    t1 = time.perf_counter()
    u, _ = encode(ckpt.generator(), adjacency_propagation(g), z)
    t2 = time.perf_counter()
    result = kmeans(u, k, cfg.kmeans_restarts, seed=seed)
    t3 = time.perf_counter()
    timings = {"feat": t1 - t0, "prop": t2 - t1, "clus": t3 - t2, "total": t3 - t0}
    return InferResult(u, result.labels, timings)


# ---------------------------------------------------------------------------
# Gradient self-test
# ---------------------------------------------------------------------------

def gradient_selftest(seed: int = 0, max_coords: int = 220) -> dict:
    """Finite-difference checks of every loss path on a random 8-node graph.

    Covers the discriminator loss w.r.t. its own parameters, the full
    generator loss (alpha = beta = 1) w.r.t. the shared weights for both
    indicator conventions, and the dual-encoder shared-weight path. Returns a
    mapping from check name to max relative error.
    """
    from .graph import build_graph  # local import keeps module load light
    from .nn import grad_check

    rng = np.random.default_rng(seed)
    n = 8
    while True:
        iu, ju = np.triu_indices(n, 1)
        mask = rng.random(len(iu)) < 0.5
        g = build_graph(n, np.column_stack([iu[mask], ju[mask]]))
        if g.num_edges >= n and np.all(g.degrees > 0):
            break
    labels = Partition.from_labels(np.array([0, 0, 0, 0, 1, 1, 1, 1]))
    cfg = TrainConfig(gen_widths=(6, 5, 4), disc_widths=(4, 3, 1), seed=seed)

    results = {}
    for variant in VARIANTS:
        x = structural_features(g, variant)
        z = reduced_features(g, x, cfg)
        x_dense = x.dense()
        h = training_indicator(labels, variant, g)
        hht = h @ h.T
        prop_a = adjacency_propagation(g)
        prop_g = community_propagation(labels)

        init_rng = np.random.default_rng([seed, 17])
        gen = GeneratorNet.init(cfg.gen_widths, init_rng)
        disc = DiscriminatorNet.init(cfg.disc_widths, init_rng)
        for b in disc.biases:
            b += init_rng.uniform(-0.1, 0.1, size=b.shape)
        u0, _ = encode(gen, prop_a, z)
        ug0, _ = encode(gen, prop_g, z)

        def f_disc(u0=u0, ug0=ug0, disc=disc):
            loss, (dws, dbs), _ = loss_d_with_grads(u0, ug0, disc)
            return loss, dws + dbs

        results[f"loss_d/disc-params[{variant}]"] = grad_check(
            f_disc, disc.params(), rng=rng, max_coords=max_coords)

        def f_gen(gen=gen, prop_a=prop_a, z=z, disc=disc, x_dense=x_dense, hht=hht):
            return loss_g_with_grads(gen, prop_a, z, disc, x_dense, hht, 1.0, 1.0)

        results[f"loss_g/gen-weights[{variant}]"] = grad_check(
            f_gen, gen.weights, rng=rng, max_coords=max_coords)

        def f_dual(gen=gen, prop_a=prop_a, prop_g=prop_g, z=z, disc=disc):
            return dual_loss_d_grads(gen, prop_a, prop_g, z, disc)

        results[f"loss_d/dual-encoder-weights[{variant}]"] = grad_check(
            f_dual, gen.weights, rng=rng, max_coords=max_coords)
    return results
