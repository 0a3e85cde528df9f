"""Dense neural-network substrate: initialization, layers with hand-derived
backward passes, Adam, and a finite-difference gradient checker.

Everything is plain float64 numpy. Graph-convolution layers take a propagation
operator object exposing ``apply(F)`` for the (symmetric) normalized
message-passing matrix, so the same layer code serves the original-topology
and label-induced encoders.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .errors import InputError

SIGMOID_CLAMP = 1e-7


def xavier_init(shape, rng: np.random.Generator) -> np.ndarray:
    """Uniform Xavier/Glorot initialization in +-sqrt(6 / (fan_in + fan_out))."""
    fan_in, fan_out = shape
    if fan_in <= 0 or fan_out <= 0:
        raise InputError("layer dimensions must be positive")
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "tanh":
        return np.tanh(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "sigmoid":
        return expit(z)
    if name == "none":
        return z
    raise InputError(f"unknown activation {name!r}")


def _activate_grad(name: str, z: np.ndarray, out: np.ndarray) -> np.ndarray:
    if name == "tanh":
        return 1.0 - out ** 2
    if name == "relu":
        return (z > 0.0).astype(np.float64)
    if name == "sigmoid":
        return out * (1.0 - out)
    if name == "none":
        return np.ones_like(z)
    raise InputError(f"unknown activation {name!r}")


def gcn_forward(prop, f_in: np.ndarray, weight: np.ndarray):
    """One graph-convolution layer ``tanh(P F W)``.

    Returns the output and a cache for :func:`gcn_backward`. ``prop`` must be
    symmetric (the normalized operators used here always are).
    """
    if f_in.shape[1] != weight.shape[0]:
        raise InputError("feature width does not match the layer weight")
    propagated = prop.apply(f_in)
    out = np.tanh(propagated @ weight)
    return out, (prop, propagated, out)


def gcn_backward(cache, weight: np.ndarray, d_out: np.ndarray):
    """Gradients of a GCN layer: returns ``(d_f_in, d_weight)``.

    ``d_weight = (P F)^T (d_out * (1 - out^2))`` and
    ``d_f_in = P (d_out * (1 - out^2)) W^T`` using the symmetry of P.
    """
    prop, propagated, out = cache
    dz = d_out * (1.0 - out ** 2)
    d_weight = propagated.T @ dz
    d_in = prop.apply(dz @ weight.T)
    return d_in, d_weight


def dense_forward(f_in: np.ndarray, weight: np.ndarray, bias, activation: str):
    """Fully connected layer ``act(F W + b)``; returns output and backward cache."""
    if f_in.shape[1] != weight.shape[0]:
        raise InputError("feature width does not match the layer weight")
    z = f_in @ weight
    if bias is not None:
        z = z + bias
    out = _activate(activation, z)
    return out, (f_in, z, out, activation)


def dense_backward(cache, weight: np.ndarray, d_out: np.ndarray):
    """Gradients of a dense layer: returns ``(d_f_in, d_weight, d_bias)``."""
    f_in, z, out, activation = cache
    dz = d_out * _activate_grad(activation, z, out)
    d_weight = f_in.T @ dz
    d_bias = dz.sum(axis=0)
    d_in = dz @ weight.T
    return d_in, d_weight, d_bias


class Adam:
    """Standard Adam with bias correction, updating a flat list of arrays in place."""

    def __init__(self, params, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads) -> None:
        if len(params) != len(self.m):
            raise InputError("parameter list does not match optimizer state")
        self.step_count += 1
        b1c = 1.0 - self.beta1 ** self.step_count
        b2c = 1.0 - self.beta2 ** self.step_count
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g ** 2
            p -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


def grad_check(loss_fn, params, h: float = 1e-5, rng=None, max_coords: int = 200) -> float:
    """Central-difference check of analytic gradients.

    ``loss_fn()`` must return ``(loss, grads)`` evaluated at the current
    ``params`` (a list of arrays that this function perturbs in place and
    restores). Checks a random subsample of at least ``max_coords``
    coordinates (all of them if there are fewer) and returns the maximum
    relative error.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    _, grads = loss_fn()
    coords = [(i, j) for i, p in enumerate(params) for j in range(p.size)]
    if len(coords) > max_coords:
        picks = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[i] for i in picks]
    worst = 0.0
    for pi, flat in coords:
        original = params[pi].flat[flat]
        params[pi].flat[flat] = original + h
        plus, _ = loss_fn()
        params[pi].flat[flat] = original - h
        minus, _ = loss_fn()
        params[pi].flat[flat] = original
        numeric = (plus - minus) / (2.0 * h)
        analytic = grads[pi].flat[flat]
        rel = abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-8)
        worst = max(worst, rel)
    return worst
