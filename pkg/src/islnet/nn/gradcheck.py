"""Finite-difference verification of every differentiable layer kind.

Central differences with step 1e-5 against the analytic backward pass,
over all inputs and trainable parameters of a small randomly initialized
layer. The relative error for one coordinate is

    |analytic - numeric| / max(1, |analytic|, |numeric|)

which behaves like a plain relative error for O(1) gradients and like an
absolute error near zero, where ratios are meaningless.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from . import functional as F
from .layers import BatchNorm, Conv2D, Dense, MaxPool2D, Relu
from .spec import LayerSpec

FD_STEP = 1e-5


def _rel_err(a: np.ndarray, n: np.ndarray) -> float:
    denom = np.maximum(1.0, np.maximum(np.abs(a), np.abs(n)))
    return float(np.max(np.abs(a - n) / denom)) if a.size else 0.0


def _fd_grad(loss_fn, arr: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    g = np.zeros_like(arr)
    flat = arr.ravel()
    gflat = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        lp = loss_fn()
        flat[i] = orig - h
        lm = loss_fn()
        flat[i] = orig
        gflat[i] = (lp - lm) / (2.0 * h)
    return g


def _check_layer(layer, x: np.ndarray, mode: str, rng) -> float:
    proj = rng.standard_normal(layer.forward(x, mode).shape)

    def loss_fn():
        return float((layer.forward(x, mode) * proj).sum())

    layer.forward(x, mode)
    dx = layer.backward(proj)

    worst = _rel_err(np.asarray(dx), _fd_grad(loss_fn, x))
    for p in layer.params():
        if not p.trainable:
            continue
        analytic = p.tensor.grad
        numeric = _fd_grad(loss_fn, p.tensor.array)
        worst = max(worst, _rel_err(analytic, numeric))
    return worst


def _check_softmax_xent(rng) -> float:
    k = int(rng.integers(2, 9))
    logits = rng.standard_normal(k)
    target = int(rng.integers(0, k))
    _, _, dlogits = F.softmax_cross_entropy(logits, target)

    def loss_fn():
        return F.cross_entropy(F.softmax(logits), target)

    return _rel_err(dlogits, _fd_grad(loss_fn, logits))


def gradient_check(spec: LayerSpec, rng) -> float:
    """Max relative error between analytic and finite-difference gradients.

    Builds a small random instance of the layer described by `spec`
    (every dimension <= 8) and probes all inputs and trainable parameters.
    """
    kind = spec.kind
    if kind == "softmax":
        return _check_softmax_xent(rng)
    if kind == "conv2d":
        cin = int(rng.integers(1, 4))
        h = w = int(rng.integers(spec.kernel[0], 8))
        x = rng.standard_normal((h, w, cin))
        kh, kw = spec.kernel
        layer = Conv2D("check", rng.standard_normal((kh, kw, cin, spec.filters)),
                       rng.standard_normal(spec.filters), spec.padding, relu=spec.relu)
        return _check_layer(layer, x, "infer", rng)
    if kind == "dense":
        n = int(rng.integers(2, 9))
        x = rng.standard_normal(n)
        layer = Dense("check", rng.standard_normal((n, spec.units)),
                      rng.standard_normal(spec.units), relu=spec.relu)
        return _check_layer(layer, x, "infer", rng)
    if kind == "batchnorm":
        c = int(rng.integers(1, 5))
        b, h, w = (int(rng.integers(2, 5)) for _ in range(3))
        x = rng.standard_normal((b, h, w, c)) * (1.0 + rng.random(c))
        layer = BatchNorm("check", c, spec.epsilon, spec.momentum)
        layer.gamma.array[:] = 1.0 + 0.5 * rng.standard_normal(c)
        layer.beta.array[:] = rng.standard_normal(c)
        return _check_layer(layer, x, "train", rng)
    if kind == "relu":
        shape = tuple(int(rng.integers(2, 8)) for _ in range(2))
        # probe away from the kink: |x| in [0.2, 1], step 1e-5 cannot cross 0
        x = (0.2 + 0.8 * rng.random(shape)) * np.where(rng.random(shape) < 0.5, -1.0, 1.0)
        return _check_layer(Relu("check"), x, "infer", rng)
    if kind == "maxpool2d":
        c = int(rng.integers(1, 4))
        h = w = 2 * int(rng.integers(1, 4)) + int(rng.integers(0, 2))
        h, w = max(h, 2), max(w, 2)
        x = rng.standard_normal((h, w, c))
        return _check_layer(MaxPool2D("check"), x, "infer", rng)
    raise ParameterError(f"gradient_check does not support layer kind {kind!r}")
