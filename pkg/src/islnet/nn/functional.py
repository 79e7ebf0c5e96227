"""Forward/backward kernels for every layer kind in the network.

Conventions, fixed for the whole package:

* Feature maps are channels-last: (H, W, C), batched as (B, H, W, C).
  Every kernel accepts either form and returns the same rank it was given.
* Convolution is cross-correlation (no kernel flip), stride 1, with
  weights shaped (kh, kw, Cin, Cout) and zero padding in "same" mode.
* Dense weights are (n_in, n_out): y = x @ W + b.
* Dropout is inverted: survivors are scaled by 1/(1-rate) at train time
  so inference is the identity.
* All arithmetic is float64.

Kernels that need state for the backward pass take an optional `cache`
dict which they fill during the forward call; passing that dict to the
matching backward function is the caller's job (the layer classes in
`layers.py` do exactly that).
"""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError, ParameterError, StateError
from .tensor import as_array


def _promote(x: np.ndarray, rank: int):
    """Add a leading batch axis if `x` has rank `rank`-1."""
    if x.ndim == rank - 1:
        return x[np.newaxis], True
    if x.ndim == rank:
        return x, False
    raise DimensionError(f"expected rank {rank - 1} or {rank} input, got shape {x.shape}")


def _depromote(y: np.ndarray, squeezed: bool) -> np.ndarray:
    return y[0] if squeezed else y


# ---------------------------------------------------------------- conv2d

def _conv_pad(padding: str, kh: int, kw: int):
    if padding == "valid":
        return 0, 0
    if padding == "same":
        if kh % 2 == 0 or kw % 2 == 0:
            raise ParameterError("same padding requires odd kernel dims")
        return (kh - 1) // 2, (kw - 1) // 2
    raise ParameterError(f"unknown padding mode {padding!r}")


def _im2col(x: np.ndarray, kh: int, kw: int, ph: int, pw: int) -> tuple:
    """(B,H,W,C) -> column matrix (B*H'*W', kh*kw*C) plus output dims."""
    b, h, w, c = x.shape
    if ph or pw:
        x = np.pad(x, ((0, 0), (ph, ph), (pw, pw), (0, 0)))
    ho, wo = h + 2 * ph - kh + 1, w + 2 * pw - kw + 1
    # windows: (B, H', W', C, kh, kw) -> (B, H', W', kh, kw, C)
    win = np.lib.stride_tricks.sliding_window_view(x, (kh, kw), axis=(1, 2))
    col = np.ascontiguousarray(win.transpose(0, 1, 2, 4, 5, 3))
    return col.reshape(b * ho * wo, kh * kw * c), ho, wo


def conv2d_forward(x, w, b, padding: str = "valid", stride=(1, 1), cache: dict | None = None):
    """2-D convolution. x: (B,)H,W,Cin; w: (kh,kw,Cin,Cout); b: (Cout,)."""
    if tuple(stride) != (1, 1):
        raise ParameterError("only stride (1, 1) is supported")
    x, w, b = as_array(x), as_array(w), as_array(b)
    x, squeezed = _promote(x, 4)
    kh, kw, cin, cout = w.shape
    if x.shape[3] != cin:
        raise DimensionError(
            f"input channel axis has {x.shape[3]} channels, weights expect {cin}")
    if b.shape != (cout,):
        raise DimensionError(f"bias axis has length {b.shape}, expected ({cout},)")
    ph, pw = _conv_pad(padding, kh, kw)
    if x.shape[1] + 2 * ph < kh:
        raise DimensionError(f"height axis {x.shape[1]} smaller than kernel height {kh}")
    if x.shape[2] + 2 * pw < kw:
        raise DimensionError(f"width axis {x.shape[2]} smaller than kernel width {kw}")

    col, ho, wo = _im2col(x, kh, kw, ph, pw)
    y = col @ w.reshape(kh * kw * cin, cout) + b
    y = y.reshape(x.shape[0], ho, wo, cout)
    if cache is not None:
        cache.update(col=col, x_shape=x.shape, w=w, pad=(ph, pw),
                     out_hw=(ho, wo), squeezed=squeezed)
    return _depromote(y, squeezed)


def conv2d_backward(dy, cache: dict):
    """Gradients of conv2d_forward. Returns (dx, dw, db)."""
    if not cache or "col" not in cache:
        raise StateError("conv2d_backward called without a forward cache")
    dy = as_array(dy)
    dy, _ = _promote(dy, 4)
    col, w = cache["col"], cache["w"]
    kh, kw, cin, cout = w.shape
    b, h, wd, _ = cache["x_shape"]
    ph, pw = cache["pad"]
    ho, wo = cache["out_hw"]
    if dy.shape != (b, ho, wo, cout):
        raise DimensionError(
            f"grad_out shape {dy.shape} != forward output shape {(b, ho, wo, cout)}")

    dymat = dy.reshape(b * ho * wo, cout)
    dw = (col.T @ dymat).reshape(kh, kw, cin, cout)
    db = dymat.sum(axis=0)
    dcol = (dymat @ w.reshape(kh * kw * cin, cout).T).reshape(b, ho, wo, kh, kw, cin)
    dxp = np.zeros((b, h + 2 * ph, wd + 2 * pw, cin))
    for u in range(kh):
        for v in range(kw):
            dxp[:, u:u + ho, v:v + wo, :] += dcol[:, :, :, u, v, :]
    dx = dxp[:, ph:ph + h, pw:pw + wd, :]
    return _depromote(dx, cache["squeezed"]), dw, db


# -------------------------------------------------------------- maxpool

def maxpool2d_forward(x, window=(2, 2), stride=(2, 2), cache: dict | None = None):
    """2x2/stride-2 max pooling with floor semantics (odd trailing row/col dropped)."""
    if tuple(window) != (2, 2) or tuple(stride) != (2, 2):
        raise ParameterError("only 2x2 windows with stride 2 are supported")
    x = as_array(x)
    x, squeezed = _promote(x, 4)
    b, h, w, c = x.shape
    if h < 2 or w < 2:
        raise DimensionError(f"pool window larger than input on axis of size {min(h, w)}")
    ho, wo = h // 2, w // 2
    # window entries laid out row-major: (r0,c0), (r0,c1), (r1,c0), (r1,c1)
    quads = (x[:, :ho * 2, :wo * 2, :]
             .reshape(b, ho, 2, wo, 2, c)
             .transpose(0, 1, 3, 2, 4, 5)
             .reshape(b, ho, wo, 4, c))
    arg = np.argmax(quads, axis=3)
    y = np.take_along_axis(quads, arg[:, :, :, np.newaxis, :], axis=3)[:, :, :, 0, :]
    if cache is not None:
        cache.update(arg=arg, x_shape=(b, h, w, c), squeezed=squeezed)
    return _depromote(y, squeezed)


def maxpool2d_backward(dy, cache: dict):
    """Routes each window's gradient to its argmax (first row-major on ties)."""
    if not cache or "arg" not in cache:
        raise StateError("maxpool2d_backward called without a forward cache")
    dy = as_array(dy)
    dy, _ = _promote(dy, 4)
    b, h, w, c = cache["x_shape"]
    ho, wo = h // 2, w // 2
    quads = np.zeros((b, ho, wo, 4, c))
    np.put_along_axis(quads, cache["arg"][:, :, :, np.newaxis, :],
                      dy[:, :, :, np.newaxis, :], axis=3)
    dx = np.zeros((b, h, w, c))
    dx[:, :ho * 2, :wo * 2, :] = (quads
                                  .reshape(b, ho, wo, 2, 2, c)
                                  .transpose(0, 1, 3, 2, 4, 5)
                                  .reshape(b, ho * 2, wo * 2, c))
    return _depromote(dx, cache["squeezed"])


# ------------------------------------------------------------ batchnorm

def batchnorm_forward(x, gamma, beta, running_mean, running_var, mode: str,
                      epsilon: float = 1e-5, momentum: float = 0.9,
                      cache: dict | None = None):
    """Per-channel normalization over every axis except the last.

    Train mode standardizes by batch statistics (biased variance) and
    updates the running stats in place via an exponential moving average:
    running <- momentum * running + (1 - momentum) * batch.
    Infer mode is a pure function of x and the stored running stats.
    """
    x, gamma, beta = as_array(x), as_array(gamma), as_array(beta)
    c = x.shape[-1]
    for name, arr in (("gamma", gamma), ("beta", beta),
                      ("running_mean", running_mean), ("running_var", running_var)):
        if arr.shape != (c,):
            raise DimensionError(f"{name} has shape {arr.shape}, channel axis needs ({c},)")
    axes = tuple(range(x.ndim - 1))
    if mode == "train":
        mu = x.mean(axis=axes)
        var = x.var(axis=axes)
        running_mean *= momentum
        running_mean += (1.0 - momentum) * mu
        running_var *= momentum
        running_var += (1.0 - momentum) * var
    elif mode == "infer":
        mu, var = running_mean, running_var
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    inv = 1.0 / np.sqrt(var + epsilon)
    xhat = (x - mu) * inv
    y = gamma * xhat + beta
    if cache is not None:
        n = x.size // c
        cache.update(xhat=xhat, inv=inv, gamma=gamma, n=n, axes=axes, mode=mode)
    return y


def batchnorm_backward(dy, cache: dict):
    """Gradients of batchnorm_forward in train mode. Returns (dx, dgamma, dbeta)."""
    if not cache or "xhat" not in cache:
        raise StateError("batchnorm_backward called without a forward cache")
    if cache["mode"] != "train":
        raise StateError("batchnorm backward is only defined for train mode")
    dy = as_array(dy)
    xhat, inv, gamma, n, axes = (cache["xhat"], cache["inv"], cache["gamma"],
                                 cache["n"], cache["axes"])
    dbeta = dy.sum(axis=axes)
    dgamma = (dy * xhat).sum(axis=axes)
    dxhat = dy * gamma
    dx = (inv / n) * (n * dxhat - dxhat.sum(axis=axes) - xhat * (dxhat * xhat).sum(axis=axes))
    return dx, dgamma, dbeta


# ---------------------------------------------------------------- dense

def dense_forward(x, w, b, cache: dict | None = None):
    """Fully connected map: y = x @ W + b with W shaped (n_in, n_out)."""
    x, w, b = as_array(x), as_array(w), as_array(b)
    x, squeezed = _promote(x, 2)
    if x.shape[1] != w.shape[0]:
        raise DimensionError(
            f"input length {x.shape[1]} != weight rows {w.shape[0]}")
    y = x @ w + b
    if cache is not None:
        cache.update(x=x, w=w, squeezed=squeezed)
    return _depromote(y, squeezed)


def dense_backward(dy, cache: dict):
    if not cache or "x" not in cache:
        raise StateError("dense_backward called without a forward cache")
    dy = as_array(dy)
    dy, _ = _promote(dy, 2)
    x, w = cache["x"], cache["w"]
    dw = x.T @ dy
    db = dy.sum(axis=0)
    dx = dy @ w.T
    return _depromote(dx, cache["squeezed"]), dw, db


# -------------------------------------------------------------- dropout

def dropout_forward(x, rate: float, mode: str, rng=None, cache: dict | None = None):
    """Inverted dropout. Infer mode is the identity; train mode needs `rng`."""
    if not 0.0 <= rate < 1.0:
        raise ParameterError(f"dropout rate must be in [0, 1), got {rate}")
    x = as_array(x)
    if mode == "infer" or rate == 0.0:
        if cache is not None:
            cache.update(mask=None, rate=rate)
        return x
    if mode != "train":
        raise ParameterError(f"unknown mode {mode!r}")
    if rng is None:
        raise ParameterError("train-mode dropout requires an rng")
    mask = rng.random(x.shape) >= rate
    if cache is not None:
        cache.update(mask=mask, rate=rate)
    return x * mask / (1.0 - rate)


def dropout_backward(dy, cache: dict):
    if cache is None or "mask" not in cache:
        raise StateError("dropout_backward called without a forward cache")
    dy = as_array(dy)
    mask, rate = cache["mask"], cache["rate"]
    if mask is None:
        return dy
    return dy * mask / (1.0 - rate)


# ----------------------------------------------------------- activations

def relu_forward(x, cache: dict | None = None):
    x = as_array(x)
    if cache is not None:
        cache.update(x=x)
    return np.maximum(x, 0.0)


def relu_backward(dy, cache: dict):
    if not cache or "x" not in cache:
        raise StateError("relu_backward called without a forward cache")
    # subgradient 0 at x == 0
    return as_array(dy) * (cache["x"] > 0.0)


def softmax(logits):
    """Numerically stabilized softmax over the last axis."""
    z = as_array(logits)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_backward(dy, probs):
    """Jacobian-vector product of softmax: dx = p * (dy - sum(dy * p))."""
    dy, p = as_array(dy), as_array(probs)
    return p * (dy - (dy * p).sum(axis=-1, keepdims=True))


# ------------------------------------------------------------------ loss

_PROB_FLOOR = 1e-12


def cross_entropy(probs, target):
    """-log(probs[target]) with probabilities clamped to [1e-12, 1].

    Accepts a single distribution (k,) with an int target, or a batch
    (B, k) with B targets; the batched form returns the mean loss.
    """
    p = as_array(probs)
    p, squeezed = _promote(p, 2)
    t = np.atleast_1d(np.asarray(target, dtype=np.int64))
    if t.shape[0] != p.shape[0]:
        raise ParameterError(f"{t.shape[0]} targets for {p.shape[0]} distributions")
    k = p.shape[1]
    if np.any(t < 0) or np.any(t >= k):
        raise ParameterError(f"target out of range [0, {k})")
    picked = np.clip(p[np.arange(p.shape[0]), t], _PROB_FLOOR, 1.0)
    return float(-np.log(picked).mean())


def softmax_cross_entropy(logits, target):
    """Fused softmax + cross-entropy.

    Returns (mean loss, probs, dlogits) where dlogits is the gradient of
    the mean loss: (probs - onehot(target)) / batch_size.
    """
    z = as_array(logits)
    z, squeezed = _promote(z, 2)
    t = np.atleast_1d(np.asarray(target, dtype=np.int64))
    k = z.shape[1]
    if np.any(t < 0) or np.any(t >= k):
        raise ParameterError(f"target out of range [0, {k})")
    zs = z - z.max(axis=1, keepdims=True)
    lse = np.log(np.exp(zs).sum(axis=1, keepdims=True))
    logp = zs - lse
    loss = float(-logp[np.arange(z.shape[0]), t].mean())
    probs = np.exp(logp)
    dlogits = probs.copy()
    dlogits[np.arange(z.shape[0]), t] -= 1.0
    dlogits /= z.shape[0]
    return loss, _depromote(probs, squeezed), _depromote(dlogits, squeezed)
