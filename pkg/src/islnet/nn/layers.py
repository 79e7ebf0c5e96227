"""Layer objects: parameters, forward/backward plumbing, and the parameter bundle.

A layer owns its parameters as Tensors (value + grad) and keeps the cache
its backward pass needs. ReLU is fused into conv and dense layers via the
`relu` flag, mirroring how the architecture lists activations inside the
conv/dense rows rather than as separate layers.
"""
from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from . import functional as F
from .tensor import Tensor, as_array


class Param:
    """One named parameter of a layer."""

    __slots__ = ("name", "tensor", "trainable")

    def __init__(self, name: str, tensor: Tensor, trainable: bool = True):
        self.name = name
        self.tensor = tensor
        self.trainable = trainable


class ParameterBundle:
    """Ordered view of every parameter in a layer chain.

    Keyed by (layer_id, param_name); iteration order is layer order, which
    is also the serialization order of the model file.
    """

    def __init__(self):
        self._entries: list[tuple[str, Param]] = []

    def add(self, layer_id: str, param: Param) -> None:
        self._entries.append((layer_id, param))

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, layer_id: str, name: str) -> Param:
        for owner, p in self._entries:
            if owner == layer_id and p.name == name:
                return p
        raise KeyError(f"{layer_id}.{name}")

    def state_arrays(self) -> list[tuple[str, str, np.ndarray]]:
        return [(owner, p.name, p.tensor.array) for owner, p in self._entries]

    def checksum(self) -> int:
        """CRC32 over every value array, in bundle order."""
        import zlib
        crc = 0
        for _, p in self._entries:
            crc = zlib.crc32(np.ascontiguousarray(p.tensor.array).tobytes(), crc)
        return crc


class Layer:
    kind = "base"

    def __init__(self, layer_id: str):
        self.id = layer_id
        self._cache: dict = {}

    def params(self) -> list[Param]:
        return []

    def forward(self, x, mode: str, rng=None):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError


class Conv2D(Layer):
    kind = "conv2d"

    def __init__(self, layer_id: str, weights, bias, padding: str, relu: bool = True):
        super().__init__(layer_id)
        self.w = Tensor(weights)
        self.b = Tensor(bias)
        self.padding = padding
        self.relu = relu
        self._relu_cache: dict = {}

    def params(self):
        return [Param("weights", self.w), Param("bias", self.b)]

    def forward(self, x, mode, rng=None):
        self._cache = {}
        y = F.conv2d_forward(x, self.w.array, self.b.array, self.padding,
                             cache=self._cache)
        if self.relu:
            self._relu_cache = {}
            y = F.relu_forward(y, cache=self._relu_cache)
        return y

    def backward(self, dy):
        if self.relu:
            dy = F.relu_backward(dy, self._relu_cache)
        dx, dw, db = F.conv2d_backward(dy, self._cache)
        self.w.grad = dw
        self.b.grad = db
        return dx


class BatchNorm(Layer):
    kind = "batchnorm"

    def __init__(self, layer_id: str, channels: int, epsilon: float = 1e-5,
                 momentum: float = 0.9):
        super().__init__(layer_id)
        self.gamma = Tensor(np.ones(channels))
        self.beta = Tensor(np.zeros(channels))
        self.running_mean = Tensor(np.zeros(channels))
        self.running_var = Tensor(np.ones(channels))
        self.epsilon = epsilon
        self.momentum = momentum

    def params(self):
        return [Param("gamma", self.gamma), Param("beta", self.beta),
                Param("running_mean", self.running_mean, trainable=False),
                Param("running_var", self.running_var, trainable=False)]

    def forward(self, x, mode, rng=None):
        self._cache = {}
        return F.batchnorm_forward(x, self.gamma.array, self.beta.array,
                                   self.running_mean.array, self.running_var.array,
                                   mode, self.epsilon, self.momentum,
                                   cache=self._cache)

    def backward(self, dy):
        dx, dgamma, dbeta = F.batchnorm_backward(dy, self._cache)
        self.gamma.grad = dgamma
        self.beta.grad = dbeta
        return dx


class MaxPool2D(Layer):
    kind = "maxpool2d"

    def forward(self, x, mode, rng=None):
        self._cache = {}
        return F.maxpool2d_forward(x, cache=self._cache)

    def backward(self, dy):
        return F.maxpool2d_backward(dy, self._cache)


class Dropout(Layer):
    kind = "dropout"

    def __init__(self, layer_id: str, rate: float):
        super().__init__(layer_id)
        self.rate = rate

    def forward(self, x, mode, rng=None):
        self._cache = {}
        return F.dropout_forward(x, self.rate, mode, rng, cache=self._cache)

    def backward(self, dy):
        return F.dropout_backward(dy, self._cache)


class Flatten(Layer):
    kind = "flatten"

    def forward(self, x, mode, rng=None):
        x = as_array(x)
        self._cache = {"shape": x.shape}
        if x.ndim == 3:                       # single sample
            return x.reshape(-1)
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        return as_array(dy).reshape(self._cache["shape"])


class Dense(Layer):
    kind = "dense"

    def __init__(self, layer_id: str, weights, bias, relu: bool = False):
        super().__init__(layer_id)
        self.w = Tensor(weights)
        self.b = Tensor(bias)
        self.relu = relu
        self._relu_cache: dict = {}

    def params(self):
        return [Param("weights", self.w), Param("bias", self.b)]

    def forward(self, x, mode, rng=None):
        self._cache = {}
        y = F.dense_forward(x, self.w.array, self.b.array, cache=self._cache)
        if self.relu:
            self._relu_cache = {}
            y = F.relu_forward(y, cache=self._relu_cache)
        return y

    def backward(self, dy):
        if self.relu:
            dy = F.relu_backward(dy, self._relu_cache)
        dx, dw, db = F.dense_backward(dy, self._cache)
        self.w.grad = dw
        self.b.grad = db
        return dx


class Relu(Layer):
    kind = "relu"

    def forward(self, x, mode, rng=None):
        self._cache = {}
        return F.relu_forward(x, cache=self._cache)

    def backward(self, dy):
        return F.relu_backward(dy, self._cache)


class Softmax(Layer):
    kind = "softmax"

    def forward(self, x, mode, rng=None):
        y = F.softmax(x)
        self._cache = {"probs": y}
        return y

    def backward(self, dy):
        return F.softmax_backward(dy, self._cache["probs"])


def bundle(layers: list[Layer]) -> ParameterBundle:
    out = ParameterBundle()
    for layer in layers:
        for p in layer.params():
            out.add(layer.id, p)
    return out


def sgd_step(params: ParameterBundle, learning_rate: float) -> None:
    """Plain SGD: w <- w - lr * grad for every trainable parameter.

    Non-trainable entries (batchnorm running stats) are never touched.
    Parameters whose grad is unset are skipped (e.g. nothing flowed to them).
    """
    if learning_rate <= 0:
        raise TrainingError(f"learning rate must be positive, got {learning_rate}")
    for layer_id, p in params:
        if not p.trainable or p.tensor.grad is None:
            continue
        g = p.tensor.grad
        if not np.all(np.isfinite(g)):
            raise TrainingError(f"non-finite gradient in layer {layer_id} ({p.name})")
        p.tensor.array -= learning_rate * g
