"""Executable network built from a manifest: init, forward/backward, predict."""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError, StateError
from ..nn.layers import (BatchNorm, Conv2D, Dense, Dropout, Flatten, MaxPool2D,
                         ParameterBundle, Relu, Softmax, bundle)
from ..nn.spec import output_shape
from ..nn.tensor import Tensor, as_array, make_rng
from .manifest import ArchitectureManifest


def _he_uniform(rng, shape, fan_in: int) -> np.ndarray:
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, shape)


class Model:
    """A manifest plus its parameters and a train/infer mode flag.

    Weights are He-uniform (fan-in), biases zero, batchnorm gamma 1 / beta 0 /
    running stats (0, 1); all draws come from one PCG64 stream in layer order,
    so a seed fully determines the initial state.
    """

    def __init__(self, manifest: ArchitectureManifest, layers: list, mode: str = "infer"):
        self.manifest = manifest
        self.layers = layers
        self.mode = mode

    @classmethod
    def build(cls, manifest: ArchitectureManifest, seed: int = 0) -> "Model":
        rng = make_rng(seed)
        layers = []
        shape = manifest.input_shape
        for layer_id, spec in manifest.layers:
            if spec.kind == "conv2d":
                kh, kw = spec.kernel
                cin = shape[-1]
                fan_in = kh * kw * cin
                w = _he_uniform(rng, (kh, kw, cin, spec.filters), fan_in)
                layers.append(Conv2D(layer_id, w, np.zeros(spec.filters),
                                     spec.padding, spec.relu))
            elif spec.kind == "batchnorm":
                layers.append(BatchNorm(layer_id, shape[-1], spec.epsilon, spec.momentum))
            elif spec.kind == "maxpool2d":
                layers.append(MaxPool2D(layer_id))
            elif spec.kind == "dropout":
                layers.append(Dropout(layer_id, spec.rate))
            elif spec.kind == "flatten":
                layers.append(Flatten(layer_id))
            elif spec.kind == "dense":
                n = shape[0]
                w = _he_uniform(rng, (n, spec.units), n)
                layers.append(Dense(layer_id, w, np.zeros(spec.units), spec.relu))
            elif spec.kind == "relu":
                layers.append(Relu(layer_id))
            elif spec.kind == "softmax":
                layers.append(Softmax(layer_id))
            shape = output_shape(spec, shape)
        return cls(manifest, layers, mode="infer")

    # ------------------------------------------------------------ state

    def set_mode(self, mode: str) -> None:
        if mode not in ("train", "infer"):
            raise StateError(f"unknown mode {mode!r}")
        self.mode = mode

    def params(self) -> ParameterBundle:
        return bundle(self.layers)

    # ---------------------------------------------------------- compute

    def _check_input(self, x: np.ndarray) -> None:
        expect = self.manifest.input_shape
        if x.shape[-3:] != expect or x.ndim not in (3, 4):
            raise DimensionError(f"input shape {x.shape} does not end in {expect}")

    def forward(self, x, rng=None):
        """Probabilities for one sample (H,W,1) or a batch (B,H,W,1)."""
        x = as_array(x)
        self._check_input(x)
        for layer in self.layers:
            x = layer.forward(x, self.mode, rng)
        return x

    def forward_logits(self, x, rng=None):
        """Forward pass stopping before the final softmax (for the fused loss)."""
        x = as_array(x)
        self._check_input(x)
        for layer in self.layers[:-1]:
            x = layer.forward(x, self.mode, rng)
        return x

    def backward_from_logits(self, dlogits) -> None:
        """Backpropagate a gradient w.r.t. the pre-softmax logits."""
        dy = dlogits
        for layer in reversed(self.layers[:-1]):
            dy = layer.backward(dy)

    def predict(self, x) -> tuple[Tensor, int]:
        """(probabilities, argmax) for a single input; requires infer mode."""
        if self.mode != "infer":
            raise StateError("predict requires the model to be in infer mode")
        x = as_array(x)
        if x.ndim != 3:
            raise DimensionError(f"predict takes a single (H, W, 1) input, got {x.shape}")
        probs = self.forward(x)
        return Tensor(probs), int(np.argmax(probs))

    def copy_state(self) -> list:
        return [p.tensor.array.copy() for _, p in self.params()]

    def load_state(self, state: list) -> None:
        entries = list(self.params())
        if len(state) != len(entries):
            raise StateError("state snapshot does not match parameter layout")
        for arr, (_, p) in zip(state, entries):
            p.tensor.array[...] = arr
