"""Declarative layer descriptions plus shape and parameter-count propagation."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DimensionError, ParameterError

KINDS = ("conv2d", "maxpool2d", "batchnorm", "dropout", "flatten",
         "dense", "relu", "softmax")


@dataclass
class LayerSpec:
    """Description of one layer, sufficient to build it and count its parameters."""

    kind: str
    filters: int = 0                      # conv2d
    kernel: tuple = (3, 3)                # conv2d
    padding: str = "valid"                # conv2d: valid | same
    stride: tuple = (1, 1)
    rate: float = 0.0                     # dropout
    units: int = 0                        # dense
    epsilon: float = 1e-5                 # batchnorm
    momentum: float = 0.9                 # batchnorm
    relu: bool = False                    # fused activation on conv2d/dense

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown layer kind {self.kind!r}")
        if self.kind == "conv2d":
            if self.filters < 1:
                raise ParameterError("conv2d needs at least one filter")
            kh, kw = self.kernel
            if kh % 2 == 0 or kw % 2 == 0:
                raise ParameterError(f"conv2d kernel dims must be odd, got {self.kernel}")
            if self.padding not in ("valid", "same"):
                raise ParameterError(f"unknown padding {self.padding!r}")
        if self.kind == "dropout" and not 0.0 <= self.rate < 1.0:
            raise ParameterError(f"dropout rate must be in [0, 1), got {self.rate}")
        if self.kind == "dense" and self.units < 1:
            raise ParameterError("dense needs at least one unit")


def output_shape(spec: LayerSpec, in_shape: tuple) -> tuple:
    """Shape produced by one layer, or DimensionError if it cannot apply."""
    k = spec.kind
    if k == "conv2d":
        if len(in_shape) != 3:
            raise DimensionError(f"conv2d needs (H, W, C) input, got {in_shape}")
        h, w, _ = in_shape
        kh, kw = spec.kernel
        if spec.padding == "valid":
            if h < kh or w < kw:
                raise DimensionError(f"kernel {spec.kernel} does not fit input {in_shape}")
            return (h - kh + 1, w - kw + 1, spec.filters)
        return (h, w, spec.filters)
    if k == "maxpool2d":
        if len(in_shape) != 3:
            raise DimensionError(f"maxpool2d needs (H, W, C) input, got {in_shape}")
        h, w, c = in_shape
        if h < 2 or w < 2:
            raise DimensionError(f"pool window larger than input {in_shape}")
        return (h // 2, w // 2, c)
    if k == "flatten":
        n = 1
        for d in in_shape:
            n *= d
        return (n,)
    if k == "dense":
        if len(in_shape) != 1:
            raise DimensionError(f"dense needs flat input, got {in_shape}")
        return (spec.units,)
    if k == "softmax":
        if len(in_shape) != 1:
            raise DimensionError(f"softmax needs flat input, got {in_shape}")
        return in_shape
    # batchnorm, dropout, relu keep their input shape
    return in_shape


def param_counts(spec: LayerSpec, in_shape: tuple) -> tuple[int, int]:
    """(trainable, non_trainable) parameter counts of one layer."""
    if spec.kind == "conv2d":
        kh, kw = spec.kernel
        cin = in_shape[-1]
        return kh * kw * cin * spec.filters + spec.filters, 0
    if spec.kind == "batchnorm":
        c = in_shape[-1]
        return 2 * c, 2 * c
    if spec.kind == "dense":
        return in_shape[0] * spec.units + spec.units, 0
    return 0, 0


def infer_chain(specs: list[LayerSpec], input_shape: tuple) -> list[tuple]:
    """Output shape after each layer; raises naming the first failing layer."""
    shapes = []
    cur = tuple(input_shape)
    for i, spec in enumerate(specs):
        try:
            cur = output_shape(spec, cur)
        except DimensionError as e:
            raise DimensionError(f"layer {i} ({spec.kind}): {e}") from None
        shapes.append(cur)
    return shapes


def count_params(specs: list[LayerSpec], input_shape: tuple) -> tuple[int, int, int]:
    """(total, trainable, non_trainable) across the whole chain."""
    trainable = non_trainable = 0
    cur = tuple(input_shape)
    for i, spec in enumerate(specs):
        t, n = param_counts(spec, cur)
        trainable += t
        non_trainable += n
        try:
            cur = output_shape(spec, cur)
        except DimensionError as e:
            raise DimensionError(f"layer {i} ({spec.kind}): {e}") from None
    return trainable + non_trainable, trainable, non_trainable
