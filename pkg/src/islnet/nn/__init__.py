"""Minimal deep-learning engine: tensors, layers, loss, SGD, gradient checks."""

from .tensor import RNG_ALGORITHM, Tensor, as_array, make_rng
from .spec import LayerSpec, count_params, infer_chain, output_shape
from .layers import (BatchNorm, Conv2D, Dense, Dropout, Flatten, Layer, MaxPool2D,
                     Param, ParameterBundle, Relu, Softmax, bundle, sgd_step)
from .gradcheck import gradient_check
from . import functional

__all__ = [
    "RNG_ALGORITHM", "Tensor", "as_array", "make_rng",
    "LayerSpec", "count_params", "infer_chain", "output_shape",
    "BatchNorm", "Conv2D", "Dense", "Dropout", "Flatten", "Layer", "MaxPool2D",
    "Param", "ParameterBundle", "Relu", "Softmax", "bundle", "sgd_step",
    "gradient_check", "functional",
]
