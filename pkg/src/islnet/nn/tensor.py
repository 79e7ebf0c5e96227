"""Tensor value type and the seeded random generator used everywhere.

All numeric state in the network is 64-bit floats in row-major (C) order.
The generator is PCG64: the same seed produces the same stream on every
platform, which is what makes training runs bit-reproducible.
"""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError

RNG_ALGORITHM = "pcg64"


def make_rng(seed) -> np.random.Generator:
    """Seeded PCG64 generator. `seed` may be an int or a sequence of ints."""
    return np.random.Generator(np.random.PCG64(seed))


def as_array(x, name: str = "input") -> np.ndarray:
    """Coerce a Tensor or array-like to a C-contiguous float64 ndarray."""
    if isinstance(x, Tensor):
        return x.array
    return np.ascontiguousarray(x, dtype=np.float64)


class Tensor:
    """An n-dimensional float64 array plus an optional same-shape gradient.

    `data` exposes the values as a flat row-major view; `array` is the
    shaped view. The gradient, when present, always matches the value
    shape element for element.
    """

    __slots__ = ("array", "grad")

    def __init__(self, array, grad=None):
        self.array = np.ascontiguousarray(array, dtype=np.float64)
        if grad is not None:
            grad = np.ascontiguousarray(grad, dtype=np.float64)
            if grad.shape != self.array.shape:
                raise DimensionError(
                    f"grad shape {grad.shape} != value shape {self.array.shape}"
                )
        self.grad = grad

    @property
    def shape(self) -> tuple:
        return self.array.shape

    @property
    def size(self) -> int:
        return self.array.size

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the values."""
        return self.array.ravel()

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.array)

    def copy(self) -> "Tensor":
        return Tensor(self.array.copy(),
                      None if self.grad is None else self.grad.copy())

    def all_finite(self) -> bool:
        if not np.all(np.isfinite(self.array)):
            return False
        return self.grad is None or bool(np.all(np.isfinite(self.grad)))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, grad={'yes' if self.grad is not None else 'no'})"
