"""
Central finite-difference stencils on uniform grids.

A `GridFunction` carries its sample points, values and a `valid` mask.
Every derivative shrinks the valid region by the stencil half-width, so
nested operator applications (ladder products, commutators) keep track of
which rows can be trusted without any special boundary closure.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Tuple

import numpy as np

from ..core.errors import GridTooCoarse

logger = logging.getLogger(__name__)

SUPPORTED_ACCURACY = (2, 4, 6, 8)
DEFAULT_ACCURACY = 4
# dx² · max|ψ''''| / max|ψ| above this means the grid does not resolve ψ
RESOLUTION_TOLERANCE = 0.25


@lru_cache(maxsize=None)
def _weights(offsets: Tuple[int, ...], derivative: int) -> Tuple[float, ...]:
    n = len(offsets)
    powers = np.array([[o ** i / factorial(i) for o in offsets] for i in range(n)], dtype=float)
    rhs = np.zeros(n)
    rhs[derivative] = 1.0
    return tuple(np.linalg.solve(powers, rhs))


def stencil_weights(offsets, derivative: int) -> np.ndarray:
    """Weights w with Σ w_j f(x + o_j h) ≈ h^d f^(d)(x)."""
    offsets = tuple(int(o) for o in offsets)
    if derivative >= len(offsets):
        raise ValueError(f"need more than {derivative} points for derivative {derivative}")
    return np.array(_weights(offsets, derivative))


def central_weights(derivative: int, accuracy: int = DEFAULT_ACCURACY) -> np.ndarray:
    if accuracy not in SUPPORTED_ACCURACY:
        raise ValueError(f"accuracy must be one of {SUPPORTED_ACCURACY}, got {accuracy}")
    half = (derivative + 1) // 2 + accuracy // 2 - 1
    return stencil_weights(range(-half, half + 1), derivative)


def erode(mask: np.ndarray, width: int, axis: int = 0) -> np.ndarray:
    if width <= 0:
        return mask.copy()
    out = mask.copy()
    for shift in range(-width, width + 1):
        out &= np.roll(mask, shift, axis=axis)
    index = [slice(None)] * mask.ndim
    index[axis] = slice(0, width)
    out[tuple(index)] = False
    index[axis] = slice(mask.shape[axis] - width, None)
    out[tuple(index)] = False
    return out


def differentiate(values: np.ndarray, spacing: float, derivative: int,
                  accuracy: int = DEFAULT_ACCURACY, axis: int = 0) -> Tuple[np.ndarray, int]:
    """Apply a central stencil along `axis`; returns (result, half_width)."""
    w = central_weights(derivative, accuracy) / spacing ** derivative
    half = len(w) // 2
    n = values.shape[axis]
    if n <= 2 * half:
        raise GridTooCoarse(f"{n} points cannot hold a {len(w)}-point stencil", points=n)
    out = np.zeros_like(values, dtype=float)
    core = sum(wk * np.take(values, np.arange(k, n - 2 * half + k), axis=axis)
               for k, wk in enumerate(w))
    index = [slice(None)] * values.ndim
    index[axis] = slice(half, n - half)
    out[tuple(index)] = core
    return out, half


@dataclass
class GridFunction:
    x: np.ndarray
    values: np.ndarray
    valid: np.ndarray = field(default=None)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.x.shape:
            raise ValueError("values and x must have the same shape")
        if self.valid is None:
            self.valid = np.ones(self.x.shape, dtype=bool)
        if len(self.x) > 2:
            steps = np.diff(self.x)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError("GridFunction requires a uniform grid")

    @classmethod
    def sample(cls, func, x) -> 'GridFunction':
        x = np.asarray(x, dtype=float)
        return cls(x=x, values=np.asarray(func(x), dtype=float))

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    def derivative(self, order: int, accuracy: int = DEFAULT_ACCURACY) -> 'GridFunction':
        out, half = differentiate(self.values, self.spacing, order, accuracy)
        return GridFunction(self.x, out, erode(self.valid, half))

    def with_values(self, values: np.ndarray, valid: np.ndarray = None) -> 'GridFunction':
        return GridFunction(self.x, values, self.valid.copy() if valid is None else valid)

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        return GridFunction(self.x, self.values + other.values, self.valid & other.valid)

    def __sub__(self, other: 'GridFunction') -> 'GridFunction':
        return GridFunction(self.x, self.values - other.values, self.valid & other.valid)

    def scaled(self, factor) -> 'GridFunction':
        return GridFunction(self.x, np.asarray(factor) * self.values, self.valid.copy())

    def norm(self) -> float:
        """Discrete L²(dx) norm over the valid rows."""
        return float(np.sqrt(np.sum(self.values[self.valid] ** 2) * self.spacing))


@dataclass
class GridFunction2D:
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    valid: np.ndarray = field(default=None)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.x), len(self.y)):
            raise ValueError("values must have shape (len(x), len(y)) with 'ij' indexing")
        if self.valid is None:
            self.valid = np.ones(self.values.shape, dtype=bool)

    @classmethod
    def sample(cls, func, x, y) -> 'GridFunction2D':
        xx, yy = np.meshgrid(x, y, indexing='ij')
        return cls(x=x, y=y, values=np.asarray(func(xx, yy), dtype=float))

    @property
    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing='ij')

    @property
    def spacing(self) -> Tuple[float, float]:
        return float(self.x[1] - self.x[0]), float(self.y[1] - self.y[0])

    def derivative(self, axis: int, order: int,
                   accuracy: int = DEFAULT_ACCURACY) -> 'GridFunction2D':
        out, half = differentiate(self.values, self.spacing[axis], order, accuracy, axis=axis)
        return GridFunction2D(self.x, self.y, out, erode(self.valid, half, axis=axis))

    def with_values(self, values: np.ndarray, valid: np.ndarray = None) -> 'GridFunction2D':
        return GridFunction2D(self.x, self.y, values,
                              self.valid.copy() if valid is None else valid)

    def __add__(self, other: 'GridFunction2D') -> 'GridFunction2D':
        return self.with_values(self.values + other.values, self.valid & other.valid)

    def __sub__(self, other: 'GridFunction2D') -> 'GridFunction2D':
        return self.with_values(self.values - other.values, self.valid & other.valid)

    def scaled(self, factor) -> 'GridFunction2D':
        return self.with_values(np.asarray(factor) * self.values)

    def norm(self) -> float:
        hx, hy = self.spacing
        return float(np.sqrt(np.sum(self.values[self.valid] ** 2) * hx * hy))


def check_resolution(psi, tolerance: float = RESOLUTION_TOLERANCE) -> float:
    """Raise GridTooCoarse when ψ is under-resolved; returns the measured ratio."""
    if isinstance(psi, GridFunction2D):
        ratios = []
        for axis in (0, 1):
            d4 = psi.derivative(axis, 4, accuracy=2)
            h = psi.spacing[axis]
            ratios.append(_ratio(psi.values, d4.values[d4.valid], h))
        ratio = max(ratios)
    else:
        d4 = psi.derivative(4, accuracy=2)
        ratio = _ratio(psi.values, d4.values[d4.valid], psi.spacing)
    if ratio > tolerance:
        raise GridTooCoarse(
            f"grid spacing too large for this function (dx²·|ψ''''|/|ψ| = {ratio:.3g} > {tolerance})",
            ratio=ratio, tolerance=tolerance)
    logger.debug(f"Resolution ratio {ratio:.3g}")
    return ratio


def _ratio(values: np.ndarray, fourth: np.ndarray, h: float) -> float:
    scale = float(np.max(np.abs(values)))
    if scale == 0.0 or fourth.size == 0:
        return 0.0
    return h * h * float(np.max(np.abs(fourth))) / scale


def symmetric_band(diagonal: np.ndarray, weights: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """
    Upper banded storage (scipy.linalg.eig_banded layout) of
    diag(diagonal) + scale · (constant symmetric stencil).
    """
    half = len(weights) // 2
    n = len(diagonal)
    band = np.zeros((half + 1, n))
    band[half] = diagonal + scale * weights[half]
    for k in range(1, half + 1):
        band[half - k, k:] = scale * weights[half + k]
    return band
