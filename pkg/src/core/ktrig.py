"""
Curvature-dependent trigonometry.

Cos_κ, Sin_κ and Tan_κ interpolate between circular (κ > 0), flat (κ = 0)
and hyperbolic (κ < 0) functions. The deformation parameter used by the
oscillator models is λ = −κ; `to_geodesic`/`from_geodesic` implement the
change of variable x = Sin_κ(u) that turns the deformed kinetic term into
a flat one.

All functions accept scalars or numpy arrays and return the same shape.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import DomainError, PoleError

ArrayLike = Union[float, np.ndarray]

# |κ|x² below this switches to the truncated Taylor series
SERIES_THRESHOLD = 1e-8
POLE_TOLERANCE = 1e-13


@dataclass(frozen=True)
class Curvature:
    kappa: float

    @classmethod
    def from_lambda(cls, lam: float) -> 'Curvature':
        return cls(kappa=-float(lam))

    @property
    def lam(self) -> float:
        return -self.kappa

    @property
    def regime(self) -> str:
        if self.kappa > 0:
            return 'spherical'
        if self.kappa < 0:
            return 'hyperbolic'
        return 'flat'

    def cos(self, x: ArrayLike) -> ArrayLike:
        return cos_k(self.kappa, x)

    def sin(self, x: ArrayLike) -> ArrayLike:
        return sin_k(self.kappa, x)

    def tan(self, x: ArrayLike) -> ArrayLike:
        return tan_k(self.kappa, x)


def _finish(out: np.ndarray, like: ArrayLike) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(out)
    return out


def cos_k(kappa: float, x: ArrayLike) -> ArrayLike:
    xs = np.asarray(x, dtype=float)
    z = kappa * xs * xs
    with np.errstate(over='ignore', invalid='ignore'):
        if kappa > 0:
            exact = np.cos(np.sqrt(kappa) * xs)
        elif kappa < 0:
            exact = np.cosh(np.sqrt(-kappa) * xs)
        else:
            exact = np.ones_like(xs)
    taylor = 1.0 - z / 2.0 + z * z / 24.0
    return _finish(np.where(np.abs(z) < SERIES_THRESHOLD, taylor, exact), x)


def sin_k(kappa: float, x: ArrayLike) -> ArrayLike:
    xs = np.asarray(x, dtype=float)
    z = kappa * xs * xs
    with np.errstate(over='ignore', invalid='ignore'):
        if kappa > 0:
            root = np.sqrt(kappa)
            exact = np.sin(root * xs) / root
        elif kappa < 0:
            root = np.sqrt(-kappa)
            exact = np.sinh(root * xs) / root
        else:
            exact = xs.copy()
    taylor = xs * (1.0 - z / 6.0 + z * z / 120.0)
    return _finish(np.where(np.abs(z) < SERIES_THRESHOLD, taylor, exact), x)


def tan_k(kappa: float, x: ArrayLike) -> ArrayLike:
    c = np.asarray(cos_k(kappa, x))
    if np.any(np.abs(c) < POLE_TOLERANCE):
        raise PoleError(f"Tan_κ has a pole in the requested points (κ={kappa})", kappa=kappa)
    s = np.asarray(sin_k(kappa, x))
    return _finish(s / c, x)


def to_geodesic(lam: float, x: ArrayLike) -> ArrayLike:
    """Return u with x = Sin_κ(u), κ = −λ, on the sign-preserving branch."""
    xs = np.asarray(x, dtype=float)
    kappa = -lam
    if lam < 0:
        edge = 1.0 / np.sqrt(-lam)
        if np.any(np.abs(xs) >= edge):
            raise DomainError(f"|x| must stay below 1/√|λ| = {edge:.6g} for λ={lam}", lam=lam)
    z = kappa * xs * xs
    with np.errstate(invalid='ignore'):
        if lam > 0:
            root = np.sqrt(lam)
            exact = np.arcsinh(root * xs) / root
        elif lam < 0:
            root = np.sqrt(-lam)
            exact = np.arcsin(root * xs) / root
        else:
            exact = xs.copy()
    taylor = xs * (1.0 + z / 6.0 + 3.0 * z * z / 40.0)
    return _finish(np.where(np.abs(z) < SERIES_THRESHOLD, taylor, exact), x)


def sincos_scalar(kappa: float, x: float) -> Tuple[float, float]:
    """(Sin_κ(x), Cos_κ(x)) for a plain float, using math instead of numpy."""
    z = kappa * x * x
    if abs(z) < SERIES_THRESHOLD:
        return x * (1.0 - z / 6.0 + z * z / 120.0), 1.0 - z / 2.0 + z * z / 24.0
    if kappa > 0:
        root = math.sqrt(kappa)
        return math.sin(root * x) / root, math.cos(root * x)
    root = math.sqrt(-kappa)
    return math.sinh(root * x) / root, math.cosh(root * x)


def from_geodesic(lam: float, u: ArrayLike) -> ArrayLike:
    return sin_k(-lam, u)


def geodesic_half_width(lam: float) -> float:
    """Half-length of the u interval covered by the chart (infinite unless λ < 0)."""
    if lam < 0:
        return float(np.pi / (2.0 * np.sqrt(-lam)))
    return float('inf')
