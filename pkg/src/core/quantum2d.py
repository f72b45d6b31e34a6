"""
2D quantum λ-oscillator.

Ĥ = Ĥ₁ + Ĥ₂ − λĴ² on L²(ℝ², dμ), dμ = (1+λr²)^{−1/2}dx dy. In the chart
(z, y) with z = x/√(1+Λy²) the operator separates: Ĥ₁ is the 1D oscillator
in z with eigenvalue μ_m, and the y equation

    (1+Λy²)Y'' + 2ΛyY' − [G²y²/(1+Λy²) − 2ν]Y = 0,   G² = 1 + (1−2μ)Λ,

becomes the deformed Hermite equation for q with Y = q(1+Λy²)^{−G/(2Λ)}.
Closed forms work in the dimensionless variables (y, Λ, e); the grid
operators use physical units.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import simpson

from .errors import DegenerateRecursionError, DomainError, ImaginaryGError, NotBoundStateError
from .quantum1d import Parity, QuantumParams, energy_series, max_bound_index, series_solve
from ..utils.export import polynomial_rows, write_rows_csv
from ..utils.finite_difference import DEFAULT_ACCURACY, GridFunction2D, check_resolution

logger = logging.getLogger(__name__)

# brackets below this (relative) count as zero in the Hermite recursion
COLLAPSE_TOLERANCE = 1e-12

GridOperator = Callable[[GridFunction2D], GridFunction2D]


@dataclass(frozen=True)
class GFactor:
    Lambda: float
    mu: float
    value: float

    @classmethod
    def of(cls, Lambda: float, mu: float) -> 'GFactor':
        return cls(Lambda=Lambda, mu=mu, value=g_factor(Lambda, mu))

    @classmethod
    def quantized(cls, Lambda: float, m: int) -> 'GFactor':
        return cls(Lambda=Lambda, mu=energy_series(Lambda, m), value=g_quantized(Lambda, m))


@dataclass
class DeformedHermite:
    degree: int
    Lambda: float
    G: float
    coefficients: np.ndarray
    parity: Parity

    @property
    def nu(self) -> float:
        return nu_quantized(self.Lambda, self.G, self.degree)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def __call__(self, y):
        return self.polynomial(y)

    def ode_residual(self, y) -> np.ndarray:
        """(1+Λy²)q'' + 2(Λ−G)yq' + (2ν−G)q evaluated exactly from the coefficients."""
        y = np.asarray(y, dtype=float)
        q = self.polynomial
        return ((1 + self.Lambda * y * y) * q.deriv(2)(y)
                + 2 * (self.Lambda - self.G) * y * q.deriv(1)(y)
                + (2 * self.nu - self.G) * q(y))


@dataclass(frozen=True)
class SturmLiouvilleForm:
    """(p Y')' + q Y + eigenvalue · w Y = 0."""
    p: Callable
    q: Callable
    w: Callable
    eigenvalue_label: str = '2nu'


@dataclass
class Spectrum2DEntry:
    m: int
    n: int
    energy: float
    provenance: str

    @property
    def N(self) -> int:
        return self.m + self.n

    def to_row(self) -> List[Any]:
        return [self.m, self.n, self.N, float(self.energy), self.provenance]


def g_factor(Lambda: float, mu: float) -> float:
    radicand = 1.0 + (1.0 - 2.0 * mu) * Lambda
    if radicand < 0:
        raise ImaginaryGError(f"1+(1−2μ)Λ = {radicand:.6g} < 0 for Λ={Lambda}, μ={mu}",
                              Lambda=Lambda, mu=mu)
    return math.sqrt(radicand)


def g_quantized(Lambda: float, m: int) -> float:
    """G at μ = μ_m; equals 1 − Λm whenever that is non-negative."""
    closed = 1.0 - Lambda * m
    if closed < 0:
        raise ImaginaryGError(f"G = 1 − Λm = {closed:.6g} is negative for m={m}", m=m)
    radical = g_factor(Lambda, energy_series(Lambda, m))
    if abs(radical - closed) > 1e-9 * max(1.0, closed):
        logger.warning(f"G radical {radical:.17g} differs from 1−Λm = {closed:.17g}")
    return closed


def nu_quantized(Lambda: float, G: float, n: int) -> float:
    return 0.5 * (G * (2 * n + 1) - n * (n + 1) * Lambda)


def deformed_hermite(Lambda: float, G: float, n: int) -> DeformedHermite:
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    two_nu = 2.0 * nu_quantized(Lambda, G, n)
    c = np.zeros(n + 1)
    start = n % 2
    c[start] = 1.0
    for k in range(start, n - 1, 2):
        bracket = Lambda * k * (k + 1) - G * (2 * k + 1) + two_nu
        scale = max(1.0, abs(Lambda) * k * (k + 1), abs(G) * (2 * k + 1))
        if abs(bracket) <= COLLAPSE_TOLERANCE * scale:
            raise DegenerateRecursionError(
                f"recursion terminates at degree {k} before reaching {n} (G = Λ(n+k+1)/2)",
                Lambda=Lambda, G=G, n=n, k=k)
        c[k + 2] = -c[k] * bracket / ((k + 2) * (k + 1))
    return DeformedHermite(degree=n, Lambda=Lambda, G=G, coefficients=c, parity=Parity.of(n))


def admissible_2d(Lambda: float, m: int, n: int) -> bool:
    """G_m = 1 − Λm positive and N = m+n inside the 1D bound range."""
    if m < 0 or n < 0:
        return False
    if 1.0 - Lambda * m <= 0:
        return False
    return (m + n) <= max_bound_index(1.0, Lambda)


def energy_2d(Lambda: float, m: int, n: int) -> float:
    if not admissible_2d(Lambda, m, n):
        raise NotBoundStateError(f"(m={m}, n={n}) is not an admissible bound state for Λ={Lambda}",
                                 Lambda=Lambda, m=m, n=n)
    N = m + n
    return (N + 1) * (1.0 - 0.5 * Lambda * N)


def separated_energy(Lambda: float, m: int, n: int) -> float:
    """μ_m + ν_n assembled from the two separated problems."""
    mu = energy_series(Lambda, m)
    return mu + nu_quantized(Lambda, g_quantized(Lambda, m), n)


def sturm_liouville_form(Lambda: float, G: float) -> SturmLiouvilleForm:
    """Self-adjoint form of the Y equation; the weight is 1 and the eigenvalue 2ν."""
    return SturmLiouvilleForm(
        p=lambda y: 1.0 + Lambda * np.asarray(y, dtype=float) ** 2,
        q=lambda y: -G * G * np.asarray(y, dtype=float) ** 2
        / (1.0 + Lambda * np.asarray(y, dtype=float) ** 2),
        w=lambda y: np.ones_like(np.asarray(y, dtype=float)),
    )


def _log_envelope(Lambda: float, G: float, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if Lambda == 0:
        return -0.5 * G * y * y
    s = 1.0 + Lambda * y * y
    if np.any(s <= 0):
        raise DomainError(f"1+Λy² must stay positive (Λ={Lambda})", Lambda=Lambda)
    return -(G / (2 * Lambda)) * np.log1p(Lambda * y * y)


def y_mode(Lambda: float, G: float, n: int, y):
    """Y_n(y) = q_n(y)(1+Λy²)^{−G/(2Λ)}, leading coefficient 1."""
    values = deformed_hermite(Lambda, G, n)(y) * np.exp(_log_envelope(Lambda, G, y))
    return float(values) if np.ndim(y) == 0 else values


def z_mode(Lambda: float, m: int, z):
    """1D eigenfunction of Ĥ₁ in the dimensionless variable z."""
    series = series_solve(Lambda, energy_series(Lambda, m), Parity.of(m), max(m + 2, 2))
    values = series(z) * np.exp(_log_envelope(Lambda, 1.0, z))
    return float(values) if np.ndim(z) == 0 else values


def y_mode_overlap(Lambda: float, G: float, m: int, n: int, points: int = 20001,
                   half_width: float = None) -> float:
    """∫ Y_m Y_n w dy on the natural interval, normalized by ‖Y_m‖‖Y_n‖."""
    if half_width is None:
        if Lambda < 0:
            half_width = 1.0 / math.sqrt(-Lambda)
        else:
            # power-law tails for Λ > 0: widen until |Y| at the edge is negligible
            half_width = 12.0 / math.sqrt(G)
            degree = max(m, n)
            while (degree * math.log(half_width)
                   + float(_log_envelope(Lambda, G, half_width))) > -40.0:
                half_width *= 2
                if half_width > 1e6:
                    raise NotBoundStateError(f"Y modes of degree {degree} are not square integrable "
                                             f"for Λ={Lambda}, G={G}")
        points = max(points, int(100 * half_width) | 1)
    y = np.linspace(-half_width, half_width, points)
    if Lambda < 0:
        y = y[1:-1]
    w = sturm_liouville_form(Lambda, G).w(y)
    ym = y_mode(Lambda, G, m, y)
    yn = y_mode(Lambda, G, n, y)
    overlap = simpson(ym * yn * w, x=y)
    norm = math.sqrt(simpson(ym * ym * w, x=y) * simpson(yn * yn * w, x=y))
    return float(overlap / norm)


def wavefunction_2d(qp: QuantumParams, m: int, n: int, x, y):
    """Unnormalized Ψ_{m,n}(x, y) = Z_m(z) Y_n(y) in physical coordinates."""
    Lambda = qp.Lambda
    xs = np.asarray(x, dtype=float) / qp.length_scale
    ys = np.asarray(y, dtype=float) / qp.length_scale
    s = 1.0 + Lambda * ys * ys
    if np.any(s <= 0) or np.any(1.0 + Lambda * (xs * xs + ys * ys) <= 0):
        raise DomainError(f"point outside the disk 1+λr² > 0 (λ={qp.lam})", lam=qp.lam)
    z = xs / np.sqrt(s)
    values = z_mode(Lambda, m, z) * y_mode(Lambda, g_quantized(Lambda, m), n, ys)
    return float(values) if np.ndim(values) == 0 else values


# ---------------------------------------------------------------------------
# Grid operators


def _derivatives(psi: GridFunction2D, accuracy: int) -> Dict[str, GridFunction2D]:
    dx = psi.derivative(0, 1, accuracy)
    return {
        'x': dx,
        'y': psi.derivative(1, 1, accuracy),
        'xx': psi.derivative(0, 2, accuracy),
        'yy': psi.derivative(1, 2, accuracy),
        'xy': dx.derivative(1, 1, accuracy),
    }


def _valid(*parts: GridFunction2D) -> np.ndarray:
    mask = parts[0].valid.copy()
    for part in parts[1:]:
        mask &= part.valid
    return mask


def _metric_2d(qp: QuantumParams, psi: GridFunction2D) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, y = psi.mesh
    g = 1.0 + qp.lam * (x * x + y * y)
    if np.any(g <= 0):
        raise DomainError(f"grid is not inscribed in the disk 1+λr² > 0 (λ={qp.lam})",
                          lam=qp.lam)
    return x, y, g


def apply_h1(qp: QuantumParams, psi: GridFunction2D,
             accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    x, _, g = _metric_2d(qp, psi)
    d = _derivatives(psi, accuracy)
    kinetic = -(qp.hbar ** 2 / (2 * qp.mass)) * (g * d['xx'].values + qp.lam * x * d['x'].values)
    potential = 0.5 * qp.mass * qp.alpha2 * x * x / g
    return psi.with_values(kinetic + potential * psi.values, _valid(psi, d['x'], d['xx']))


def apply_h2(qp: QuantumParams, psi: GridFunction2D,
             accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    _, y, g = _metric_2d(qp, psi)
    d = _derivatives(psi, accuracy)
    kinetic = -(qp.hbar ** 2 / (2 * qp.mass)) * (g * d['yy'].values + qp.lam * y * d['y'].values)
    potential = 0.5 * qp.mass * qp.alpha2 * y * y / g
    return psi.with_values(kinetic + potential * psi.values, _valid(psi, d['y'], d['yy']))


def apply_j2(qp: QuantumParams, psi: GridFunction2D,
             accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    """−(ħ²/2m)(x∂y − y∂x)²."""
    x, y, _ = _metric_2d(qp, psi)
    d = _derivatives(psi, accuracy)
    rotation = (x * x * d['yy'].values + y * y * d['xx'].values - 2 * x * y * d['xy'].values
                - x * d['x'].values - y * d['y'].values)
    return psi.with_values(-(qp.hbar ** 2 / (2 * qp.mass)) * rotation, _valid(psi, *d.values()))


def angular_momentum(qp: QuantumParams, psi: GridFunction2D,
                     accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    """ħ(x∂y − y∂x)ψ, the real generator with Ĵ = −i times it."""
    x, y, _ = _metric_2d(qp, psi)
    dx = psi.derivative(0, 1, accuracy)
    dy = psi.derivative(1, 1, accuracy)
    return psi.with_values(qp.hbar * (x * dy.values - y * dx.values), _valid(psi, dx, dy))


def apply_hamiltonian_2d(qp: QuantumParams, psi: GridFunction2D,
                         accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    check_resolution(psi)
    h1 = apply_h1(qp, psi, accuracy)
    h2 = apply_h2(qp, psi, accuracy)
    j2 = apply_j2(qp, psi, accuracy)
    return h1 + h2 - j2.scaled(qp.lam)


def apply_hamiltonian_2d_direct(qp: QuantumParams, psi: GridFunction2D,
                                accuracy: int = DEFAULT_ACCURACY) -> GridFunction2D:
    """The same operator assembled as −(ħ²/2m)[∇² + λE² + λE] + V, E = x∂x + y∂y."""
    x, y, g = _metric_2d(qp, psi)
    d = _derivatives(psi, accuracy)
    euler = x * d['x'].values + y * d['y'].values
    euler2 = (x * x * d['xx'].values + 2 * x * y * d['xy'].values + y * y * d['yy'].values
              + euler)
    laplacian = d['xx'].values + d['yy'].values
    kinetic = -(qp.hbar ** 2 / (2 * qp.mass)) * (laplacian + qp.lam * euler2 + qp.lam * euler)
    potential = 0.5 * qp.mass * qp.alpha2 * (x * x + y * y) / g
    return psi.with_values(kinetic + potential * psi.values, _valid(psi, *d.values()))


def relative_residual(result: GridFunction2D, reference: GridFunction2D) -> float:
    ref = reference.with_values(reference.values, result.valid & reference.valid)
    norm = ref.norm()
    return result.with_values(result.values, ref.valid).norm() / norm if norm else 0.0


def commutator(a: GridOperator, b: GridOperator, psi: GridFunction2D) -> GridFunction2D:
    return a(b(psi)) - b(a(psi))


@dataclass
class CompatiblePair:
    label: str
    first: GridOperator
    second: GridOperator

    def commutator_residual(self, psi: GridFunction2D) -> float:
        return relative_residual(commutator(self.first, self.second, psi), psi)


def compatible_sets(qp: QuantumParams,
                    accuracy: int = DEFAULT_ACCURACY) -> List[CompatiblePair]:
    def h1(psi):
        return apply_h1(qp, psi, accuracy)

    def h2(psi):
        return apply_h2(qp, psi, accuracy)

    def j2(psi):
        return apply_j2(qp, psi, accuracy)

    return [
        CompatiblePair('H1 | H2-lam*J2', h1, lambda psi: h2(psi) - j2(psi).scaled(qp.lam)),
        CompatiblePair('H1-lam*J2 | H2', lambda psi: h1(psi) - j2(psi).scaled(qp.lam), h2),
        CompatiblePair('H1+H2 | J', lambda psi: h1(psi) + h2(psi),
                       lambda psi: angular_momentum(qp, psi, accuracy)),
    ]


# ---------------------------------------------------------------------------
# Tables


def spectrum_2d(Lambda: float, max_N: int) -> List[Spectrum2DEntry]:
    """Closed-form and separated energies for every admissible (m, n) with m+n ≤ max_N."""
    entries = []
    for N in range(max_N + 1):
        for m in range(N + 1):
            n = N - m
            if not admissible_2d(Lambda, m, n):
                logger.warning(f"Skipping (m={m}, n={n}): not admissible for Λ={Lambda}")
                continue
            entries.append(Spectrum2DEntry(m, n, energy_2d(Lambda, m, n), 'closed-form'))
            entries.append(Spectrum2DEntry(m, n, separated_energy(Lambda, m, n), 'separation'))
    return entries


def write_spectrum_2d_csv(path, entries: List[Spectrum2DEntry]) -> None:
    write_rows_csv(path, ['m', 'n', 'N=m+n', 'energy', 'provenance'],
                   [e.to_row() for e in entries])


def write_polynomials_csv(path, polynomials: List[DeformedHermite]) -> None:
    rows = polynomial_rows([p.coefficients for p in polynomials])
    width = len(rows[0]) - 1 if rows else 1
    write_rows_csv(path, ['degree'] + [f"c{i}" for i in range(width)], rows)
