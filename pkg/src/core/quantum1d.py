"""
1D quantum λ-oscillator.

The Hamiltonian

    Ĥ₁ = −(ħ²/2m)[(1+λx²)d²/dx² + λx d/dx] + ½mα²x²/(1+λx²),
    α² = β(β + ħλ/m),

is self-adjoint in L²(dμ) with dμ = (1+λx²)^{−1/2}dx. It factorizes as
A⁺A + E₀ with a shape-invariant superpotential W = βx/√(1+λx²), which gives
the closed-form ladder spectrum; the power-series route in the
dimensionless variables (y, Λ, ℰ) gives the same levels. Grid routines use
central finite differences from `src.utils.finite_difference`.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import simpson

from .errors import ConfigError, DomainError, NotBoundStateError, NotNormalizableError
from ..utils.export import write_numeric_csv, write_rows_csv
from ..utils.finite_difference import DEFAULT_ACCURACY, GridFunction, check_resolution

logger = logging.getLogger(__name__)

Unbounded = float
# relative size below which a recursion bracket counts as exactly zero
TERMINATION_TOLERANCE = 1e-12
# Ψ₀² tail cut: exp(-37) ≈ 1e-16
TAIL_EXPONENT = 37.0


@dataclass(frozen=True)
class QuantumParams:
    lam: float = 0.0
    beta: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if self.mass <= 0 or self.hbar <= 0:
            raise ConfigError("mass and hbar must be positive")
        if self.alpha2 < 0:
            raise ConfigError(f"α² = β(β + ħλ/m) = {self.alpha2:.6g} is negative")

    @property
    def Lambda(self) -> float:
        return self.hbar * self.lam / (self.mass * self.beta)

    @property
    def alpha2(self) -> float:
        return self.beta * (self.beta + self.hbar * self.lam / self.mass)

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha2)

    @property
    def length_scale(self) -> float:
        """x = length_scale · y."""
        return math.sqrt(self.hbar / (self.mass * self.beta))

    @property
    def energy_scale(self) -> float:
        """E = energy_scale · ℰ."""
        return self.hbar * self.beta

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.update(Lambda=self.Lambda, alpha=self.alpha)
        return data


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n: int) -> 'Parity':
        return cls.EVEN if n % 2 == 0 else cls.ODD


class Provenance(Enum):
    SERIES = "series"
    LADDER = "ladder"
    ORACLE = "oracle"


@dataclass
class SeriesSolution:
    coefficients: np.ndarray
    parity: Parity
    energy: float
    Lambda: float
    terminated_at: Optional[int] = None
    ratio_estimate: float = 0.0
    last_ratio: float = 0.0

    @property
    def polynomial(self) -> Polynomial:
        coefficients = self.coefficients
        if self.terminated_at is not None:
            coefficients = coefficients[:self.terminated_at + 1]
        return Polynomial(coefficients)

    def __call__(self, y):
        return self.polynomial(y)


@dataclass
class SpectrumEntry:
    n: int
    energy: float
    provenance: Provenance
    residual: float = 0.0
    status: str = 'bound'

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'energy': self.energy, 'provenance': self.provenance.value,
                'residual': self.residual, 'status': self.status}


@dataclass
class LadderEigenfunction:
    n: int
    energy: float
    psi: GridFunction
    residual: float


@dataclass
class LadderParams:
    beta: float
    lam: float
    beta_k: List[float] = field(default_factory=list)
    R_values: List[float] = field(default_factory=list)

    @classmethod
    def build(cls, beta: float, lam: float, n: int) -> 'LadderParams':
        betas = [beta]
        for _ in range(n):
            betas.append(shape_shift(betas[-1], lam))
        return cls(beta=beta, lam=lam, beta_k=betas,
                   R_values=[R(b, lam) for b in betas[1:]])

    def superpotential(self, x, k: int = 0):
        return superpotential(self.beta_k[k], self.lam, x)

    def energies(self) -> List[float]:
        """E_n = E₀ + Σ_{k≤n} R(β_k), the Gendenshteĭn sum."""
        ground = 0.5 * self.beta
        return [ground + sum(self.R_values[:n]) for n in range(len(self.beta_k))]


def _metric(lam: float, x) -> np.ndarray:
    g = 1.0 + lam * np.asarray(x, dtype=float) ** 2
    if np.any(g <= 0):
        raise DomainError(f"grid leaves the region 1+λx² > 0 (λ={lam})", lam=lam)
    return g


def invariant_measure_weight(lam: float, x):
    g = _metric(lam, x)
    w = 1.0 / np.sqrt(g)
    return float(w) if np.ndim(x) == 0 else w


def shape_shift(beta: float, lam: float) -> float:
    return beta - lam


def R(beta: float, lam: float) -> float:
    return beta + 0.5 * lam


def superpotential(beta: float, lam: float, x):
    g = _metric(lam, x)
    return beta * np.asarray(x, dtype=float) / np.sqrt(g)


def partner_potentials(beta: float, lam: float, x):
    """(V₁, V₂) of A⁺A and AA⁺ at ħ = m = 1."""
    g = _metric(lam, x)
    x = np.asarray(x, dtype=float)
    return (beta * beta * x * x - beta) / (2 * g), (beta * beta * x * x + beta) / (2 * g)


# ---------------------------------------------------------------------------
# Closed forms


def max_bound_index(beta: float, lam: float) -> Union[int, Unbounded]:
    """Largest n with β − λn/2 ≥ 0 (λ > 0); unbounded (math.inf) for λ ≤ 0."""
    if beta <= 0:
        raise ConfigError(f"beta must be positive, got {beta}")
    if lam <= 0:
        return math.inf
    return int(math.floor(2 * beta / lam + 1e-12))


def normalizable_bound_index(beta: float, lam: float) -> Union[int, Unbounded]:
    """Largest n below the continuum threshold, i.e. n < β/λ (λ > 0)."""
    if lam <= 0:
        return math.inf
    return int(math.ceil(beta / lam - 1e-12)) - 1


def continuum_threshold(qp: QuantumParams) -> float:
    if qp.lam <= 0:
        return math.inf
    return 0.5 * qp.mass * qp.alpha2 / qp.lam


def level_status(beta: float, lam: float, n: int) -> str:
    if n > max_bound_index(beta, lam):
        return 'excluded'
    if n > normalizable_bound_index(beta, lam):
        return 'non-normalizable'
    return 'bound'


def energy_series(Lambda: float, p: int) -> float:
    if p < 0:
        raise ConfigError(f"level index must be non-negative, got {p}")
    if p > max_bound_index(1.0, Lambda):
        raise NotBoundStateError(f"p={p} exceeds the bound-state limit 2/Λ for Λ={Lambda}",
                                 p=p, Lambda=Lambda)
    return p * (1.0 - 0.5 * Lambda * p) + 0.5


def energy_ladder(beta: float, lam: float, n: int, hbar: float = 1.0,
                  mass: float = 1.0) -> float:
    if n < 0:
        raise ConfigError(f"level index must be non-negative, got {n}")
    if n > max_bound_index(beta * mass / hbar, lam):
        raise NotBoundStateError(f"n={n} exceeds 2β/λ for β={beta}, λ={lam}", n=n)
    return hbar * beta * (n + 0.5) - hbar * hbar * lam * n * n / (2 * mass)


def series_solve(Lambda: float, energy: float, parity: Parity, n_max: int) -> SeriesSolution:
    """Power series φ = Σ a_n y^n of (1+Λy²)φ'' + (Λ−2)yφ' + (2ℰ−1)φ = 0."""
    if n_max < 2:
        raise ConfigError(f"n_max must be at least 2, got {n_max}")
    if isinstance(parity, str):
        parity = Parity(parity)
    a = np.zeros(n_max + 1)
    start = 0 if parity is Parity.EVEN else 1
    a[start] = 1.0
    shift = 2 * energy - 1
    terminated = None
    ratios: Dict[int, float] = {}
    for n in range(start, n_max - 1, 2):
        bracket = Lambda * n * n - 2 * n + shift
        scale = max(1.0, abs(Lambda) * n * n, 2.0 * n, abs(shift))
        if abs(bracket) <= TERMINATION_TOLERANCE * scale:
            terminated = n
            break
        a[n + 2] = -a[n] * bracket / ((n + 2) * (n + 1))
        ratios[n] = abs(a[n + 2] / a[n])
    ratio_estimate = 0.0
    last_ratio = 0.0
    if terminated is None and ratios:
        last = max(ratios)
        last_ratio = ratios[last]
        half = last // 2
        if half % 2 != last % 2:
            half -= 1
        if half in ratios and half > 0:
            # r_n = r∞ + c/n + O(1/n²); eliminate the 1/n term
            ratio_estimate = (last * last_ratio - half * ratios[half]) / (last - half)
        else:
            ratio_estimate = last_ratio
    logger.debug(f"series Λ={Lambda} ℰ={energy} {parity.value}: terminated_at={terminated}")
    return SeriesSolution(coefficients=a, parity=parity, energy=energy, Lambda=Lambda,
                          terminated_at=terminated, ratio_estimate=ratio_estimate,
                          last_ratio=last_ratio)


def ladder_polynomial(beta: float, lam: float, n: int) -> Polynomial:
    """P_n with Ψ_n = P_n(x)(1+λx²)^{−β/(2λ)} (unnormalized)."""
    betas = LadderParams.build(beta, lam, n).beta_k
    metric = Polynomial([1.0, 0.0, lam])
    x = Polynomial([0.0, 1.0])
    poly = Polynomial([1.0])
    for k in range(n - 1, -1, -1):
        poly = (-metric * poly.deriv() + (betas[k + 1] + betas[k]) * x * poly) / math.sqrt(2.0)
    return poly


# ---------------------------------------------------------------------------
# Wavefunctions


def _log_ground(beta: float, lam: float, x, hbar: float = 1.0, mass: float = 1.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if lam == 0:
        return -0.5 * mass * beta * x * x / hbar
    _metric(lam, x)
    return -(mass * beta / (2 * hbar * lam)) * np.log1p(lam * x * x)


def _logcosh(z: np.ndarray) -> np.ndarray:
    z = np.abs(z)
    return z + np.log1p(np.exp(-2 * z)) - math.log(2.0)


def ground_norm_squared(beta: float, lam: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """∫ Ψ₀² dμ for the unnormalized Ψ₀ = (1+λx²)^{−mβ/(2ħλ)}, by Simpson in u."""
    if beta <= 0:
        raise NotNormalizableError(f"Ψ₀ is not normalizable for β={beta}", beta=beta)
    width = math.sqrt(hbar / (mass * beta))
    if lam == 0:
        u = np.linspace(-12 * width, 12 * width, 4001)
        integrand = np.exp(-mass * beta * u * u / hbar)
    elif lam > 0:
        a = math.sqrt(lam)
        s = mass * beta / (hbar * lam)
        U = 8 * width
        while 2 * s * float(_logcosh(np.array(a * U))) <= TAIL_EXPONENT:
            U *= 2
        points = int(min(400001, max(4001, 100 * 2 * U / min(width, 1 / a))))
        u = np.linspace(-U, U, points | 1)
        integrand = np.exp(-2 * s * _logcosh(a * u))
    else:
        a = math.sqrt(-lam)
        s = mass * beta / (hbar * -lam)
        half = math.pi / (2 * a)
        points = int(min(400001, max(4001, 200 * 2 * half / min(width, half))))
        u = np.linspace(-half, half, points | 1)
        integrand = np.cos(a * u) ** (2 * s)
    value = float(simpson(integrand, x=u))
    if not np.isfinite(value) or value <= 0:
        raise NotNormalizableError(f"dμ-norm of Ψ₀ is not finite (β={beta}, λ={lam})")
    return value


def ground_state(beta: float, lam: float, x, hbar: float = 1.0, mass: float = 1.0):
    norm = math.sqrt(ground_norm_squared(beta, lam, hbar, mass))
    values = np.exp(_log_ground(beta, lam, x, hbar, mass)) / norm
    return float(values) if np.ndim(x) == 0 else values


def quadrature_mu_grid(f: GridFunction, lam: float) -> float:
    """Simpson integral of f over the valid rows against dμ."""
    x = f.x[f.valid]
    if len(x) < 3:
        return 0.0
    return float(simpson(f.values[f.valid] * invariant_measure_weight(lam, x), x=x))


def inner_mu(a: GridFunction, b: GridFunction, lam: float) -> float:
    mask = a.valid & b.valid
    return quadrature_mu_grid(GridFunction(a.x, a.values * b.values, mask), lam)


def normalize_mu(psi: GridFunction, lam: float) -> GridFunction:
    norm = math.sqrt(inner_mu(psi, psi, lam))
    if norm == 0:
        raise NotNormalizableError("cannot normalize the zero function")
    return psi.scaled(1.0 / norm)


# ---------------------------------------------------------------------------
# Grid operators


def apply_hamiltonian_1d(qp: QuantumParams, psi: GridFunction,
                         accuracy: int = DEFAULT_ACCURACY) -> GridFunction:
    check_resolution(psi)
    x = psi.x
    g = _metric(qp.lam, x)
    d1 = psi.derivative(1, accuracy)
    d2 = psi.derivative(2, accuracy)
    kinetic = -(qp.hbar ** 2 / (2 * qp.mass)) * (g * d2.values + qp.lam * x * d1.values)
    potential = 0.5 * qp.mass * qp.alpha2 * x * x / g
    return GridFunction(x, kinetic + potential * psi.values, d1.valid & d2.valid)


def hamiltonian_residual(qp: QuantumParams, psi: GridFunction, energy: float,
                         accuracy: int = DEFAULT_ACCURACY) -> float:
    h_psi = apply_hamiltonian_1d(qp, psi, accuracy)
    diff = h_psi - psi.scaled(energy)
    reference = GridFunction(psi.x, psi.values, diff.valid)
    return diff.norm() / reference.norm()


def apply_A(beta: float, lam: float, psi: GridFunction,
            accuracy: int = DEFAULT_ACCURACY) -> GridFunction:
    check_resolution(psi)
    root = np.sqrt(_metric(lam, psi.x))
    d1 = psi.derivative(1, accuracy)
    values = (root * d1.values + beta * psi.x * psi.values / root) / math.sqrt(2.0)
    return GridFunction(psi.x, values, d1.valid)


def apply_Aplus(beta: float, lam: float, psi: GridFunction,
                accuracy: int = DEFAULT_ACCURACY) -> GridFunction:
    check_resolution(psi)
    root = np.sqrt(_metric(lam, psi.x))
    d1 = psi.derivative(1, accuracy)
    values = (-root * d1.values + beta * psi.x * psi.values / root) / math.sqrt(2.0)
    return GridFunction(psi.x, values, d1.valid)


def ladder_eigenfunction(beta: float, lam: float, n: int, grid: np.ndarray,
                         accuracy: int = DEFAULT_ACCURACY) -> LadderEigenfunction:
    """Ψ_n = A⁺(β)A⁺(β₁)···A⁺(β_{n−1})Ψ₀(β_n), renormalized in L²(dμ) after each rung."""
    if n > max_bound_index(beta, lam):
        raise NotBoundStateError(f"n={n} exceeds 2β/λ for β={beta}, λ={lam}", n=n)
    params = LadderParams.build(beta, lam, n)
    x = np.asarray(grid, dtype=float)
    psi = GridFunction(x, np.exp(_log_ground(params.beta_k[n], lam, x)))
    psi = normalize_mu(psi, lam)
    for k in range(n - 1, -1, -1):
        psi = normalize_mu(apply_Aplus(params.beta_k[k], lam, psi, accuracy), lam)
        logger.debug(f"rung β_{k}={params.beta_k[k]:.6g} applied")
    energy = energy_ladder(beta, lam, n)
    residual = hamiltonian_residual(QuantumParams(lam=lam, beta=beta), psi, energy, accuracy)
    logger.info(f"Ladder eigenfunction n={n}: E={energy:.12g}, residual={residual:.3g}")
    return LadderEigenfunction(n=n, energy=energy, psi=psi, residual=residual)


def shape_invariance_residual(beta: float, lam: float, psi: GridFunction,
                              constant: Optional[float] = None,
                              accuracy: int = DEFAULT_ACCURACY) -> float:
    """‖AA⁺(β)ψ − A⁺A(β−λ)ψ − R(β−λ)ψ‖/‖ψ‖; `constant` replaces R(β−λ)."""
    shifted = shape_shift(beta, lam)
    shift = R(shifted, lam) if constant is None else constant
    upper = apply_A(beta, lam, apply_Aplus(beta, lam, psi, accuracy), accuracy)
    lower = apply_Aplus(shifted, lam, apply_A(shifted, lam, psi, accuracy), accuracy)
    diff = upper - lower - psi.scaled(shift)
    reference = GridFunction(psi.x, psi.values, diff.valid)
    return diff.norm() / reference.norm()


def random_smooth_function(x: np.ndarray, rng: np.random.Generator, degree: int = 4,
                           width: float = 1.5) -> GridFunction:
    """Gaussian envelope times a random polynomial: smooth and effectively compact."""
    coefficients = rng.normal(size=degree + 1)
    center = rng.uniform(-0.5, 0.5)
    x = np.asarray(x, dtype=float)
    values = Polynomial(coefficients)(x - center) * np.exp(-((x - center) / width) ** 2)
    return GridFunction(x, values)


# ---------------------------------------------------------------------------
# Spectrum tables


def closed_form_spectrum(qp: QuantumParams, levels: int) -> List[SpectrumEntry]:
    """Series and ladder energies for n < levels; levels past 2β/λ are marked excluded."""
    entries: List[SpectrumEntry] = []
    for n in range(levels):
        status = level_status(qp.beta * qp.mass / qp.hbar, qp.lam, n)
        if status == 'excluded':
            entries.append(SpectrumEntry(n, math.nan, Provenance.LADDER, 0.0, status))
            logger.warning(f"Level n={n} lies past the bound-state limit and is excluded")
            continue
        series = qp.energy_scale * energy_series(qp.Lambda, n)
        ladder = energy_ladder(qp.beta, qp.lam, n, qp.hbar, qp.mass)
        entries.append(SpectrumEntry(n, series, Provenance.SERIES, 0.0, status))
        entries.append(SpectrumEntry(n, ladder, Provenance.LADDER, 0.0, status))
    return entries


def write_spectrum_csv(path, entries: List[SpectrumEntry]) -> None:
    write_rows_csv(path, ['n', 'energy', 'provenance', 'residual'],
                   [[e.n, float(e.energy), e.provenance.value, float(e.residual)]
                    for e in entries])


def write_wavefunction_csv(path, psi: GridFunction) -> None:
    write_numeric_csv(path, ['x', 'psi'], [psi.x[psi.valid], psi.values[psi.valid]])
