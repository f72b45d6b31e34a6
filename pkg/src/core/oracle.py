"""
Brute-force checks for the closed-form results.

`sturm_liouville_eigen` diagonalizes Ĥ₁ on a grid. By default it works in
the geodesic coordinate u (x = Sin_κ(u), κ = −λ), where dμ = du and the
operator is −(ħ²/2m)d²/du² + ½mα²Tan_κ(u)²: already symmetric, so the
fourth-order 5-point stencil gives a banded symmetric matrix for
`scipy.linalg.eig_banded`. The `x` variable path discretizes the
conservative form −(ħ²/2m)(pψ′)′ + wVψ = Ewψ, p = w⁻¹ = √(1+λx²), and
symmetrizes it by conjugating with w^{1/2}.

Every solve is repeated on the grid with twice the spacing; the difference
gives a Richardson estimate of the discretization error.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eig_banded

from .classical import StateKind
from .errors import ConfigError, ConvergenceError, DomainError, GridTooCoarse
from .ktrig import from_geodesic, geodesic_half_width, tan_k
from .models import Model
from .quantum1d import QuantumParams, continuum_threshold, energy_ladder, invariant_measure_weight
from ..utils.export import write_rows_csv
from ..utils.finite_difference import (DEFAULT_ACCURACY, GridFunction, central_weights,
                                       check_resolution, differentiate, erode, symmetric_band)

logger = logging.getLogger(__name__)

MIN_POINTS = 64
MAX_POINTS = 64001
DEFAULT_POINTS = 2001
# domain doubling stops once bound eigenvalues move less than this
TRUNCATION_TOLERANCE = 1e-8
# margin kept from the boundary 1/√|λ| in the x variable
BOUNDARY_MARGIN = 1e-3


class Boundary(Enum):
    DIRICHLET = "dirichlet"
    NATURAL_TRUNCATION = "natural-truncation"


class Variable(Enum):
    U = "u"
    X = "x"


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of `points` nodes on `domain`, endpoints included."""
    domain: Tuple[float, float]
    points: int = DEFAULT_POINTS
    boundary: Boundary = Boundary.NATURAL_TRUNCATION
    variable: Variable = Variable.U

    def __post_init__(self):
        if isinstance(self.boundary, str):
            object.__setattr__(self, 'boundary', Boundary(self.boundary))
        if isinstance(self.variable, str):
            object.__setattr__(self, 'variable', Variable(self.variable))
        object.__setattr__(self, 'domain', (float(self.domain[0]), float(self.domain[1])))
        if self.points < MIN_POINTS:
            raise ConfigError(f"a grid needs at least {MIN_POINTS} points, got {self.points}")
        if not self.domain[0] < self.domain[1]:
            raise ConfigError(f"empty domain {self.domain}")

    @classmethod
    def default(cls, qp: QuantumParams, points: int = DEFAULT_POINTS,
                variable: Variable = Variable.U) -> 'GridSpec':
        variable = Variable(variable)
        if qp.lam < 0:
            if variable is Variable.U:
                half = geodesic_half_width(qp.lam)
            else:
                half = (1.0 - BOUNDARY_MARGIN) / math.sqrt(-qp.lam)
            return cls((-half, half), points, Boundary.DIRICHLET, variable)
        L = 12.0 * qp.length_scale
        return cls((-L, L), points, Boundary.NATURAL_TRUNCATION, variable)

    @property
    def spacing(self) -> float:
        return (self.domain[1] - self.domain[0]) / (self.points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.points)

    def coarse(self) -> 'GridSpec':
        if (self.points - 1) % 2:
            raise ConfigError("two-grid estimates need an even number of intervals")
        return replace(self, points=(self.points - 1) // 2 + 1)

    def doubled(self) -> 'GridSpec':
        """Twice the domain at the same spacing."""
        a, b = self.domain
        center, half = 0.5 * (a + b), 0.5 * (b - a)
        return replace(self, domain=(center - 2 * half, center + 2 * half),
                       points=2 * (self.points - 1) + 1)

    def check(self, lam: float) -> None:
        if lam >= 0:
            return
        a, b = self.domain
        if self.variable is Variable.U:
            edge = geodesic_half_width(lam)
            if a < -edge - 1e-12 or b > edge + 1e-12:
                raise DomainError(f"u-domain {self.domain} exceeds the natural interval ±{edge:.6g}")
        else:
            edge = 1.0 / math.sqrt(-lam)
            if a <= -edge or b >= edge:
                raise DomainError(f"x-domain {self.domain} must lie strictly inside ±{edge:.6g}")

    def to_dict(self) -> Dict[str, Any]:
        return {'domain': list(self.domain), 'points': self.points,
                'boundary': self.boundary.value, 'variable': self.variable.value}


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: List[GridFunction]
    grid: GridSpec
    symmetrization: str
    two_grid_error: np.ndarray = field(default_factory=lambda: np.zeros(0))
    extrapolated: np.ndarray = field(default_factory=lambda: np.zeros(0))
    continuum: List[bool] = field(default_factory=list)
    truncation_converged: bool = True

    def x_nodes(self, lam: float) -> np.ndarray:
        """Physical positions of the eigenvector samples."""
        nodes = self.eigenvectors[0].x if self.eigenvectors else self.grid.nodes()[1:-1]
        if self.grid.variable is Variable.U:
            return np.asarray(from_geodesic(lam, nodes))
        return nodes

    def rows(self) -> List[List[Any]]:
        return [[i, float(e), float(err)]
                for i, (e, err) in enumerate(zip(self.eigenvalues, self.two_grid_error))]

    def to_csv(self, path) -> None:
        write_rows_csv(path, ['index', 'eigenvalue', 'two_grid_error'], self.rows())

    def to_dict(self) -> Dict[str, Any]:
        return {'grid': self.grid.to_dict(), 'symmetrization': self.symmetrization,
                'eigenvalues': self.eigenvalues, 'two_grid_error': self.two_grid_error,
                'extrapolated': self.extrapolated, 'continuum': self.continuum,
                'truncation_converged': self.truncation_converged}


def _potential_u(qp: QuantumParams, u: np.ndarray) -> np.ndarray:
    t = np.asarray(tan_k(-qp.lam, u))
    return 0.5 * qp.mass * qp.alpha2 * t * t


def _solve_u(qp: QuantumParams, g: GridSpec, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    u = g.nodes()[1:-1]
    h = g.spacing
    weights = central_weights(2, DEFAULT_ACCURACY)
    band = symmetric_band(_potential_u(qp, u), weights, -qp.hbar ** 2 / (2 * qp.mass * h * h))
    values, vectors = eig_banded(band, lower=False, select='i', select_range=(0, k - 1))
    return u, values, vectors / math.sqrt(h)


def _solve_x(qp: QuantumParams, g: GridSpec, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = g.nodes()
    h = g.spacing
    lam = qp.lam
    p_half = np.sqrt(1.0 + lam * (0.5 * (x[1:] + x[:-1])) ** 2)
    inner = x[1:-1]
    w = np.asarray(invariant_measure_weight(lam, inner))
    c = qp.hbar ** 2 / (2 * qp.mass * h * h)
    potential = 0.5 * qp.mass * qp.alpha2 * inner * inner / (1.0 + lam * inner * inner)
    diagonal = (c * (p_half[1:] + p_half[:-1]) + w * potential) / w
    off = -c * p_half[1:-1] / np.sqrt(w[1:] * w[:-1])
    band = np.zeros((2, len(inner)))
    band[1] = diagonal
    band[0, 1:] = off
    values, vectors = eig_banded(band, lower=False, select='i', select_range=(0, k - 1))
    # back from the conjugated basis, normalized in L²(dμ)
    vectors = vectors / np.sqrt(w)[:, None] / math.sqrt(h)
    return inner, values, vectors


def _solve(qp: QuantumParams, g: GridSpec, k: int):
    g.check(qp.lam)
    interior = g.points - 2
    if k < 1 or k > interior // 10:
        raise ConfigError(f"k={k} eigenpairs need at least {10 * k + 2} grid points")
    logger.debug(f"Eigensolve on {g.points} points over {g.domain} ({g.variable.value})")
    if g.variable is Variable.U:
        return _solve_u(qp, g, k)
    return _solve_x(qp, g, k)


def _bound_mask(qp: QuantumParams, values: np.ndarray) -> np.ndarray:
    return values < continuum_threshold(qp)


def _adapt_domain(qp: QuantumParams, g: GridSpec, k: int):
    nodes, values, vectors = _solve(qp, g, k)
    while True:
        bigger = g.doubled()
        if bigger.points > MAX_POINTS:
            logger.warning(f"Domain truncation not converged at {g.domain}; "
                           f"{MAX_POINTS} point limit reached")
            return g, nodes, values, vectors, False
        logger.debug(f"Doubling domain to {bigger.domain}")
        n2, v2, vec2 = _solve(qp, bigger, k)
        mask = _bound_mask(qp, values) & _bound_mask(qp, v2)
        shift = float(np.max(np.abs(values[mask] - v2[mask]))) if np.any(mask) else 0.0
        g, nodes, values, vectors = bigger, n2, v2, vec2
        if shift < TRUNCATION_TOLERANCE:
            return g, nodes, values, vectors, True


def sturm_liouville_eigen(qp: QuantumParams, g: Optional[GridSpec] = None, k: int = 4,
                          tolerance: float = 1e-6, adapt_domain: Optional[bool] = None
                          ) -> EigenResult:
    """
    Lowest k eigenpairs of Ĥ₁. Without an explicit grid the λ ≥ 0 domain starts
    at ±12√(ħ/mβ) and doubles until the bound eigenvalues settle.
    """
    if g is None:
        g = GridSpec.default(qp)
        if adapt_domain is None:
            adapt_domain = True
    if adapt_domain is None:
        adapt_domain = False
    adapt_domain = adapt_domain and g.boundary is Boundary.NATURAL_TRUNCATION

    converged = True
    if adapt_domain:
        g, nodes, values, vectors, converged = _adapt_domain(qp, g, k)
    else:
        nodes, values, vectors = _solve(qp, g, k)
    logger.info(f"Eigensolve: {g.points} points, domain {g.domain}, k={k}")

    _, coarse_values, _ = _solve(qp, g.coarse(), k)
    delta = values - coarse_values
    error = np.abs(delta) / 15.0
    extrapolated = values + delta / 15.0
    continuum = [bool(not b) for b in _bound_mask(qp, values)]
    for i, flag in enumerate(continuum):
        if flag:
            logger.warning(f"Eigenvalue {i} ({values[i]:.8g}) lies above the continuum "
                           f"threshold and depends on the domain")
    bound_errors = [e for e, flag in zip(error, continuum) if not flag]
    if bound_errors and max(bound_errors) > tolerance:
        raise ConvergenceError(
            f"two-grid eigenvalue difference {max(bound_errors):.3g} exceeds {tolerance:.3g}",
            error=float(max(bound_errors)), tolerance=tolerance)

    # fix the sign convention: positive at the first sample above 1e-3 of the peak
    functions = []
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        lead = int(np.argmax(np.abs(column) > 1e-3 * np.max(np.abs(column))))
        if column[lead] < 0:
            column = -column
        functions.append(GridFunction(nodes, column))
    symmetrization = ('geodesic coordinate u: dμ = du, operator already symmetric'
                      if g.variable is Variable.U
                      else 'conjugation by (1+λx²)^{-1/4} of the conservative form')
    return EigenResult(eigenvalues=values, eigenvectors=functions, grid=g,
                       symmetrization=symmetrization, two_grid_error=error,
                       extrapolated=extrapolated, continuum=continuum,
                       truncation_converged=converged)


def convergence_order(qp: QuantumParams, grids: Sequence[int], level: int = 0,
                      domain: Optional[Tuple[float, float]] = None,
                      variable: Variable = Variable.U) -> float:
    """Least-squares slope of log|E_h − E_exact| against log h."""
    base = GridSpec.default(qp, variable=variable)
    if domain is not None:
        base = replace(base, domain=domain)
    exact = energy_ladder(qp.beta, qp.lam, level, qp.hbar, qp.mass)
    spacings, errors = [], []
    for points in grids:
        g = replace(base, points=points)
        _, values, _ = _solve(qp, g, level + 1)
        spacings.append(g.spacing)
        errors.append(abs(values[level] - exact))
    if min(errors) == 0:
        raise ConvergenceError("error vanished on a grid; cannot measure the order")
    slope, _ = np.polyfit(np.log(spacings), np.log(errors), 1)
    logger.info(f"Measured convergence order {slope:.3f} over {list(grids)}")
    return float(slope)


def quadrature_mu(f: Union[GridFunction, np.ndarray, Callable], lam: float, g: GridSpec) -> float:
    """Composite Simpson integral of f·(1+λx²)^{−1/2} over the nodes of g (read as x)."""
    x = g.nodes()
    if isinstance(f, GridFunction):
        values = f.values
    elif callable(f):
        values = np.asarray(f(x), dtype=float)
    else:
        values = np.asarray(f, dtype=float)
    if values.shape != x.shape:
        raise ConfigError(f"f has {values.size} samples, grid has {x.size} nodes")
    return float(simpson(values * invariant_measure_weight(lam, x), x=x))


def euler_lagrange_residual(model: Model, params, times: Sequence[float], q,
                            accuracy: int = DEFAULT_ACCURACY) -> float:
    """
    max |d/dt(∂L/∂v) − ∂L/∂q| along a sampled path, computed as
    M(q)(a − a_model) with velocities and accelerations from central differences.
    """
    t = np.asarray(times, dtype=float)
    path = np.asarray(q, dtype=float).reshape(len(t), -1)
    if path.shape[1] != model.dim:
        raise ConfigError(f"path has {path.shape[1]} coordinates, model is {model.dim}D")
    for i in range(model.dim):
        check_resolution(GridFunction(t, path[:, i]))
    h = float(t[1] - t[0])
    velocity = np.empty_like(path)
    acceleration = np.empty_like(path)
    valid = np.ones(len(t), dtype=bool)
    for i in range(model.dim):
        velocity[:, i], half1 = differentiate(path[:, i], h, 1, accuracy)
        acceleration[:, i], half2 = differentiate(path[:, i], h, 2, accuracy)
        valid &= erode(np.ones(len(t), dtype=bool), max(half1, half2))
    if not np.any(valid):
        raise GridTooCoarse("path too short for the difference stencils", samples=len(t))
    rhs = model.vector_field(StateKind.VELOCITY)
    worst = 0.0
    for row in np.flatnonzero(valid):
        qs, vs = list(path[row]), list(velocity[row])
        model_acc = rhs(params, qs + vs)[model.dim:]
        mass = model.mass(params, qs)
        diff = [a - b for a, b in zip(acceleration[row], model_acc)]
        residual = [sum(mij * dj for mij, dj in zip(mi, diff)) for mi in mass]
        worst = max(worst, max(abs(r) for r in residual))
    return worst
