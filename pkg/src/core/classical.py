"""
Classical λ-deformed oscillator models.

Lagrangians, Hamiltonians, exact solutions and first integrals of the 1D
nonlinear (Mathews–Lakshmanan) and isotonic oscillators and of the 2D
nonlinear, Smorodinsky–Winternitz, rational and curved S-W systems.
Evaluators work on plain floats; exact solutions also accept numpy time
arrays.

Phase states carry an explicit kind flag (velocity or momentum). Evaluators
that need a particular kind raise `KindMismatchError` instead of guessing;
`to_velocity_state`/`to_momentum_state` do the Legendre conversion.
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConfigError, DomainError, KindMismatchError, SingularityError
from .ktrig import cos_k, sin_k, tan_k

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelParams1D:
    lam: float = 0.0
    alpha: float = 1.0
    k: float = 0.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ConfigError(f"alpha must be non-negative, got {self.alpha}")
        if self.k < 0:
            raise ConfigError(f"k must be non-negative, got {self.k}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ModelParams2D:
    lam: float = 0.0
    alpha: float = 1.0
    k2: float = 0.0
    k3: float = 0.0
    omega0: float = 1.0
    n1: int = 1
    n2: int = 1

    def __post_init__(self):
        for name in ('alpha', 'k2', 'k3', 'omega0'):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)}")
        for name in ('n1', 'n2'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value}")

    @property
    def kappa(self) -> float:
        return -self.lam

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class StateKind(Enum):
    VELOCITY = "velocity"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class PhaseState:
    q: Tuple[float, ...]
    w: Tuple[float, ...]
    kind: StateKind
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'q', tuple(float(v) for v in self.q))
        object.__setattr__(self, 'w', tuple(float(v) for v in self.w))
        if len(self.q) != len(self.w) or len(self.q) not in (1, 2):
            raise ConfigError(f"positions and {self.kind.value}s must both have length 1 or 2")

    @classmethod
    def velocity(cls, q: Sequence[float], v: Sequence[float], t: float = 0.0) -> 'PhaseState':
        return cls(tuple(q), tuple(v), StateKind.VELOCITY, t)

    @classmethod
    def momentum(cls, q: Sequence[float], p: Sequence[float], t: float = 0.0) -> 'PhaseState':
        return cls(tuple(q), tuple(p), StateKind.MOMENTUM, t)

    @property
    def dim(self) -> int:
        return len(self.q)

    def require(self, kind: StateKind) -> 'PhaseState':
        if self.kind is not kind:
            raise KindMismatchError(
                f"expected a {kind.value}-kind state, got {self.kind.value}",
                expected=kind.value, got=self.kind.value)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {'q': list(self.q), 'w': list(self.w), 'kind': self.kind.value, 't': self.t}


@dataclass(frozen=True)
class ConservedQuantity:
    name: str
    func: Callable[[Any, PhaseState], float]
    params: Any

    def __call__(self, state: PhaseState) -> float:
        return self.func(self.params, state)


def metric_factor(lam: float, r2: float) -> float:
    g = 1.0 + lam * r2
    if g <= 0.0:
        raise DomainError(f"1+λr² = {g:.6g} is not positive (λ={lam}, r²={r2:.6g})",
                          lam=lam, r2=r2)
    return g


# ---------------------------------------------------------------------------
# 1D models


def ml_acceleration(p: ModelParams1D, x: float, v: float) -> float:
    g = metric_factor(p.lam, x * x)
    return (p.lam * x * v * v - p.alpha ** 2 * x) / g


def ml_frequency(p: ModelParams1D, A: float) -> float:
    g = metric_factor(p.lam, A * A)
    return p.alpha / math.sqrt(g)


def ml_exact_solution(p: ModelParams1D, A: float, phi: float, t):
    omega = ml_frequency(p, A)
    theta = omega * np.asarray(t, dtype=float) + phi
    x = A * np.sin(theta)
    v = A * omega * np.cos(theta)
    if np.ndim(t) == 0:
        return float(x), float(v)
    return x, v


def isotonic_exact_solution(p: ModelParams1D, A: float, phi: float, t):
    """Pinney–Ermakov solution of ẍ + α²x + c/x³ = 0 with c = −2k."""
    if p.k <= 0:
        raise DomainError("the isotonic solution needs k > 0", k=p.k)
    if A <= 0 or p.alpha <= 0:
        raise DomainError(f"need A > 0 and α > 0 (A={A}, α={p.alpha})", A=A, alpha=p.alpha)
    c = -2.0 * p.k
    s = np.sin(p.alpha * np.asarray(t, dtype=float) + phi)
    radicand = (p.alpha ** 2 * A ** 4 + c) * s * s - c
    if np.any(radicand <= 0):
        raise DomainError("isotonic radicand is not positive", A=A, k=p.k)
    x = np.sqrt(radicand) / (p.alpha * A)
    return float(x) if np.ndim(t) == 0 else x


def isotonic_acceleration(p: ModelParams1D, x: float, v: float = 0.0) -> float:
    """Undeformed isotonic force ẍ = −α²x + 2k/x³."""
    if x == 0.0:
        raise SingularityError("isotonic barrier at x = 0", k=p.k)
    return -p.alpha ** 2 * x + 2.0 * p.k / x ** 3


def deformed_isotonic_residual(p: ModelParams1D, omega: float, A: float) -> float:
    lam, k = p.lam, p.k
    return lam * omega ** 2 * A ** 4 - (p.alpha ** 2 - omega ** 2 - 2 * k * lam ** 2) * A ** 2 \
        + 2 * k * lam


def solve_bounded_frequency(p: ModelParams1D, A: float) -> float:
    """The ω > 0 that zeroes the bounded-motion residual for amplitude A."""
    lam, k = p.lam, p.k
    g = metric_factor(lam, A * A)
    omega2 = ((p.alpha ** 2 - 2 * k * lam ** 2) * A ** 2 - 2 * k * lam) / (A * A * g)
    if omega2 <= 0:
        raise DomainError(f"no bounded motion with amplitude A={A} (ω²={omega2:.6g})", A=A)
    return math.sqrt(omega2)


def deformed_isotonic_solution(p: ModelParams1D, omega: float, A: float, phi: float, t):
    """Bounded branch x = √((ω²A⁴−2k)sin²(ωt+φ)+2k)/(ωA); returns (x, v)."""
    theta = omega * np.asarray(t, dtype=float) + phi
    s, c = np.sin(theta), np.cos(theta)
    top = omega ** 2 * A ** 4 - 2 * p.k
    radicand = top * s * s + 2 * p.k
    if np.any(radicand <= 0):
        raise DomainError("bounded solution radicand is not positive", A=A, omega=omega)
    x = np.sqrt(radicand) / (omega * A)
    v = top * s * c / (omega * A * A * x)
    if np.ndim(t) == 0:
        return float(x), float(v)
    return x, v


def unbounded_residual(p: ModelParams1D, Omega: float, B: float) -> float:
    lam, k = p.lam, p.k
    return -lam * Omega ** 2 * B ** 4 + (p.alpha ** 2 + Omega ** 2 - 2 * k * lam ** 2) * B ** 2 \
        + 2 * k * lam


def solve_unbounded_frequency(p: ModelParams1D, B: float) -> float:
    lam, k = p.lam, p.k
    denominator = B * B * (1.0 - lam * B * B)
    if denominator == 0:
        raise DomainError("unbounded branch undefined at λB² = 1", B=B)
    omega2 = (-(p.alpha ** 2 - 2 * k * lam ** 2) * B ** 2 - 2 * k * lam) / denominator
    if omega2 <= 0:
        raise DomainError(f"no unbounded sinh branch for B={B} (Ω²={omega2:.6g})", B=B)
    return math.sqrt(omega2)


def deformed_isotonic_unbounded_solution(p: ModelParams1D, Omega: float, B: float,
                                         phi: float, t):
    theta = Omega * np.asarray(t, dtype=float) + phi
    sh, ch = np.sinh(theta), np.cosh(theta)
    top = Omega ** 2 * B ** 4 + 2 * p.k
    x = np.sqrt(top * sh * sh + 2 * p.k) / (Omega * B)
    v = top * sh * ch / (Omega * B * B * x)
    if np.ndim(t) == 0:
        return float(x), float(v)
    return x, v


def deformed_isotonic_limit_solution(p: ModelParams1D, B: float, t):
    """x = √((At+B)²+C) with A² = (α²−2kλ²)/λ and C = 2k/A²."""
    if p.lam <= 0:
        raise DomainError("the limiting branch exists only for λ > 0", lam=p.lam)
    A2 = (p.alpha ** 2 - 2 * p.k * p.lam ** 2) / p.lam
    if A2 <= 0:
        raise DomainError(f"limiting branch needs α² > 2kλ² (A²={A2:.6g})")
    A = math.sqrt(A2)
    C = 2 * p.k / A2
    u = A * np.asarray(t, dtype=float) + B
    x = np.sqrt(u * u + C)
    v = A * u / x
    if np.ndim(t) == 0:
        return float(x), float(v)
    return x, v


def hamiltonian_1d(p: ModelParams1D, x: float, px: float) -> float:
    g = metric_factor(p.lam, x * x)
    energy = 0.5 * g * px * px + 0.5 * p.alpha ** 2 * x * x / g
    if p.k > 0:
        if x == 0.0:
            raise SingularityError("isotonic barrier at x = 0", k=p.k)
        energy += p.k / (x * x)
    return energy


def lagrangian_1d(p: ModelParams1D, x: float, v: float) -> float:
    g = metric_factor(p.lam, x * x)
    value = 0.5 * (v * v - p.alpha ** 2 * x * x) / g
    if p.k > 0:
        if x == 0.0:
            raise SingularityError("isotonic barrier at x = 0", k=p.k)
        value -= p.k / (x * x)
    return value


# ---------------------------------------------------------------------------
# 2D deformed family


def legendre_2d(p: ModelParams2D, x: float, y: float, vx: float, vy: float) -> Tuple[float, float]:
    lam = p.lam
    g = metric_factor(lam, x * x + y * y)
    px = ((1 + lam * y * y) * vx - lam * x * y * vy) / g
    py = ((1 + lam * x * x) * vy - lam * x * y * vx) / g
    return px, py


def legendre_2d_inverse(p: ModelParams2D, x: float, y: float,
                        px: float, py: float) -> Tuple[float, float]:
    lam = p.lam
    metric_factor(lam, x * x + y * y)
    s = x * px + y * py
    return px + lam * x * s, py + lam * y * s


def to_momentum_state(p, s: PhaseState) -> PhaseState:
    if s.kind is StateKind.MOMENTUM:
        return s
    if s.dim == 1:
        g = metric_factor(p.lam, s.q[0] ** 2)
        return PhaseState.momentum(s.q, (s.w[0] / g,), s.t)
    return PhaseState.momentum(s.q, legendre_2d(p, *s.q, *s.w), s.t)


def to_velocity_state(p, s: PhaseState) -> PhaseState:
    if s.kind is StateKind.VELOCITY:
        return s
    if s.dim == 1:
        g = metric_factor(p.lam, s.q[0] ** 2)
        return PhaseState.velocity(s.q, (g * s.w[0],), s.t)
    return PhaseState.velocity(s.q, legendre_2d_inverse(p, *s.q, *s.w), s.t)


def _barrier(k: float, coordinate: float, axis: str) -> float:
    if k <= 0:
        return 0.0
    if coordinate == 0.0:
        raise SingularityError(f"barrier active on the {axis} = 0 axis", k=k)
    return k / (coordinate * coordinate)


def deformed_sw_potential(p: ModelParams2D, x: float, y: float) -> float:
    """V = ½α²r²/(1+λr²) + k₂/x² + k₃/y² (k₂ = k₃ = 0 gives the nonlinear oscillator)."""
    r2 = x * x + y * y
    g = metric_factor(p.lam, r2)
    return 0.5 * p.alpha ** 2 * r2 / g + _barrier(p.k2, x, 'x') + _barrier(p.k3, y, 'y')


def hamiltonian_2d(p: ModelParams2D, s: PhaseState) -> float:
    s.require(StateKind.MOMENTUM)
    (x, y), (px, py) = s.q, s.w
    qp = x * px + y * py
    kinetic = 0.5 * (px * px + py * py + p.lam * qp * qp)
    return kinetic + deformed_sw_potential(p, x, y)


def lagrangian_2d(p: ModelParams2D, x: float, y: float, vx: float, vy: float) -> float:
    g = metric_factor(p.lam, x * x + y * y)
    J = x * vy - y * vx
    kinetic = 0.5 * (vx * vx + vy * vy + p.lam * J * J) / g
    return kinetic - deformed_sw_potential(p, x, y)


def energy_2d(p: ModelParams2D, s: PhaseState) -> float:
    return hamiltonian_2d(p, to_momentum_state(p, s))


def deformed_momenta(p: ModelParams2D, s: PhaseState) -> Tuple[float, float, float]:
    """(P₁, P₂, g) with P₁ = (v_x − λJy)/√g and P₂ = (v_y + λJx)/√g."""
    s.require(StateKind.VELOCITY)
    (x, y), (vx, vy) = s.q, s.w
    g = metric_factor(p.lam, x * x + y * y)
    J = x * vy - y * vx
    root = math.sqrt(g)
    return (vx - p.lam * J * y) / root, (vy + p.lam * J * x) / root, g


def nonlinear2d_integrals(p: ModelParams2D, s: PhaseState) -> Tuple[float, float, float]:
    P1, P2, g = deformed_momenta(p, s)
    (x, y), (vx, vy) = s.q, s.w
    a2 = p.alpha ** 2
    # |K₁|² and |K₂|² with K₁ = P₁ + iαx/√g, K₂ = P₂ + iαy/√g
    I1 = P1 * P1 + a2 * x * x / g
    I2 = P2 * P2 + a2 * y * y / g
    I3 = p.alpha * (x * vy - y * vx)
    return I1, I2, I3


def deformed_sw_integrals(p: ModelParams2D, s: PhaseState) -> Tuple[float, float, float]:
    vs = to_velocity_state(p, s)
    P1, P2, g = deformed_momenta(p, vs)
    (x, y), (vx, vy) = vs.q, vs.w
    lam, a2 = p.lam, p.alpha ** 2
    J = x * vy - y * vx
    I1 = P1 * P1 + a2 * x * x / g + 2 * (1 + lam * y * y) * _barrier(p.k2, x, 'x')
    I2 = P2 * P2 + a2 * y * y / g + 2 * (1 + lam * x * x) * _barrier(p.k3, y, 'y')
    I3 = J * J + 2 * y * y * _barrier(p.k2, x, 'x') + 2 * x * x * _barrier(p.k3, y, 'y')
    return I1, I2, I3


def sw_integrals_flat(p: ModelParams2D, s: PhaseState) -> Tuple[float, float, float]:
    """Undeformed S-W integrals E_x, E_y and C = J² + 2k₂y²/x² + 2k₃x²/y²."""
    (x, y), (wx, wy) = s.q, s.w
    a2 = p.alpha ** 2
    Ex = 0.5 * (wx * wx + a2 * x * x) + _barrier(p.k2, x, 'x')
    Ey = 0.5 * (wy * wy + a2 * y * y) + _barrier(p.k3, y, 'y')
    J = x * wy - y * wx
    C = J * J + 2 * y * y * _barrier(p.k2, x, 'x') + 2 * x * x * _barrier(p.k3, y, 'y')
    return Ex, Ey, C


def _cmul(a: Tuple[float, float], b: Tuple[float, float]) -> Tuple[float, float]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _cpow(z: Tuple[float, float], n: int) -> Tuple[float, float]:
    out = (1.0, 0.0)
    for _ in range(n):
        out = _cmul(out, z)
    return out


def rational_oscillator_integrals(p: ModelParams2D,
                                  s: PhaseState) -> Tuple[float, float, float, float]:
    """E_x, E_y, Re J and Im J for J = K_x^{n₂} (K_y*)^{n₁}."""
    s.require(StateKind.MOMENTUM)
    (x, y), (px, py) = s.q, s.w
    w1, w2 = p.n1 * p.omega0, p.n2 * p.omega0
    Ex = 0.5 * (px * px + w1 * w1 * x * x)
    Ey = 0.5 * (py * py + w2 * w2 * y * y)
    Kx = (px, w1 * x)
    Ky_conj = (py, -w2 * y)
    re, im = _cmul(_cpow(Kx, p.n2), _cpow(Ky_conj, p.n1))
    return Ex, Ey, re, im


# ---------------------------------------------------------------------------
# Curved S-W in geodesic polar coordinates (ρ, φ)


def curved_sw_potential(kappa: float, rho: float, phi: float, params: ModelParams2D) -> float:
    S = sin_k(kappa, rho)
    T = tan_k(kappa, rho)
    c, s = math.cos(phi), math.sin(phi)
    value = 0.5 * params.omega0 ** 2 * T * T
    if params.k2 > 0:
        if S * c == 0.0:
            raise SingularityError("barrier active on the x = 0 axis", k=params.k2)
        value += params.k2 / (S * S * c * c)
    if params.k3 > 0:
        if S * s == 0.0:
            raise SingularityError("barrier active on the y = 0 axis", k=params.k3)
        value += params.k3 / (S * S * s * s)
    return value


def curved_sw_integrals(kappa: float, rho: float, phi: float, v_rho: float, v_phi: float,
                        params: ModelParams2D) -> Tuple[float, float, float]:
    S = sin_k(kappa, rho)
    C = cos_k(kappa, rho)
    T = tan_k(kappa, rho)
    c, s = math.cos(phi), math.sin(phi)
    w2 = params.omega0 ** 2
    P1 = c * v_rho - C * S * s * v_phi
    P2 = s * v_rho + C * S * c * v_phi
    J = S * S * v_phi
    I1 = P1 * P1 + w2 * (T * c) ** 2
    I2 = P2 * P2 + w2 * (T * s) ** 2
    I3 = J * J
    if params.k2 > 0:
        if T * c == 0.0:
            raise SingularityError("barrier active on the x = 0 axis", k=params.k2)
        I1 += 2 * params.k2 / (T * c) ** 2
        I3 += 2 * params.k2 * (s / c) ** 2
    if params.k3 > 0:
        if T * s == 0.0:
            raise SingularityError("barrier active on the y = 0 axis", k=params.k3)
        I2 += 2 * params.k3 / (T * s) ** 2
        I3 += 2 * params.k3 * (c / s) ** 2
    return I1, I2, I3


# ---------------------------------------------------------------------------
# Killing vector fields and their Lie algebra


@dataclass(frozen=True)
class VectorField:
    name: str
    components: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]
    jacobian: Optional[Callable[[np.ndarray, np.ndarray], Tuple[Tuple[Any, Any], Tuple[Any, Any]]]] = None

    def apply(self, coefficients: np.ndarray, x, y):
        """Action on the polynomial f(x, y) = Σ c_ij x^i y^j."""
        fx, fy = self.components(x, y)
        dfdx = P.polyval2d(x, y, P.polyder(coefficients, axis=0))
        dfdy = P.polyval2d(x, y, P.polyder(coefficients, axis=1))
        return fx * dfdx + fy * dfdy

    def scaled(self, factor: float, name: Optional[str] = None) -> 'VectorField':
        def components(x, y):
            fx, fy = self.components(x, y)
            return factor * fx, factor * fy
        return VectorField(name or f"{factor}*{self.name}", components)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^j = X(Y^j) − Y(X^j); second-derivative terms cancel on any test function."""
    if X.jacobian is None or Y.jacobian is None:
        raise ValueError("lie_bracket needs both Jacobians")

    def components(x, y):
        xx, xy = X.components(x, y)
        yx, yy = Y.components(x, y)
        jx, jy = X.jacobian(x, y), Y.jacobian(x, y)
        bx = xx * jy[0][0] + xy * jy[0][1] - (yx * jx[0][0] + yy * jx[0][1])
        by = xx * jy[1][0] + xy * jy[1][1] - (yx * jx[1][0] + yy * jx[1][1])
        return bx, by

    return VectorField(f"[{X.name},{Y.name}]", components)


def killing_fields(lam: float) -> Tuple[VectorField, VectorField, VectorField]:
    def root(x, y):
        g = 1.0 + lam * (x * x + y * y)
        if np.any(np.asarray(g) <= 0):
            raise DomainError("vector fields evaluated outside 1+λr² > 0", lam=lam)
        return np.sqrt(g)

    def x1(x, y):
        return root(x, y), 0.0 * x

    def x1_jac(x, y):
        r = root(x, y)
        return (lam * x / r, lam * y / r), (0.0 * x, 0.0 * x)

    def x2(x, y):
        return 0.0 * x, root(x, y)

    def x2_jac(x, y):
        r = root(x, y)
        return (0.0 * x, 0.0 * x), (lam * x / r, lam * y / r)

    def xj(x, y):
        return -y, x + 0.0 * y

    def xj_jac(x, y):
        zero = 0.0 * x
        return (zero, zero - 1.0), (zero + 1.0, zero)

    return (VectorField('X1', x1, x1_jac), VectorField('X2', x2, x2_jac),
            VectorField('XJ', xj, xj_jac))


def lie_algebra_residuals(lam: float, x: np.ndarray, y: np.ndarray,
                          coefficients: np.ndarray) -> Dict[str, float]:
    """Max |([A,B] − expected) f| over the sample points for the three relations."""
    X1, X2, XJ = killing_fields(lam)
    relations = {
        '[X1,X2]=lam*XJ': (lie_bracket(X1, X2), XJ.scaled(lam)),
        '[X1,XJ]=X2': (lie_bracket(X1, XJ), X2),
        '[X2,XJ]=-X1': (lie_bracket(X2, XJ), X1.scaled(-1.0)),
    }
    residuals = {}
    for label, (bracket, expected) in relations.items():
        diff = bracket.apply(coefficients, x, y) - expected.apply(coefficients, x, y)
        residuals[label] = float(np.max(np.abs(diff)))
    logger.debug(f"Lie algebra residuals at λ={lam}: {residuals}")
    return residuals
