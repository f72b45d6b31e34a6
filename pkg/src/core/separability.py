"""
Hamilton–Jacobi separability of the deformed oscillator family.

Three orthogonal charts separate the λ-oscillator and the deformed S-W
system: (z_x, y), (x, z_y) and polar (r, φ). In each chart the potential
energy is written as ½α²V with V of separable form, and two quadratic
integrals I₁, I₂ with H = (I₁ + I₂)/2 follow. Two further charts relate the
flat-plane description to the constant-curvature one: geodesic polar
(ρ, φ) with r = Sin_κ(ρ) and gnomonic coordinates with r′ = Tan_κ(ρ).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Tuple

from .classical import ModelParams2D, PhaseState, StateKind, curved_sw_potential, \
    deformed_sw_potential, lagrangian_2d, metric_factor
from .errors import ConfigError, DomainError, OriginError, SingularityError
from .ktrig import sin_k, cos_k, to_geodesic

logger = logging.getLogger(__name__)


class ChartTag(Enum):
    ZX_Y = "zx_y"
    X_ZY = "x_zy"
    POLAR = "polar"
    CARTESIAN = "cartesian"
    GEODESIC_POLAR = "geodesic_polar"
    GNOMONIC = "gnomonic"


SEPARABLE_CHARTS = (ChartTag.ZX_Y, ChartTag.X_ZY, ChartTag.POLAR)


@dataclass(frozen=True)
class Chart:
    tag: ChartTag
    lam: float = 0.0

    def __post_init__(self):
        if isinstance(self.tag, str):
            object.__setattr__(self, 'tag', ChartTag(self.tag))

    @property
    def kappa(self) -> float:
        return -self.lam


def _polar(x: float, y: float) -> Tuple[float, float]:
    r = math.hypot(x, y)
    if r == 0.0:
        raise OriginError("polar angle undefined at the origin")
    phi = math.atan2(y, x)
    if phi == -math.pi:
        phi = math.pi
    return r, phi


def chart_forward(c: Chart, x: float, y: float) -> Tuple[float, float]:
    lam = c.lam
    if c.tag is ChartTag.CARTESIAN:
        return x, y
    if c.tag is ChartTag.ZX_Y:
        return x / math.sqrt(metric_factor(lam, y * y)), y
    if c.tag is ChartTag.X_ZY:
        return x, y / math.sqrt(metric_factor(lam, x * x))
    if c.tag is ChartTag.POLAR:
        return _polar(x, y)
    if c.tag is ChartTag.GEODESIC_POLAR:
        r, phi = _polar(x, y)
        return to_geodesic(lam, r), phi
    g = metric_factor(lam, x * x + y * y)
    root = math.sqrt(g)
    return x / root, y / root


def chart_inverse(c: Chart, u1: float, u2: float) -> Tuple[float, float]:
    lam = c.lam
    if c.tag is ChartTag.CARTESIAN:
        return u1, u2
    if c.tag is ChartTag.ZX_Y:
        return u1 * math.sqrt(metric_factor(lam, u2 * u2)), u2
    if c.tag is ChartTag.X_ZY:
        return u1, u2 * math.sqrt(metric_factor(lam, u1 * u1))
    if c.tag is ChartTag.POLAR:
        return u1 * math.cos(u2), u1 * math.sin(u2)
    if c.tag is ChartTag.GEODESIC_POLAR:
        r = sin_k(c.kappa, u1)
        if lam < 0 and cos_k(c.kappa, u1) <= 0:
            raise DomainError(f"ρ={u1} lies beyond the chart's hemisphere", rho=u1)
        return r * math.cos(u2), r * math.sin(u2)
    # gnomonic: 1+κr′² must stay positive
    scale = 1.0 + c.kappa * (u1 * u1 + u2 * u2)
    if scale <= 0:
        raise DomainError(f"gnomonic point outside 1+κr′² > 0 (κ={c.kappa})", kappa=c.kappa)
    root = math.sqrt(scale)
    return u1 / root, u2 / root


def chart_velocity(c: Chart, x: float, y: float, vx: float, vy: float) -> Tuple[float, float]:
    """Time derivatives of the chart coordinates along a Cartesian velocity."""
    lam = c.lam
    if c.tag is ChartTag.CARTESIAN:
        return vx, vy
    if c.tag is ChartTag.ZX_Y:
        s = math.sqrt(metric_factor(lam, y * y))
        return vx / s - x * lam * y * vy / s ** 3, vy
    if c.tag is ChartTag.X_ZY:
        s = math.sqrt(metric_factor(lam, x * x))
        return vx, vy / s - y * lam * x * vx / s ** 3
    r, _ = _polar(x, y)
    r_dot = (x * vx + y * vy) / r
    phi_dot = (x * vy - y * vx) / (r * r)
    if c.tag is ChartTag.POLAR:
        return r_dot, phi_dot
    g = metric_factor(lam, r * r)
    if c.tag is ChartTag.GEODESIC_POLAR:
        return r_dot / math.sqrt(g), phi_dot
    f = g ** -0.5
    df = -lam * (x * vx + y * vy) * g ** -1.5
    return f * vx + x * df, f * vy + y * df


@dataclass(frozen=True)
class SeparablePotential:
    """
    Potential energy ½α²V with V assembled per chart:
    zx_y: W1(z_x)/(1+λy²) + W2(y); x_zy: W1(x) + W2(z_y)/(1+λx²);
    polar: W1(r) + W2(φ)/r² (W1 = F, W2 = G).
    """
    chart: Chart
    W1: Callable[[float], float]
    W2: Callable[[float], float]

    def evaluate(self, x: float, y: float) -> float:
        lam = self.chart.lam
        u1, u2 = chart_forward(self.chart, x, y)
        if self.chart.tag is ChartTag.ZX_Y:
            return self.W1(u1) / (1 + lam * y * y) + self.W2(u2)
        if self.chart.tag is ChartTag.X_ZY:
            return self.W1(u1) + self.W2(u2) / (1 + lam * x * x)
        if self.chart.tag is ChartTag.POLAR:
            return self.W1(u1) + self.W2(u2) / (u1 * u1)
        raise ConfigError(f"chart {self.chart.tag.value} has no separable template")


def _inverse_square(weight: float) -> Callable[[float], float]:
    def term(u: float) -> float:
        if weight <= 0:
            return 0.0
        if u == 0.0:
            raise SingularityError("barrier evaluated on its axis")
        return weight / (u * u)
    return term


def oscillator_potential(chart: Chart) -> SeparablePotential:
    lam = chart.lam

    def deformed_square(u: float) -> float:
        return u * u / (1 + lam * u * u)

    if chart.tag in (ChartTag.ZX_Y, ChartTag.X_ZY):
        return SeparablePotential(chart, deformed_square, deformed_square)
    if chart.tag is ChartTag.POLAR:
        return SeparablePotential(chart, deformed_square, lambda phi: 0.0)
    raise ConfigError(f"chart {chart.tag.value} does not separate the oscillator")


def sw_separable_potential(chart: Chart, alpha: float, k2: float, k3: float) -> SeparablePotential:
    if alpha <= 0:
        raise ConfigError("the separable S-W form needs α > 0")
    base = oscillator_potential(chart)
    bx = _inverse_square(2 * k2 / alpha ** 2)
    by = _inverse_square(2 * k3 / alpha ** 2)
    if chart.tag is ChartTag.POLAR:
        def angular(phi: float) -> float:
            c, s = math.cos(phi), math.sin(phi)
            return bx(c) + by(s)
        return SeparablePotential(chart, base.W1, angular)
    return SeparablePotential(chart, lambda u: base.W1(u) + bx(u),
                              lambda u: base.W2(u) + by(u))


def chart_integrals(c: Chart, sp: SeparablePotential, s: PhaseState,
                    alpha: float) -> Tuple[float, float]:
    s.require(StateKind.MOMENTUM)
    (x, y), (px, py) = s.q, s.w
    lam = c.lam
    a2 = alpha * alpha
    g = metric_factor(lam, x * x + y * y)
    J = x * py - y * px
    u1, u2 = chart_forward(c, x, y)
    if c.tag is ChartTag.ZX_Y:
        w1 = sp.W1(u1)
        I1 = g * px * px + a2 * w1
        I2 = g * py * py - lam * J * J + a2 * (sp.W2(u2) - lam * y * y * w1 / (1 + lam * y * y))
        return I1, I2
    if c.tag is ChartTag.X_ZY:
        w2 = sp.W2(u2)
        I1 = g * px * px - lam * J * J + a2 * (sp.W1(u1) - lam * x * x * w2 / (1 + lam * x * x))
        I2 = g * py * py + a2 * w2
        return I1, I2
    if c.tag is ChartTag.POLAR:
        r = u1
        p_r = (x * px + y * py) / r
        factor = (1 - r * r) / (r * r)
        G = sp.W2(u2)
        I1 = g * p_r * p_r + factor * J * J + a2 * (sp.W1(r) + factor * G)
        I2 = J * J + a2 * G
        return I1, I2
    raise ConfigError(f"chart {c.tag.value} carries no quadratic integrals")


def decompose_oscillator(lam: float, alpha: float, s: PhaseState) -> Tuple[float, float, float]:
    s.require(StateKind.MOMENTUM)
    (x, y), (px, py) = s.q, s.w
    g = metric_factor(lam, x * x + y * y)
    a2 = alpha * alpha
    H1 = 0.5 * (g * px * px + a2 * x * x / g)
    H2 = 0.5 * (g * py * py + a2 * y * y / g)
    H3 = 0.5 * (x * py - y * px) ** 2
    return H1, H2, H3


def decompose_sw(lam: float, alpha: float, k2: float, k3: float,
                 s: PhaseState) -> Tuple[float, float, float]:
    H1, H2, H3 = decompose_oscillator(lam, alpha, s)
    x, y = s.q
    bx = _inverse_square(k2)(x)
    by = _inverse_square(k3)(y)
    H_px = H1 + (1 + lam * y * y) * bx
    H_py = H2 + (1 + lam * x * x) * by
    H_J = H3 + y * y * bx + x * x * by
    return H_px, H_py, H_J


def sw_potential_three_forms(lam: float, alpha: float, k2: float, k3: float,
                             x: float, y: float) -> Tuple[float, float, float]:
    values = []
    for tag in SEPARABLE_CHARTS:
        sp = sw_separable_potential(Chart(tag, lam), alpha, k2, k3)
        values.append(0.5 * alpha * alpha * sp.evaluate(x, y))
    return tuple(values)


def oscillator_three_forms(lam: float, x: float, y: float) -> Tuple[float, float, float]:
    """r²/(1+λr²) evaluated through each separable chart."""
    return tuple(oscillator_potential(Chart(tag, lam)).evaluate(x, y) for tag in SEPARABLE_CHARTS)


def higgs_lagrangian(kappa: float, x: float, y: float, vx: float, vy: float,
                     alpha: float) -> float:
    """Oscillator Lagrangian in gnomonic coordinates: ½[v² + κJ²]/(1+κr′²)² − ½α²r′²."""
    r2 = x * x + y * y
    scale = 1.0 + kappa * r2
    if scale <= 0:
        raise DomainError(f"1+κr′² = {scale:.6g} is not positive (κ={kappa})", kappa=kappa)
    J = x * vy - y * vx
    return 0.5 * (vx * vx + vy * vy + kappa * J * J) / (scale * scale) - 0.5 * alpha ** 2 * r2


def geodesic_polar_lagrangian(kappa: float, rho: float, phi: float, v_rho: float,
                              v_phi: float, omega0: float, k2: float = 0.0,
                              k3: float = 0.0) -> float:
    params = ModelParams2D(lam=-kappa, alpha=omega0, k2=k2, k3=k3, omega0=omega0)
    S = sin_k(kappa, rho)
    kinetic = 0.5 * (v_rho * v_rho + S * S * v_phi * v_phi)
    return kinetic - curved_sw_potential(kappa, rho, phi, params)


def geodesic_polar_to_cartesian(kappa: float, rho: float, phi: float, v_rho: float,
                                v_phi: float) -> Tuple[float, float, float, float]:
    """(x, y, v_x, v_y) in the λ-plane, r = Sin_κ(ρ)."""
    r = sin_k(kappa, rho)
    r_dot = cos_k(kappa, rho) * v_rho
    c, s = math.cos(phi), math.sin(phi)
    return r * c, r * s, r_dot * c - r * s * v_phi, r_dot * s + r * c * v_phi


def geodesic_polar_to_gnomonic(kappa: float, rho: float, phi: float, v_rho: float,
                               v_phi: float) -> Tuple[float, float, float, float]:
    """(x′, y′, v′_x, v′_y) with r′ = Tan_κ(ρ)."""
    C = cos_k(kappa, rho)
    if C <= 0:
        raise DomainError(f"Tan_κ(ρ) undefined past the pole (κ={kappa}, ρ={rho})")
    r = sin_k(kappa, rho) / C
    r_dot = v_rho / (C * C)
    c, s = math.cos(phi), math.sin(phi)
    return r * c, r * s, r_dot * c - r * s * v_phi, r_dot * s + r * c * v_phi


def matched_lagrangians(kappa: float, rho: float, phi: float, v_rho: float, v_phi: float,
                        omega0: float) -> Dict[str, float]:
    """The same motion seen in geodesic polar, λ-plane and gnomonic coordinates."""
    params = ModelParams2D(lam=-kappa, alpha=omega0, omega0=omega0)
    x, y, vx, vy = geodesic_polar_to_cartesian(kappa, rho, phi, v_rho, v_phi)
    xg, yg, vxg, vyg = geodesic_polar_to_gnomonic(kappa, rho, phi, v_rho, v_phi)
    return {
        'L_kappa': geodesic_polar_lagrangian(kappa, rho, phi, v_rho, v_phi, omega0),
        'L_lambda': lagrangian_2d(params, x, y, vx, vy),
        'L_higgs': higgs_lagrangian(kappa, xg, yg, vxg, vyg, omega0),
    }


def chart_report(c: Chart, x: float, y: float, alpha: float = 1.0, k2: float = 0.0,
                 k3: float = 0.0) -> Dict[str, object]:
    """Forward/inverse coordinates of a point and the three potential forms."""
    u1, u2 = chart_forward(c, x, y)
    back = chart_inverse(c, u1, u2)
    params = ModelParams2D(lam=c.lam, alpha=alpha, k2=k2, k3=k3)
    report: Dict[str, object] = {
        'chart': c.tag.value,
        'lambda': c.lam,
        'point': [x, y],
        'coordinates': [u1, u2],
        'round_trip': list(back),
        'round_trip_error': max(abs(back[0] - x), abs(back[1] - y)),
        'potential': deformed_sw_potential(params, x, y),
    }
    if alpha > 0:
        report['potential_forms'] = dict(zip(
            [t.value for t in SEPARABLE_CHARTS],
            sw_potential_three_forms(c.lam, alpha, k2, k3, x, y)))
    logger.debug(f"Chart report: {report}")
    return report
