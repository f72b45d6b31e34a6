"""
Registry of integrable classical models.

Each `Model` bundles the right-hand sides of its equations of motion (in
velocity form, momentum form, or both), the metric factor used by the
integrator's boundary guard, and the first integrals reported by
`simulate`. Right-hand sides work on flat lists of floats
[q1, ..., w1, ...] for speed inside the integrator loop.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import classical as cl
from .classical import ConservedQuantity, ModelParams1D, ModelParams2D, PhaseState, StateKind
from .errors import ConfigError, KindMismatchError, SingularityError
from .ktrig import sincos_scalar
from .separability import decompose_sw

logger = logging.getLogger(__name__)

Vector = List[float]
RHS = Callable[[Any, Sequence[float]], Vector]


def deformed_acceleration(lam: float, q: Sequence[float], v: Sequence[float],
                          grad: Sequence[float]) -> Vector:
    """Euler–Lagrange acceleration for T = ½[v² + λJ²]/(1+λr²) and potential U."""
    r2 = sum(c * c for c in q)
    g = 1.0 + lam * r2
    qv = sum(a * b for a, b in zip(q, v))
    v2 = sum(c * c for c in v)
    qg = sum(a * b for a, b in zip(q, grad))
    bracket = v2 - lam * qv * qv / g - qg
    return [-gi + lam * qi * bracket for qi, gi in zip(q, grad)]


def deformed_hamilton(lam: float, q: Sequence[float], p: Sequence[float],
                      grad: Sequence[float]) -> Vector:
    """Hamilton's equations for H = ½[p² + λ(q·p)²] + U."""
    s = sum(a * b for a, b in zip(q, p))
    qdot = [pi + lam * qi * s for qi, pi in zip(q, p)]
    pdot = [-lam * pi * s - gi for pi, gi in zip(p, grad)]
    return qdot + pdot


def _oscillator_gradient(lam: float, alpha: float, q: Sequence[float]) -> Vector:
    g = 1.0 + lam * sum(c * c for c in q)
    factor = alpha * alpha / (g * g)
    return [factor * c for c in q]


def _barrier_gradient(k: float, c: float) -> float:
    if k <= 0:
        return 0.0
    if c == 0.0:
        raise SingularityError("trajectory reached a barrier axis", k=k)
    return -2.0 * k / (c * c * c)


def isotonic_gradient(p: ModelParams1D, q: Sequence[float]) -> Vector:
    grad = _oscillator_gradient(p.lam, p.alpha, q)
    grad[0] += _barrier_gradient(p.k, q[0])
    return grad


def sw_gradient(p: ModelParams2D, q: Sequence[float]) -> Vector:
    grad = _oscillator_gradient(p.lam, p.alpha, q)
    grad[0] += _barrier_gradient(p.k2, q[0])
    grad[1] += _barrier_gradient(p.k3, q[1])
    return grad


def _deformed_rhs(gradient: Callable[[Any, Sequence[float]], Vector], kind: StateKind) -> RHS:
    if kind is StateKind.VELOCITY:
        def rhs(p, y):
            n = len(y) // 2
            q, v = y[:n], y[n:]
            return list(v) + deformed_acceleration(p.lam, q, v, gradient(p, q))
    else:
        def rhs(p, y):
            n = len(y) // 2
            return deformed_hamilton(p.lam, y[:n], y[n:], gradient(p, y[:n]))
    return rhs


def harmonic_rhs(p: ModelParams1D, y: Sequence[float]) -> Vector:
    return [y[1], -p.alpha * p.alpha * y[0]]


def rational_rhs(p: ModelParams2D, y: Sequence[float]) -> Vector:
    w1, w2 = p.n1 * p.omega0, p.n2 * p.omega0
    return [y[2], y[3], -w1 * w1 * y[0], -w2 * w2 * y[1]]


def curved_sw_rhs(p: ModelParams2D, y: Sequence[float]) -> Vector:
    """Geodesic-polar equations of motion for L = ½(v_ρ² + Sin_κ²(ρ)v_φ²) − U."""
    kappa = p.kappa
    rho, phi, v_rho, v_phi = y
    S, C = sincos_scalar(kappa, rho)
    c, s = math.cos(phi), math.sin(phi)
    k1 = 0.5 * p.omega0 ** 2
    T = S / C
    angular = 0.0
    angular_dphi = 0.0
    if p.k2 > 0:
        angular += p.k2 / (c * c)
        angular_dphi += 2 * p.k2 * s / (c * c * c)
    if p.k3 > 0:
        angular += p.k3 / (s * s)
        angular_dphi -= 2 * p.k3 * c / (s * s * s)
    dU_drho = 2 * k1 * T / (C * C) - 2 * C * angular / (S * S * S)
    dU_dphi = angular_dphi / (S * S)
    a_rho = S * C * v_phi * v_phi - dU_drho
    a_phi = (-dU_dphi - 2 * S * C * v_rho * v_phi) / (S * S)
    return [v_rho, v_phi, a_rho, a_phi]


def flat_metric(p, y: Sequence[float]) -> float:
    return math.inf


def deformed_metric(p, y: Sequence[float]) -> float:
    n = len(y) // 2
    return 1.0 + p.lam * sum(c * c for c in y[:n])


def curved_metric(p: ModelParams2D, y: Sequence[float]) -> float:
    # 1+λr² with r = Sin_κ(ρ) equals Cos_κ(ρ)²
    return sincos_scalar(p.kappa, y[0])[1] ** 2


def unit_mass(p, q: Sequence[float]) -> List[Vector]:
    return [[1.0 if i == j else 0.0 for j in range(len(q))] for i in range(len(q))]


def deformed_mass(p, q: Sequence[float]) -> List[Vector]:
    """∂²L/∂v∂v = I − λqqᵀ/(1+λr²)."""
    g = 1.0 + p.lam * sum(c * c for c in q)
    return [[(1.0 if i == j else 0.0) - p.lam * qi * qj / g for j, qj in enumerate(q)]
            for i, qi in enumerate(q)]


def curved_mass(p: ModelParams2D, q: Sequence[float]) -> List[Vector]:
    S = sincos_scalar(p.kappa, q[0])[0]
    return [[1.0, 0.0], [0.0, S * S]]


@dataclass(frozen=True)
class Model:
    name: str
    dim: int
    params_type: type
    rhs: Dict[StateKind, RHS]
    metric: Callable[[Any, Sequence[float]], float]
    integrals: Callable[[Any], List[ConservedQuantity]]
    description: str = ''
    coordinates: Sequence[str] = field(default=('x',))
    mass: Callable[[Any, Sequence[float]], List[Vector]] = unit_mass

    def vector_field(self, kind: StateKind) -> RHS:
        if kind not in self.rhs:
            raise KindMismatchError(f"model '{self.name}' has no {kind.value}-form equations",
                                    model=self.name, kind=kind.value)
        return self.rhs[kind]

    def velocity(self, params, q: Sequence[float], w: Sequence[float],
                 kind: StateKind) -> Vector:
        """Velocities of a state given in either kind."""
        if kind is StateKind.VELOCITY:
            return list(w)
        return self.vector_field(StateKind.MOMENTUM)(params, list(q) + list(w))[:len(q)]


def _energy_1d(p: ModelParams1D, s: PhaseState) -> float:
    ps = cl.to_momentum_state(p, s)
    return cl.hamiltonian_1d(p, ps.q[0], ps.w[0])


def _harmonic_energy(p: ModelParams1D, s: PhaseState) -> float:
    s.require(StateKind.VELOCITY)
    return 0.5 * (s.w[0] ** 2 + p.alpha ** 2 * s.q[0] ** 2)


def _component(func: Callable, index: int, velocity: bool) -> Callable:
    def evaluate(p, s):
        state = cl.to_velocity_state(p, s) if velocity else s
        return func(p, state)[index]
    return evaluate


def _momentum_component(func: Callable, index: int) -> Callable:
    def evaluate(p, s):
        return func(p, cl.to_momentum_state(p, s))[index]
    return evaluate


def _oscillator_only(p, q: Sequence[float]) -> Vector:
    return _oscillator_gradient(p.lam, p.alpha, q)


def _nonlinear_integrals(p: ModelParams2D) -> List[ConservedQuantity]:
    # barrier constants play no role in this model
    p = replace(p, k2=0.0, k3=0.0)
    quantities = [ConservedQuantity(f"I{i + 1}", _component(cl.nonlinear2d_integrals, i, True), p)
                  for i in range(3)]
    quantities.append(ConservedQuantity('H', cl.energy_2d, p))
    return quantities


def _sw_integrals(p: ModelParams2D) -> List[ConservedQuantity]:
    quantities = [ConservedQuantity(f"I{i + 1}", _component(cl.deformed_sw_integrals, i, False), p)
                  for i in range(3)]
    for i, label in enumerate(('H_px', 'H_py', 'H_J')):
        quantities.append(ConservedQuantity(label, _momentum_component(
            lambda params, s: decompose_sw(params.lam, params.alpha, params.k2, params.k3, s),
            i), p))
    quantities.append(ConservedQuantity('H', cl.energy_2d, p))
    return quantities


def _rational_integrals(p: ModelParams2D) -> List[ConservedQuantity]:
    labels = ('E_x', 'E_y', 'ReJ', 'ImJ')

    def as_momentum(func, i):
        # flat kinetic term: momenta and velocities coincide
        def evaluate(params, s):
            return func(params, PhaseState.momentum(s.q, s.w, s.t))[i]
        return evaluate

    return [ConservedQuantity(label, as_momentum(cl.rational_oscillator_integrals, i), p)
            for i, label in enumerate(labels)]


def _curved_integrals(p: ModelParams2D) -> List[ConservedQuantity]:
    def component(i):
        def evaluate(params, s):
            s.require(StateKind.VELOCITY)
            return cl.curved_sw_integrals(params.kappa, s.q[0], s.q[1], s.w[0], s.w[1], params)[i]
        return evaluate
    return [ConservedQuantity(f"I{i + 1}", component(i), p) for i in range(3)]


MODELS: Dict[str, Model] = {
    'harmonic1d': Model(
        name='harmonic1d', dim=1, params_type=ModelParams1D,
        rhs={StateKind.VELOCITY: harmonic_rhs},
        metric=flat_metric,
        integrals=lambda p: [ConservedQuantity('E', _harmonic_energy, p)],
        description='undeformed harmonic oscillator'),
    'ml1d': Model(
        name='ml1d', dim=1, params_type=ModelParams1D,
        rhs={StateKind.VELOCITY: _deformed_rhs(_oscillator_only, StateKind.VELOCITY),
             StateKind.MOMENTUM: _deformed_rhs(_oscillator_only, StateKind.MOMENTUM)},
        metric=deformed_metric,
        mass=deformed_mass,
        integrals=lambda p: [ConservedQuantity('H', _energy_1d, p)],
        description='λ-deformed nonlinear oscillator'),
    'isotonic1d': Model(
        name='isotonic1d', dim=1, params_type=ModelParams1D,
        rhs={StateKind.VELOCITY: _deformed_rhs(isotonic_gradient, StateKind.VELOCITY),
             StateKind.MOMENTUM: _deformed_rhs(isotonic_gradient, StateKind.MOMENTUM)},
        metric=deformed_metric,
        mass=deformed_mass,
        integrals=lambda p: [ConservedQuantity('H', _energy_1d, p)],
        description='λ-deformed isotonic oscillator'),
    'nonlinear2d': Model(
        name='nonlinear2d', dim=2, params_type=ModelParams2D,
        rhs={StateKind.VELOCITY: _deformed_rhs(_oscillator_only, StateKind.VELOCITY),
             StateKind.MOMENTUM: _deformed_rhs(_oscillator_only, StateKind.MOMENTUM)},
        metric=deformed_metric,
        mass=deformed_mass,
        integrals=_nonlinear_integrals,
        description='λ-deformed 2D nonlinear oscillator',
        coordinates=('x', 'y')),
    'deformed_sw': Model(
        name='deformed_sw', dim=2, params_type=ModelParams2D,
        rhs={StateKind.VELOCITY: _deformed_rhs(sw_gradient, StateKind.VELOCITY),
             StateKind.MOMENTUM: _deformed_rhs(sw_gradient, StateKind.MOMENTUM)},
        metric=deformed_metric,
        mass=deformed_mass,
        integrals=_sw_integrals,
        description='λ-deformed Smorodinsky–Winternitz system',
        coordinates=('x', 'y')),
    'rational2d': Model(
        name='rational2d', dim=2, params_type=ModelParams2D,
        rhs={StateKind.VELOCITY: rational_rhs, StateKind.MOMENTUM: rational_rhs},
        metric=flat_metric,
        integrals=_rational_integrals,
        description='harmonic oscillator with rational frequency ratio n1:n2',
        coordinates=('x', 'y')),
    'curved_sw': Model(
        name='curved_sw', dim=2, params_type=ModelParams2D,
        rhs={StateKind.VELOCITY: curved_sw_rhs},
        metric=curved_metric,
        mass=curved_mass,
        integrals=_curved_integrals,
        description='S-W system on the constant-curvature surface, κ = −λ',
        coordinates=('rho', 'phi')),
}


def get_model(name: str) -> Model:
    try:
        return MODELS[name]
    except KeyError:
        raise ConfigError(f"unknown model '{name}' (choose from {', '.join(sorted(MODELS))})",
                          model=name) from None


def build_params(model: Model, values: Dict[str, Any]):
    """Instantiate the model's parameter record from a flat dict, ignoring foreign keys."""
    fields = model.params_type.__dataclass_fields__
    kwargs = {k: v for k, v in values.items() if k in fields and v is not None}
    return model.params_type(**kwargs)


def model_integrals(model: Model, params, names: Optional[Sequence[str]] = None
                    ) -> List[ConservedQuantity]:
    quantities = model.integrals(params)
    if names:
        quantities = [q for q in quantities if q.name in names]
    return quantities
