"""
Time integration of the classical models.

Explicit Runge–Kutta methods defined by Butcher tableaux: classical RK4
with a fixed step, and the embedded Dormand–Prince 5(4) pair with step-size
control for barrier models whose forces stiffen near the axes.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classical import ConservedQuantity, PhaseState, StateKind
from .errors import ConfigError, DomainError, DomainExitError, InsufficientCyclesError, \
    MaxStepsExceeded
from .models import Model
from ..utils.export import write_numeric_csv

logger = logging.getLogger(__name__)

# integration stops when 1+λr² drops below this
GUARD_BAND = 1e-6


class IntegrationMethod(Enum):
    RK4 = "rk4"
    RK45 = "rk45"


@dataclass(frozen=True)
class ButcherTableau:
    a: Tuple[Tuple[float, ...], ...]
    b: Tuple[float, ...]
    c: Tuple[float, ...]
    b_low: Optional[Tuple[float, ...]] = None
    order: int = 4


RK4_TABLEAU = ButcherTableau(
    a=((),
       (0.5,),
       (0.0, 0.5),
       (0.0, 0.0, 1.0)),
    b=(1 / 6, 1 / 3, 1 / 3, 1 / 6),
    c=(0.0, 0.5, 0.5, 1.0),
)

DOPRI5_TABLEAU = ButcherTableau(
    a=((),
       (1 / 5,),
       (3 / 40, 9 / 40),
       (44 / 45, -56 / 15, 32 / 9),
       (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
       (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
       (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)),
    b=(35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0),
    c=(0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0),
    b_low=(5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40),
    order=5,
)


@dataclass(frozen=True)
class IntegratorConfig:
    method: IntegrationMethod = IntegrationMethod.RK4
    t_end: float = 10.0
    dt: Optional[float] = 1e-3
    tol: Optional[float] = None
    max_steps: int = 10_000_000
    sample_every: int = 1

    def __post_init__(self):
        if isinstance(self.method, str):
            object.__setattr__(self, 'method', IntegrationMethod(self.method))
        if self.t_end <= 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.method is IntegrationMethod.RK4:
            if self.dt is None or self.dt <= 0 or self.tol is not None:
                raise ConfigError("rk4 needs a positive dt and no tol")
        else:
            if self.tol is None or self.tol <= 0 or self.dt is not None:
                raise ConfigError("rk45 needs a positive tol and no dt")
        if self.max_steps < 1 or self.sample_every < 1:
            raise ConfigError("max_steps and sample_every must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return {'method': self.method.value, 't_end': self.t_end, 'dt': self.dt,
                'tol': self.tol, 'max_steps': self.max_steps, 'sample_every': self.sample_every}


@dataclass
class IntegrationStats:
    steps: int = 0
    rejected: int = 0
    evaluations: int = 0


@dataclass
class Trajectory:
    times: np.ndarray
    q: np.ndarray
    w: np.ndarray
    kind: StateKind
    model: Model
    params: Any
    stats: IntegrationStats = field(default_factory=IntegrationStats)

    def __len__(self) -> int:
        return len(self.times)

    def state(self, index: int) -> PhaseState:
        return PhaseState(tuple(self.q[index]), tuple(self.w[index]), self.kind,
                          float(self.times[index]))

    @property
    def states(self) -> List[PhaseState]:
        return [self.state(i) for i in range(len(self.times))]

    @property
    def final_state(self) -> PhaseState:
        return self.state(len(self.times) - 1)

    def velocities(self) -> np.ndarray:
        if self.kind is StateKind.VELOCITY:
            return self.w
        return np.array([self.model.velocity(self.params, q, w, self.kind)
                         for q, w in zip(self.q, self.w)])

    def header(self) -> List[str]:
        n = self.q.shape[1]
        prefix = 'v' if self.kind is StateKind.VELOCITY else 'p'
        return ['t'] + [f"q{i + 1}" for i in range(n)] + [f"{prefix}{i + 1}" for i in range(n)]

    def to_csv(self, path) -> None:
        columns = [self.times] + [self.q[:, i] for i in range(self.q.shape[1])] \
            + [self.w[:, i] for i in range(self.w.shape[1])]
        write_numeric_csv(path, self.header(), columns)


def _stage_values(f, params, y: List[float], h: float, tableau: ButcherTableau) -> List[List[float]]:
    stages: List[List[float]] = []
    n = len(y)
    for row in tableau.a:
        if row:
            point = [y[i] + h * sum(aij * stages[j][i] for j, aij in enumerate(row) if aij)
                     for i in range(n)]
        else:
            point = y
        stages.append(f(params, point))
    return stages


def erk_step(f, params, y: List[float], h: float,
             tableau: ButcherTableau = RK4_TABLEAU) -> Tuple[List[float], Optional[List[float]]]:
    """One explicit Runge–Kutta step; also returns the embedded error estimate if any."""
    stages = _stage_values(f, params, y, h, tableau)
    n = len(y)
    new = [y[i] + h * sum(bj * stages[j][i] for j, bj in enumerate(tableau.b) if bj)
           for i in range(n)]
    if tableau.b_low is None:
        return new, None
    diff = [b - bl for b, bl in zip(tableau.b, tableau.b_low)]
    error = [h * sum(dj * stages[j][i] for j, dj in enumerate(diff) if dj) for i in range(n)]
    return new, error


def _guard(model: Model, params, y: List[float], t: float) -> None:
    g = model.metric(params, y)
    if not all(math.isfinite(v) for v in y):
        raise DomainExitError(f"state became non-finite at t={t:.6g}", t=t)
    if g < GUARD_BAND:
        raise DomainExitError(
            f"trajectory entered the boundary guard band at t={t:.6g} (1+λr² = {g:.3g})",
            t=t, metric=g)


def integrate(model: Model, params, s0: PhaseState, cfg: IntegratorConfig) -> Trajectory:
    if s0.dim != model.dim:
        raise ConfigError(f"model '{model.name}' is {model.dim}D, state is {s0.dim}D")
    f = model.vector_field(s0.kind)
    y = list(s0.q) + list(s0.w)
    if model.metric(params, y) <= 0:
        raise DomainError("initial state lies outside the 1+λr² > 0 region",
                          model=model.name)
    _guard(model, params, y, s0.t)

    logger.info(f"Integrating {model.name} with {cfg.method.value} up to t={cfg.t_end}")
    if cfg.method is IntegrationMethod.RK4:
        times, samples, stats = _run_fixed(f, model, params, y, s0.t, cfg)
    else:
        times, samples, stats = _run_adaptive(f, model, params, y, s0.t, cfg)
    logger.info(f"Finished {model.name}: {stats.steps} steps, {stats.rejected} rejected")

    data = np.array(samples)
    n = s0.dim
    return Trajectory(times=np.array(times), q=data[:, :n], w=data[:, n:], kind=s0.kind,
                      model=model, params=params, stats=stats)


def _run_fixed(f, model, params, y, t0, cfg):
    steps = int(math.ceil(cfg.t_end / cfg.dt - 1e-9))
    if steps > cfg.max_steps:
        raise MaxStepsExceeded(f"{steps} steps needed, limit is {cfg.max_steps}",
                               steps=steps, max_steps=cfg.max_steps)
    stats = IntegrationStats()
    times, samples = [t0], [list(y)]
    t = t0
    for k in range(1, steps + 1):
        h = min(cfg.dt, t0 + cfg.t_end - t) if k == steps else cfg.dt
        y, _ = erk_step(f, params, y, h, RK4_TABLEAU)
        t = t0 + k * cfg.dt if k < steps else t0 + cfg.t_end
        stats.steps += 1
        stats.evaluations += 4
        _guard(model, params, y, t)
        if k % cfg.sample_every == 0 or k == steps:
            times.append(t)
            samples.append(y)
    return times, samples, stats


def _run_adaptive(f, model, params, y, t0, cfg, safety: float = 0.9):
    stats = IntegrationStats()
    times, samples = [t0], [list(y)]
    t_final = t0 + cfg.t_end
    t = t0
    h = min(cfg.t_end / 100.0, 1e-2)
    accepted = 0
    while t < t_final:
        if stats.steps + stats.rejected >= cfg.max_steps:
            raise MaxStepsExceeded(f"adaptive integration exceeded {cfg.max_steps} attempts",
                                   t=t, max_steps=cfg.max_steps)
        h = min(h, t_final - t)
        candidate, error = erk_step(f, params, y, h, DOPRI5_TABLEAU)
        stats.evaluations += 7
        scale = [cfg.tol * (1.0 + max(abs(a), abs(b))) for a, b in zip(y, candidate)]
        norm = math.sqrt(sum((e / s) ** 2 for e, s in zip(error, scale)) / len(y))
        if norm <= 1.0:
            t += h
            y = candidate
            stats.steps += 1
            accepted += 1
            _guard(model, params, y, t)
            if accepted % cfg.sample_every == 0 or t >= t_final:
                times.append(t)
                samples.append(y)
        else:
            stats.rejected += 1
        factor = 5.0 if norm == 0 else min(5.0, max(0.2, safety * norm ** (-1 / 5)))
        h *= factor
    return times, samples, stats


def measure_period(traj: Trajectory, index: int = 0) -> float:
    """Mean period from linearly interpolated zero crossings of velocity component `index`."""
    v = traj.velocities()[:, index]
    t = traj.times
    crossings = []
    for k in range(len(v) - 1):
        a, b = v[k], v[k + 1]
        if a == 0.0 and k > 0 and v[k - 1] * b < 0:
            crossings.append(t[k])
        elif a * b < 0:
            crossings.append(t[k] - a * (t[k + 1] - t[k]) / (b - a))
    if len(crossings) < 3:
        raise InsufficientCyclesError(
            f"found {len(crossings)} velocity sign changes, need at least 3",
            crossings=len(crossings))
    half_cycles = len(crossings) - 1
    return 2.0 * (crossings[-1] - crossings[0]) / half_cycles


def conservation_drift(traj: Trajectory, q: ConservedQuantity, stride: int = 1) -> float:
    states = traj.states[::stride]
    if len(states) == 0:
        return 0.0
    reference = q(states[0])
    scale = max(abs(reference), 1.0)
    return max(abs(q(s) - reference) for s in states) / scale


def sampled_trajectory(model: Model, params, times: Sequence[float], q: np.ndarray,
                       w: np.ndarray, kind: StateKind = StateKind.VELOCITY) -> Trajectory:
    """Wrap an analytically sampled path so the drift and period tools apply to it."""
    q = np.asarray(q, dtype=float).reshape(len(times), -1)
    w = np.asarray(w, dtype=float).reshape(len(times), -1)
    return Trajectory(times=np.asarray(times, dtype=float), q=q, w=w, kind=kind,
                      model=model, params=params)
