"""
Invariant suite behind `lambdaosc verify`.

Each check measures one non-negative discrepancy (a residual, a drift, a
count of mismatches) and passes when it does not exceed its tolerance.
Checks are plain module-level functions so the process pool can pickle
them by id.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from numpy.polynomial import hermite
from scipy.special import gammaln

from ..core import classical as cl
from ..core import ktrig, oracle, quantum1d as q1, quantum2d as q2, separability as sep
from ..core.classical import ModelParams1D, ModelParams2D, PhaseState
from ..core.errors import ConfigError
from ..core.dynamics import IntegratorConfig, conservation_drift, integrate, measure_period
from ..core.models import get_model, model_integrals
from ..core.parallel_sweep import ParallelSweep
from ..utils.finite_difference import GridFunction, GridFunction2D

logger = logging.getLogger(__name__)

GROUPS = ('ktrig', 'classical', 'dynamics', 'separability', 'quantum1d', 'quantum2d', 'oracle')


@dataclass(frozen=True)
class Check:
    check_id: str
    group: str
    measure: Callable[[], float]
    tolerance: float
    description: str


@dataclass
class CheckResult:
    check_id: str
    group: str
    measured: float
    tolerance: float
    passed: bool
    description: str = ''
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# ---------------------------------------------------------------------------
# ktrig

KAPPAS = np.linspace(-4.0, 4.0, 17)
XS = np.linspace(-2.0, 2.0, 41)


def ktrig_fundamental() -> float:
    worst = 0.0
    for kappa in KAPPAS:
        C, S = ktrig.cos_k(kappa, XS), ktrig.sin_k(kappa, XS)
        worst = max(worst, float(np.max(np.abs(C * C + kappa * S * S - 1) / np.maximum(1, C * C))))
    return worst


def ktrig_double_angle() -> float:
    worst = 0.0
    for kappa in KAPPAS:
        C, S = ktrig.cos_k(kappa, XS), ktrig.sin_k(kappa, XS)
        scale = np.maximum(1, C * C)
        worst = max(worst,
                    float(np.max(np.abs(ktrig.sin_k(kappa, 2 * XS) - 2 * S * C) / scale)),
                    float(np.max(np.abs(ktrig.cos_k(kappa, 2 * XS) - (C * C - kappa * S * S))
                                 / scale)))
    return worst


def ktrig_derivatives(h: float = 1e-3) -> float:
    weights = (1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12)
    worst = 0.0
    for kappa in KAPPAS:
        dS = sum(w * ktrig.sin_k(kappa, XS + (j - 2) * h) for j, w in enumerate(weights)) / h
        dC = sum(w * ktrig.cos_k(kappa, XS + (j - 2) * h) for j, w in enumerate(weights)) / h
        C, S = ktrig.cos_k(kappa, XS), ktrig.sin_k(kappa, XS)
        scale = np.maximum(1, np.abs(C))
        worst = max(worst, float(np.max(np.abs(dS - C) / scale)),
                    float(np.max(np.abs(dC + kappa * S) / scale)))
    return worst


def ktrig_continuity() -> float:
    worst = 0.0
    for kappa in (-1e-10, 1e-10):
        for func in (ktrig.cos_k, ktrig.sin_k, ktrig.tan_k):
            worst = max(worst, float(np.max(np.abs(func(kappa, XS) - func(0.0, XS)))))
    return worst


def ktrig_geodesic_round_trip() -> float:
    worst = 0.0
    for lam in (-0.9, -0.1, 0.0, 0.1, 2.0):
        x = np.linspace(-0.99, 0.99, 51) / math.sqrt(abs(lam)) if lam < 0 else XS
        back = ktrig.from_geodesic(lam, ktrig.to_geodesic(lam, x))
        worst = max(worst, float(np.max(np.abs(back - x))))
    return worst


# ---------------------------------------------------------------------------
# classical

FREQUENCY_CASES = ((-0.5, 0.9, 1.0), (0.3, 1.0, 1.0), (2.0, 0.5, 1.0))


def classical_frequency_amplitude(dt: float = 1e-4, periods: float = 3.2) -> float:
    model = get_model('ml1d')
    worst = 0.0
    for lam, A, alpha in FREQUENCY_CASES:
        p = ModelParams1D(lam=lam, alpha=alpha)
        expected = 2 * math.pi / cl.ml_frequency(p, A)
        cfg = IntegratorConfig(method='rk4', t_end=periods * expected, dt=dt)
        traj = integrate(model, p, PhaseState.velocity([A], [0.0]), cfg)
        worst = max(worst, abs(measure_period(traj) - expected) / expected)
    return worst


def classical_exact_solutions() -> float:
    t = np.arange(0.0, 20.0, 1e-3)
    p = ModelParams1D(lam=0.3, alpha=1.0)
    x, _ = cl.ml_exact_solution(p, 1.0, 0.2, t)
    worst = oracle.euler_lagrange_residual(get_model('ml1d'), p, t, x)
    iso = ModelParams1D(lam=0.2, alpha=1.0, k=0.05)
    A = 0.8
    omega = cl.solve_bounded_frequency(iso, A)
    x, _ = cl.deformed_isotonic_solution(iso, omega, A, 0.0, t)
    return max(worst, oracle.euler_lagrange_residual(get_model('isotonic1d'), iso, t, x))


def classical_lie_algebra() -> float:
    rng = np.random.default_rng(7)
    x = rng.uniform(-0.8, 0.8, 40)
    y = rng.uniform(-0.8, 0.8, 40)
    coefficients = rng.normal(size=(4, 4))
    worst = 0.0
    for lam in (-0.5, 0.0, 0.7):
        worst = max(worst, max(cl.lie_algebra_residuals(lam, x, y, coefficients).values()))
    return worst


def classical_legendre_round_trip() -> float:
    worst = 0.0
    for lam in (-0.3, 0.0, 0.8):
        p = ModelParams2D(lam=lam)
        s = PhaseState.velocity([0.6, -0.4], [0.3, 0.9])
        back = cl.to_velocity_state(p, cl.to_momentum_state(p, s))
        worst = max(worst, max(abs(a - b) for a, b in zip(back.w, s.w)))
    return worst


# ---------------------------------------------------------------------------
# dynamics

DRIFT_LAMBDAS = (-0.2, 0.0, 0.5)


def _drift_run(model_name: str, lam: float, names: Sequence[str], periods: int = 50,
               dt: float = 1e-3) -> float:
    model = get_model(model_name)
    k = 0.05 if model_name == 'deformed_sw' else 0.0
    p = ModelParams2D(lam=lam, alpha=1.0, k2=k, k3=k)
    s0 = PhaseState.velocity([0.7, 0.5], [0.2, -0.3])
    cfg = IntegratorConfig(method='rk4', t_end=periods * 2 * math.pi, dt=dt, sample_every=100)
    traj = integrate(model, p, s0, cfg)
    return max(conservation_drift(traj, q) for q in model_integrals(model, p, names))


def dynamics_superintegrable_drift(periods: int = 50) -> float:
    return max(_drift_run(name, lam, ('I1', 'I2', 'I3'), periods)
               for name in ('nonlinear2d', 'deformed_sw') for lam in DRIFT_LAMBDAS)


def dynamics_decomposition_drift(periods: int = 50) -> float:
    return max(_drift_run('deformed_sw', lam, ('H_px', 'H_py', 'H_J'), periods)
               for lam in DRIFT_LAMBDAS)


def dynamics_sum_identities() -> float:
    rng = np.random.default_rng(11)
    worst = 0.0
    for lam in DRIFT_LAMBDAS:
        p = ModelParams2D(lam=lam, alpha=1.0, k2=0.05, k3=0.08)
        for _ in range(20):
            q = rng.uniform(0.2, 0.9, 2)
            s = PhaseState.momentum(q, rng.normal(size=2))
            H = cl.hamiltonian_2d(p, s)
            Hx, Hy, HJ = sep.decompose_sw(lam, p.alpha, p.k2, p.k3, s)
            I1, I2, I3 = cl.deformed_sw_integrals(p, s)
            worst = max(worst, abs(Hx + Hy - lam * HJ - H), abs(I1 + I2 - lam * I3 - 2 * H))
    return worst


# ---------------------------------------------------------------------------
# separability


def separability_round_trip() -> float:
    worst = 0.0
    for lam in (-0.4, 0.0, 0.6):
        for tag in sep.ChartTag:
            chart = sep.Chart(tag, lam)
            for x, y in ((0.3, 0.5), (-0.7, 0.2), (0.4, -0.6)):
                back = sep.chart_inverse(chart, *sep.chart_forward(chart, x, y))
                worst = max(worst, abs(back[0] - x), abs(back[1] - y))
    return worst


def separability_potential_forms() -> float:
    worst = 0.0
    for lam in (-0.4, 0.0, 0.6):
        for x, y in ((0.3, 0.5), (-0.7, 0.2), (0.4, -0.6)):
            forms = sep.sw_potential_three_forms(lam, 1.3, 0.1, 0.2, x, y)
            direct = cl.deformed_sw_potential(ModelParams2D(lam=lam, alpha=1.3, k2=0.1, k3=0.2),
                                              x, y)
            worst = max(worst, max(abs(f - direct) for f in forms))
    return worst


def separability_matched_lagrangians() -> float:
    worst = 0.0
    for kappa in (-0.5, 0.3, 1.0):
        values = list(sep.matched_lagrangians(kappa, 0.6, 0.4, 0.3, -0.2, 1.1).values())
        worst = max(worst, max(values) - min(values))
    return worst


# ---------------------------------------------------------------------------
# quantum1d

SPECTRUM_LAMBDAS = (-0.4, -0.1, 0.1, 0.4)


def quantum1d_series_termination() -> float:
    failures = 0
    for lam in SPECTRUM_LAMBDAS:
        top = min(8, q1.max_bound_index(1.0, lam))
        for p in range(int(top) + 1):
            sol = q1.series_solve(lam, q1.energy_series(lam, p), q1.Parity.of(p), 40)
            failures += int(sol.terminated_at != p)
    return float(failures)


def quantum1d_series_radius() -> float:
    worst = 0.0
    for lam in SPECTRUM_LAMBDAS:
        for p in (0, 1):
            sol = q1.series_solve(lam, q1.energy_series(lam, p) + 0.05, q1.Parity.of(p), 200)
            worst = max(worst, abs(sol.ratio_estimate - abs(lam)) / abs(lam))
    return worst


def quantum1d_series_vs_ladder() -> float:
    worst = 0.0
    for lam in SPECTRUM_LAMBDAS:
        top = min(6, q1.max_bound_index(1.0, lam))
        for n in range(int(top) + 1):
            worst = max(worst, abs(q1.energy_series(lam, n) - q1.energy_ladder(1.0, lam, n)))
    return worst


def quantum1d_annihilation() -> float:
    worst = 0.0
    for lam in (-0.1, 0.1):
        x = np.arange(-3.15, 3.15 + 1e-9, 0.005) if lam < 0 else np.arange(-8, 8 + 1e-9, 0.005)
        psi = GridFunction(x, q1.ground_state(1.0, lam, x))
        a_psi = q1.apply_A(1.0, lam, psi, accuracy=6)
        worst = max(worst, a_psi.norm() / psi.with_values(psi.values, a_psi.valid).norm())
    return worst


def quantum1d_shape_invariance(samples: int = 10) -> float:
    rng = np.random.default_rng(2024)
    x = np.arange(-8, 8 + 1e-9, 0.005)
    worst = 0.0
    for _ in range(samples):
        psi = q1.random_smooth_function(x, rng)
        worst = max(worst, q1.shape_invariance_residual(1.0, 0.2, psi, accuracy=6))
    return worst


def _ladder_grid(lam: float) -> np.ndarray:
    if lam < 0:
        edge = 1 / math.sqrt(-lam)
        return np.arange(-edge + 0.004, edge - 0.004 + 1e-12, 0.004)
    return np.arange(-20, 20 + 1e-9, 0.005)


def quantum1d_ladder_residual() -> float:
    worst = 0.0
    for lam in (-0.1, 0.1):
        grid = _ladder_grid(lam)
        for n in range(4):
            worst = max(worst, q1.ladder_eigenfunction(1.0, lam, n, grid).residual)
    return worst


def quantum1d_ladder_overlaps() -> float:
    worst = 0.0
    for lam in (-0.1, 0.1):
        grid = _ladder_grid(lam)
        states = [q1.ladder_eigenfunction(1.0, lam, n, grid).psi for n in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                worst = max(worst, abs(q1.inner_mu(states[i], states[j], lam)))
    return worst


def quantum1d_ground_normalization() -> float:
    worst = 0.0
    for lam in (-0.4, 0.1, 0.5):
        a = math.sqrt(abs(lam))
        s = 1.0 / abs(lam)
        if lam > 0:
            exact = math.sqrt(math.pi) * math.exp(gammaln(s) - gammaln(s + 0.5)) / a
        else:
            exact = math.sqrt(math.pi) * math.exp(gammaln(s + 0.5) - gammaln(s + 1)) / a
        worst = max(worst, abs(q1.ground_norm_squared(1.0, lam) - exact) / exact)
    return worst


# ---------------------------------------------------------------------------
# quantum2d

LAMBDAS_2D = (-0.3, -0.1, 0.1, 0.3)


def quantum2d_spectral_identity() -> float:
    worst = 0.0
    for Lambda in LAMBDAS_2D:
        for m in range(11):
            for n in range(11):
                if q2.admissible_2d(Lambda, m, n):
                    worst = max(worst, abs(q2.separated_energy(Lambda, m, n)
                                           - q2.energy_2d(Lambda, m, n)))
    return worst


def quantum2d_degeneracy() -> float:
    worst = 0.0
    for Lambda in LAMBDAS_2D:
        for N in range(11):
            energies = [q2.energy_2d(Lambda, m, N - m) for m in range(N + 1)
                        if q2.admissible_2d(Lambda, m, N - m)]
            if energies:
                worst = max(worst, max(energies) - min(energies))
    return worst


def quantum2d_hermite_ode() -> float:
    y = np.linspace(-1.0, 1.0, 50)
    worst = 0.0
    for Lambda in LAMBDAS_2D:
        G = q2.g_quantized(Lambda, 1)
        for n in range(9):
            poly = q2.deformed_hermite(Lambda, G, n)
            scale = max(1.0, float(np.max(np.abs(poly(y)))))
            worst = max(worst, float(np.max(np.abs(poly.ode_residual(y)))) / scale)
    return worst


def quantum2d_hermite_limit() -> float:
    worst = 0.0
    for n in range(9):
        ours = q2.deformed_hermite(0.0, 1.0, n).coefficients
        classical = hermite.herm2poly([0] * n + [1])
        ratio = classical[n % 2] / ours[n % 2]
        worst = max(worst, float(np.max(np.abs(ours * ratio - classical))
                                 / np.max(np.abs(classical))))
    return worst


def quantum2d_y_orthogonality() -> float:
    worst = 0.0
    for Lambda in (-0.1, 0.05):
        for m in range(7):
            for n in range(m + 1, 7):
                worst = max(worst, abs(q2.y_mode_overlap(Lambda, 1.0, m, n)))
    return worst


def quantum2d_wavefunction_residual() -> float:
    qp = q1.QuantumParams(lam=0.1, beta=1.0)
    axis = np.arange(-6, 6 + 1e-9, 0.02)
    psi = GridFunction2D.sample(lambda x, y: q2.wavefunction_2d(qp, 1, 1, x, y), axis, axis)
    h_psi = q2.apply_hamiltonian_2d(qp, psi)
    return q2.relative_residual(h_psi - psi.scaled(q2.energy_2d(qp.Lambda, 1, 1)), psi)


def random_smooth_2d(x: np.ndarray, y: np.ndarray, rng: np.random.Generator,
                     width: float = 1.2) -> GridFunction2D:
    coefficients = rng.normal(size=(3, 3))

    def func(xx, yy):
        return (np.polynomial.polynomial.polyval2d(xx, yy, coefficients)
                * np.exp(-(xx * xx + yy * yy) / width ** 2))
    return GridFunction2D.sample(func, x, y)


def quantum2d_commutators() -> float:
    qp = q1.QuantumParams(lam=0.1, beta=1.0)
    axis = np.arange(-5, 5 + 1e-9, 0.025)
    psi = random_smooth_2d(axis, axis, np.random.default_rng(5))
    return max(pair.commutator_residual(psi) for pair in q2.compatible_sets(qp, accuracy=6))


# ---------------------------------------------------------------------------
# oracle


def oracle_harmonic() -> float:
    qp = q1.QuantumParams(lam=0.0, beta=1.0)
    result = oracle.sturm_liouville_eigen(qp, oracle.GridSpec((-12.0, 12.0), 2001), k=4)
    return float(np.max(np.abs(result.eigenvalues - np.array([0.5, 1.5, 2.5, 3.5]))))


def _oracle_levels(lam: float) -> int:
    return int(min(6, q1.normalizable_bound_index(1.0, lam))) + 1


def oracle_spectrum_agreement() -> float:
    worst = 0.0
    for lam in SPECTRUM_LAMBDAS:
        k = _oracle_levels(lam)
        result = oracle.sturm_liouville_eigen(q1.QuantumParams(lam=lam, beta=1.0), k=k)
        for n in range(k):
            gap = abs(result.eigenvalues[n] - q1.energy_ladder(1.0, lam, n))
            if gap > 5 * result.two_grid_error[n] + 1e-9:
                logger.warning(f"λ={lam}, n={n}: oracle gap {gap:.3g} exceeds the error estimate")
            worst = max(worst, gap)
    return worst


def oracle_unequal_spacing() -> float:
    lam = 0.4
    k = _oracle_levels(lam)
    values = oracle.sturm_liouville_eigen(q1.QuantumParams(lam=lam, beta=1.0), k=k).eigenvalues
    gaps = np.diff(values)
    if np.any(np.diff(gaps) >= 0):
        return math.inf
    expected = np.array([1.0 - lam * (2 * n + 1) / 2 for n in range(len(gaps))])
    return float(np.max(np.abs(gaps - expected)))


def oracle_convergence_order() -> float:
    order = oracle.convergence_order(q1.QuantumParams(lam=0.1, beta=1.0), [101, 201, 401, 801])
    return abs(order - 4.0)


def oracle_arcsin_mass() -> float:
    eps = 1e-2
    g = oracle.GridSpec((-1 + eps, 1 - eps), 20001, variable='x')
    return abs(oracle.quadrature_mu(lambda x: np.ones_like(x), -1.0, g) - 2 * math.asin(1 - eps))


CHECKS: List[Check] = [
    Check('ktrig.fundamental', 'ktrig', ktrig_fundamental, 1e-12, 'Cos² + κSin² = 1'),
    Check('ktrig.double_angle', 'ktrig', ktrig_double_angle, 1e-12, 'double-angle identities'),
    Check('ktrig.derivatives', 'ktrig', ktrig_derivatives, 1e-8, "Sin' = Cos, Cos' = −κSin"),
    Check('ktrig.continuity', 'ktrig', ktrig_continuity, 1e-9, 'continuity at κ = 0'),
    Check('ktrig.geodesic_round_trip', 'ktrig', ktrig_geodesic_round_trip, 1e-12,
          'x = Sin_κ(u(x))'),
    Check('classical.frequency_amplitude', 'classical', classical_frequency_amplitude, 1e-6,
          'period 2π√(1+λA²)/α from rk4'),
    Check('classical.exact_solutions', 'classical', classical_exact_solutions, 1e-7,
          'exact solutions satisfy Euler–Lagrange'),
    Check('classical.lie_algebra', 'classical', classical_lie_algebra, 1e-10,
          'Killing field brackets'),
    Check('classical.legendre_round_trip', 'classical', classical_legendre_round_trip, 1e-12,
          'velocity ↔ momentum'),
    Check('dynamics.superintegrable_drift', 'dynamics', dynamics_superintegrable_drift, 1e-9,
          'I1, I2, I3 over 50 periods'),
    Check('dynamics.decomposition_drift', 'dynamics', dynamics_decomposition_drift, 1e-8,
          'H_px, H_py, H_J over 50 periods'),
    Check('dynamics.sum_identities', 'dynamics', dynamics_sum_identities, 1e-12,
          'H = H_px + H_py − λH_J and I1 + I2 − λI3 = 2H'),
    Check('separability.round_trip', 'separability', separability_round_trip, 1e-12,
          'chart inverse ∘ forward'),
    Check('separability.potential_forms', 'separability', separability_potential_forms, 1e-12,
          'three separable forms of the S-W potential'),
    Check('separability.matched_lagrangians', 'separability', separability_matched_lagrangians,
          1e-12, 'L_κ = L_λ = L_Hκ'),
    Check('quantum1d.series_termination', 'quantum1d', quantum1d_series_termination, 0.0,
          'series terminates at degree p'),
    Check('quantum1d.series_radius', 'quantum1d', quantum1d_series_radius, 1e-2,
          'coefficient ratio tends to |Λ|'),
    Check('quantum1d.series_vs_ladder', 'quantum1d', quantum1d_series_vs_ladder, 1e-12,
          'ℰ_n = E_n at β = 1'),
    Check('quantum1d.annihilation', 'quantum1d', quantum1d_annihilation, 1e-10, 'AΨ₀ = 0'),
    Check('quantum1d.shape_invariance', 'quantum1d', quantum1d_shape_invariance, 1e-7,
          'AA⁺(β) = A⁺A(β−λ) + R(β−λ)'),
    Check('quantum1d.ladder_residual', 'quantum1d', quantum1d_ladder_residual, 1e-6,
          'ladder eigenfunctions n ≤ 3'),
    Check('quantum1d.ladder_overlaps', 'quantum1d', quantum1d_ladder_overlaps, 1e-8,
          'dμ-orthogonality of ladder states'),
    Check('quantum1d.ground_normalization', 'quantum1d', quantum1d_ground_normalization, 1e-10,
          'Simpson norm of Ψ₀ against the Beta-function value'),
    Check('quantum2d.spectral_identity', 'quantum2d', quantum2d_spectral_identity, 1e-12,
          'μ_m + ν_n = (m+n+1)(1 − Λ(m+n)/2)'),
    Check('quantum2d.degeneracy', 'quantum2d', quantum2d_degeneracy, 0.0,
          'energy depends on m+n only'),
    Check('quantum2d.hermite_ode', 'quantum2d', quantum2d_hermite_ode, 1e-10,
          'deformed Hermite ODE residual'),
    Check('quantum2d.hermite_limit', 'quantum2d', quantum2d_hermite_limit, 1e-12,
          'Λ = 0 gives Hermite polynomials'),
    Check('quantum2d.y_orthogonality', 'quantum2d', quantum2d_y_orthogonality, 1e-8,
          'Y-mode orthogonality'),
    Check('quantum2d.wavefunction_residual', 'quantum2d', quantum2d_wavefunction_residual, 1e-5,
          'ĤΨ₁₁ = e₁₁Ψ₁₁ on the grid'),
    Check('quantum2d.commutators', 'quantum2d', quantum2d_commutators, 1e-6,
          'compatible observables commute'),
    Check('oracle.harmonic', 'oracle', oracle_harmonic, 1e-6, 'λ = 0 levels n + ½'),
    Check('oracle.spectrum_agreement', 'oracle', oracle_spectrum_agreement, 1e-4,
          'oracle against the ladder formula'),
    Check('oracle.unequal_spacing', 'oracle', oracle_unequal_spacing, 1e-4,
          'decreasing gaps β − λ(2n+1)/2'),
    Check('oracle.convergence_order', 'oracle', oracle_convergence_order, 0.5,
          'fourth-order grid convergence'),
    Check('oracle.arcsin_mass', 'oracle', oracle_arcsin_mass, 1e-6, '∫dμ for λ = −1'),
]

_BY_ID: Dict[str, Check] = {c.check_id: c for c in CHECKS}


def select_checks(only: Optional[Sequence[str]] = None) -> List[Check]:
    if not only:
        return list(CHECKS)
    selected = [c for c in CHECKS
                if c.group in only or c.check_id in only]
    unknown = set(only) - set(GROUPS) - set(_BY_ID)
    if unknown:
        raise ConfigError(f"unknown check group(s): {', '.join(sorted(unknown))}")
    return selected


def run_check(check_id: str, tolerance: Optional[float] = None) -> CheckResult:
    check = _BY_ID[check_id]
    limit = check.tolerance if tolerance is None else tolerance
    try:
        measured = float(check.measure())
    except Exception as e:
        logger.error(f"Check {check_id} raised: {e}")
        return CheckResult(check_id, check.group, math.nan, limit, False, check.description,
                           error=f"{type(e).__name__}: {e}")
    passed = bool(measured <= limit)
    logger.info(f"{check_id}: measured {measured:.3g}, tolerance {limit:.3g}, "
                f"{'pass' if passed else 'FAIL'}")
    return CheckResult(check_id, check.group, measured, limit, passed, check.description)


def _run_job(job) -> CheckResult:
    return run_check(*job)


@dataclass
class VerificationSuite:
    only: Optional[Sequence[str]] = None
    tolerance: Optional[float] = None
    workers: Optional[int] = None
    results: List[CheckResult] = field(default_factory=list)

    def run(self) -> List[CheckResult]:
        checks = select_checks(self.only)
        jobs = [(c.check_id, self.tolerance) for c in checks]
        outcomes = ParallelSweep(self.workers).run(_run_job, jobs,
                                                   labels=[c.check_id for c in checks])
        self.results = []
        for check, outcome in zip(checks, outcomes):
            if outcome['status'] == 'ok':
                self.results.append(outcome['result'])
            else:
                self.results.append(CheckResult(
                    check.check_id, check.group, math.nan,
                    check.tolerance if self.tolerance is None else self.tolerance,
                    False, check.description, error=outcome['error']))
        return self.results

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def summary(self) -> Dict[str, Any]:
        failed = [r.check_id for r in self.results if not r.passed]
        return {'total': len(self.results), 'passed': len(self.results) - len(failed),
                'failed': failed, 'groups': sorted({r.group for r in self.results})}
