import csv
import math

import numpy as np
import pytest

from src.core import classical as cl
from src.core.classical import ModelParams1D, ModelParams2D, PhaseState, StateKind
from src.core.dynamics import (IntegrationMethod, IntegratorConfig, conservation_drift,
                               integrate, measure_period, sampled_trajectory)
from src.core.errors import (ConfigError, DomainError, DomainExitError,
                             InsufficientCyclesError, KindMismatchError, MaxStepsExceeded)
from src.core.models import build_params, get_model, model_integrals


class TestIntegratorConfig:
    def test_rk4_rejects_tolerance(self):
        with pytest.raises(ConfigError):
            IntegratorConfig(method='rk4', dt=1e-3, tol=1e-8)

    def test_rk45_needs_tolerance_only(self):
        with pytest.raises(ConfigError):
            IntegratorConfig(method='rk45', dt=1e-3, tol=1e-8)
        cfg = IntegratorConfig(method='rk45', dt=None, tol=1e-8)
        assert cfg.method is IntegrationMethod.RK45

    def test_positive_horizon(self):
        with pytest.raises(ConfigError):
            IntegratorConfig(t_end=0.0)


class TestModels:
    def test_unknown_model(self):
        with pytest.raises(ConfigError):
            get_model('duffing')

    def test_build_params_ignores_foreign_keys(self):
        p = build_params(get_model('ml1d'), {'lam': 0.3, 'k2': 1.0, 'alpha': None})
        assert p == ModelParams1D(lam=0.3)

    def test_missing_equation_form(self):
        with pytest.raises(KindMismatchError):
            get_model('curved_sw').vector_field(StateKind.MOMENTUM)

    def test_integral_filter(self):
        p = ModelParams2D(lam=0.1, k2=0.1, k3=0.1)
        names = [q.name for q in model_integrals(get_model('deformed_sw'), p, ['I1', 'H'])]
        assert names == ['I1', 'H']

    def test_dimension_mismatch(self):
        cfg = IntegratorConfig(t_end=1.0)
        with pytest.raises(ConfigError):
            integrate(get_model('nonlinear2d'), ModelParams2D(),
                      PhaseState.velocity([0.1], [0.0]), cfg)


class TestPeriods:
    def test_harmonic_period(self):
        p = ModelParams1D(alpha=1.0)
        traj = integrate(get_model('harmonic1d'), p, PhaseState.velocity([0.0], [1.0]),
                         IntegratorConfig(t_end=20.0, dt=1e-3))
        assert measure_period(traj) == pytest.approx(2 * math.pi, rel=1e-6)

    @pytest.mark.parametrize("lam", [-0.5, 0.5, 2.0])
    def test_frequency_depends_on_amplitude(self, lam):
        p = ModelParams1D(lam=lam, alpha=1.0)
        A = 0.6
        omega = cl.ml_frequency(p, A)
        _, v0 = cl.ml_exact_solution(p, A, 0.0, 0.0)
        traj = integrate(get_model('ml1d'), p, PhaseState.velocity([0.0], [v0]),
                         IntegratorConfig(t_end=4.2 * 2 * math.pi / omega, dt=1e-3))
        assert measure_period(traj) == pytest.approx(2 * math.pi / omega, rel=1e-6)

    def test_too_few_crossings(self):
        traj = integrate(get_model('harmonic1d'), ModelParams1D(),
                         PhaseState.velocity([0.0], [1.0]), IntegratorConfig(t_end=2.0))
        with pytest.raises(InsufficientCyclesError):
            measure_period(traj)

    def test_sampled_exact_path(self):
        p = ModelParams1D(lam=0.4)
        t = np.linspace(0, 30, 3001)
        x, v = cl.ml_exact_solution(p, 0.9, 0.3, t)
        traj = sampled_trajectory(get_model('ml1d'), p, t, x, v)
        omega = cl.ml_frequency(p, 0.9)
        assert measure_period(traj) == pytest.approx(2 * math.pi / omega, rel=1e-5)
        H = model_integrals(get_model('ml1d'), p)[0]
        assert conservation_drift(traj, H) < 1e-13


class TestConservation:
    def test_nonlinear2d_rk4(self):
        p = ModelParams2D(lam=0.3, alpha=1.0)
        traj = integrate(get_model('nonlinear2d'), p,
                         PhaseState.velocity([0.7, 0.5], [0.2, -0.3]),
                         IntegratorConfig(t_end=30.0, dt=1e-3, sample_every=10))
        for q in model_integrals(get_model('nonlinear2d'), p):
            assert conservation_drift(traj, q) < 1e-9, q.name

    def test_rk4_energy_drift_is_fourth_order(self):
        p = ModelParams1D(lam=0.5, alpha=1.0)
        model = get_model('ml1d')
        H = model_integrals(model, p)[0]
        s0 = PhaseState.velocity([0.8], [0.5])
        drifts = [conservation_drift(integrate(model, p, s0, IntegratorConfig(t_end=1.5, dt=dt)), H)
                  for dt in (0.05, 0.025)]
        assert 8.0 <= drifts[0] / drifts[1] <= 32.0

    def test_deformed_sw_adaptive(self):
        p = ModelParams2D(lam=-0.2, alpha=1.0, k2=0.05, k3=0.05)
        traj = integrate(get_model('deformed_sw'), p,
                         PhaseState.velocity([0.7, 0.5], [0.2, -0.3]),
                         IntegratorConfig(method='rk45', t_end=20.0, dt=None, tol=1e-11))
        assert traj.stats.steps > 0
        for q in model_integrals(get_model('deformed_sw'), p):
            assert conservation_drift(traj, q) < 1e-7, q.name

    def test_momentum_form_matches_velocity_form(self):
        p = ModelParams2D(lam=0.5, alpha=1.0, k2=0.05, k3=0.05)
        model = get_model('deformed_sw')
        s0 = PhaseState.velocity([0.6, 0.4], [0.3, 0.1])
        cfg = IntegratorConfig(t_end=5.0, dt=1e-3)
        by_velocity = integrate(model, p, s0, cfg).final_state
        by_momentum = integrate(model, p, cl.to_momentum_state(p, s0), cfg).final_state
        np.testing.assert_allclose(by_momentum.q, by_velocity.q, atol=1e-9)
        back = cl.to_velocity_state(p, by_momentum)
        np.testing.assert_allclose(back.w, by_velocity.w, atol=1e-9)

    def test_curved_sw(self):
        p = ModelParams2D(lam=-0.5, omega0=1.0, k2=0.1, k3=0.1)
        traj = integrate(get_model('curved_sw'), p,
                         PhaseState.velocity([0.8, 0.7], [0.1, 0.3]),
                         IntegratorConfig(t_end=5.0, dt=1e-4, sample_every=10))
        for q in model_integrals(get_model('curved_sw'), p):
            assert conservation_drift(traj, q) < 1e-8, q.name

    def test_rational_integrals(self):
        p = ModelParams2D(omega0=1.0, n1=1, n2=2)
        traj = integrate(get_model('rational2d'), p,
                         PhaseState.velocity([0.5, 0.3], [0.2, -0.1]),
                         IntegratorConfig(t_end=15.0, dt=1e-3, sample_every=50))
        for q in model_integrals(get_model('rational2d'), p):
            assert conservation_drift(traj, q) < 1e-9, q.name


class TestFailures:
    def test_initial_state_outside_domain(self):
        with pytest.raises(DomainError):
            integrate(get_model('ml1d'), ModelParams1D(lam=-1.0),
                      PhaseState.velocity([1.5], [0.0]), IntegratorConfig(t_end=1.0))

    def test_free_motion_reaches_boundary(self):
        # with α = 0 the motion is uniform in the geodesic coordinate
        with pytest.raises(DomainExitError):
            integrate(get_model('ml1d'), ModelParams1D(lam=-1.0, alpha=0.0),
                      PhaseState.velocity([0.0], [1.0]), IntegratorConfig(t_end=3.0, dt=1e-3))

    def test_step_budget(self):
        with pytest.raises(MaxStepsExceeded):
            integrate(get_model('harmonic1d'), ModelParams1D(),
                      PhaseState.velocity([0.0], [1.0]),
                      IntegratorConfig(t_end=10.0, dt=1e-3, max_steps=100))


def test_trajectory_csv(tmp_path):
    p = ModelParams2D(lam=0.1)
    traj = integrate(get_model('nonlinear2d'), p, PhaseState.velocity([0.5, 0.0], [0.0, 0.5]),
                     IntegratorConfig(t_end=1.0, dt=1e-2, sample_every=10))
    path = tmp_path / 'traj.csv'
    traj.to_csv(path)
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['t', 'q1', 'q2', 'v1', 'v2']
    assert len(rows) == len(traj) + 1
    assert float(rows[-1][0]) == pytest.approx(1.0)
