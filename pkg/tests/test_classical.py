import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core import classical as cl
from src.core.classical import ModelParams1D, ModelParams2D, PhaseState
from src.core.errors import ConfigError, DomainError, KindMismatchError
from src.utils.finite_difference import GridFunction


def energy_1d(p, x, v):
    g = 1 + p.lam * x * x
    return cl.hamiltonian_1d(p, x, v / g)


class TestParams:
    def test_negative_alpha_rejected(self):
        with pytest.raises(ConfigError):
            ModelParams1D(alpha=-1.0)

    def test_rational_ratio_must_be_positive_integer(self):
        with pytest.raises(ConfigError):
            ModelParams2D(n1=0)
        with pytest.raises(ConfigError):
            ModelParams2D(n2=1.5)

    def test_kappa_is_minus_lambda(self):
        assert ModelParams2D(lam=0.3).kappa == -0.3


class TestMathewsLakshmanan:
    @pytest.mark.parametrize("lam, A, alpha", [(-0.5, 0.9, 1.0), (0.3, 1.0, 1.0), (2.0, 0.5, 1.0)])
    def test_frequency_amplitude(self, lam, A, alpha):
        p = ModelParams1D(lam=lam, alpha=alpha)
        assert cl.ml_frequency(p, A) == pytest.approx(alpha / math.sqrt(1 + lam * A * A))

    @pytest.mark.parametrize("lam", [-0.5, 0.0, 0.3, 2.0])
    def test_exact_solution_satisfies_equation_of_motion(self, lam):
        p = ModelParams1D(lam=lam, alpha=1.3)
        A = 0.6
        omega = cl.ml_frequency(p, A)
        for t in np.linspace(0, 7, 15):
            x, v = cl.ml_exact_solution(p, A, 0.4, t)
            assert cl.ml_acceleration(p, x, v) == pytest.approx(-omega ** 2 * x, abs=1e-12)

    def test_energy_constant_along_solution(self):
        p = ModelParams1D(lam=0.7, alpha=1.0)
        t = np.linspace(0, 20, 101)
        x, v = cl.ml_exact_solution(p, 1.2, 0.0, t)
        energies = [energy_1d(p, xi, vi) for xi, vi in zip(x, v)]
        np.testing.assert_allclose(energies, energies[0], rtol=1e-13)

    def test_metric_outside_domain(self):
        with pytest.raises(DomainError):
            cl.ml_frequency(ModelParams1D(lam=-1.0), 1.5)


class TestIsotonic:
    def test_pinney_solution_satisfies_undeformed_equation(self):
        p = ModelParams1D(alpha=1.0, k=0.1)
        t = np.linspace(0, 10, 10001)
        psi = GridFunction(t, cl.isotonic_exact_solution(p, 1.0, 0.3, t))
        acc = psi.derivative(2)
        x = psi.values[acc.valid]
        expected = np.array([cl.isotonic_acceleration(p, xi) for xi in x])
        np.testing.assert_allclose(acc.values[acc.valid], expected, atol=1e-6)

    def test_bounded_frequency_zeroes_residual(self):
        p = ModelParams1D(lam=0.2, alpha=1.0, k=0.05)
        omega = cl.solve_bounded_frequency(p, 0.8)
        assert cl.deformed_isotonic_residual(p, omega, 0.8) == pytest.approx(0.0, abs=1e-13)

    @pytest.mark.parametrize("lam", [-0.3, 0.2])
    def test_bounded_branch_conserves_energy(self, lam):
        p = ModelParams1D(lam=lam, alpha=1.0, k=0.05)
        A = 0.8
        omega = cl.solve_bounded_frequency(p, A)
        x, v = cl.deformed_isotonic_solution(p, omega, A, 0.1, np.linspace(0, 15, 61))
        energies = [energy_1d(p, xi, vi) for xi, vi in zip(x, v)]
        np.testing.assert_allclose(energies, energies[0], rtol=1e-12)

    def test_unbounded_branch_conserves_energy(self):
        p = ModelParams1D(lam=1.0, alpha=1.0, k=0.05)
        B = 2.0
        Omega = cl.solve_unbounded_frequency(p, B)
        assert cl.unbounded_residual(p, Omega, B) == pytest.approx(0.0, abs=1e-12)
        x, v = cl.deformed_isotonic_unbounded_solution(p, Omega, B, 0.2, np.linspace(0, 2, 21))
        energies = [energy_1d(p, xi, vi) for xi, vi in zip(x, v)]
        np.testing.assert_allclose(energies, energies[0], rtol=1e-11)

    def test_limit_branch_energy(self):
        p = ModelParams1D(lam=0.5, alpha=1.0, k=0.05)
        x, v = cl.deformed_isotonic_limit_solution(p, -1.0, np.linspace(0, 5, 26))
        energies = [energy_1d(p, xi, vi) for xi, vi in zip(x, v)]
        np.testing.assert_allclose(energies, p.alpha ** 2 / (2 * p.lam), rtol=1e-12)

    def test_limit_branch_needs_positive_lambda(self):
        with pytest.raises(DomainError):
            cl.deformed_isotonic_limit_solution(ModelParams1D(lam=-0.1, k=0.1), 1.0, 0.0)


class TestLegendre:
    @given(st.floats(-0.3, 0.8), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9),
           st.floats(-2, 2), st.floats(-2, 2))
    def test_round_trip(self, lam, x, y, vx, vy):
        p = ModelParams2D(lam=lam)
        s = PhaseState.velocity([x, y], [vx, vy])
        back = cl.to_velocity_state(p, cl.to_momentum_state(p, s))
        np.testing.assert_allclose(back.w, s.w, atol=1e-12)

    def test_momentum_is_lagrangian_gradient(self):
        p = ModelParams2D(lam=0.4, alpha=1.2, k2=0.1, k3=0.2)
        x, y, vx, vy, h = 0.5, 0.7, 0.3, -0.2, 1e-5
        px, py = cl.legendre_2d(p, x, y, vx, vy)

        def L(a, b):
            return cl.lagrangian_2d(p, x, y, a, b)

        dLx = (L(vx + h, vy) - L(vx - h, vy)) / (2 * h)
        dLy = (L(vx, vy + h) - L(vx, vy - h)) / (2 * h)
        assert px == pytest.approx(dLx, abs=1e-9)
        assert py == pytest.approx(dLy, abs=1e-9)

    def test_hamiltonian_is_legendre_transform(self):
        p = ModelParams2D(lam=-0.3, alpha=1.0, k2=0.1, k3=0.1)
        s = PhaseState.velocity([0.5, 0.6], [0.4, -0.7])
        ps = cl.to_momentum_state(p, s)
        expected = sum(v * q for v, q in zip(s.w, ps.w)) - cl.lagrangian_2d(p, *s.q, *s.w)
        assert cl.hamiltonian_2d(p, ps) == pytest.approx(expected, rel=1e-13)
        assert cl.energy_2d(p, s) == pytest.approx(expected, rel=1e-13)

    def test_kind_is_enforced(self):
        s = PhaseState.velocity([0.5, 0.6], [0.4, -0.7])
        with pytest.raises(KindMismatchError):
            cl.hamiltonian_2d(ModelParams2D(), s)

    def test_state_shape_checked(self):
        with pytest.raises(ConfigError):
            PhaseState.velocity([0.1, 0.2], [0.3])


class TestIntegrals:
    def test_deformed_sw_reduces_to_flat(self):
        p = ModelParams2D(lam=0.0, alpha=1.1, k2=0.2, k3=0.3)
        s = PhaseState.momentum([0.6, 0.4], [0.3, -0.5])
        I1, I2, I3 = cl.deformed_sw_integrals(p, s)
        Ex, Ey, C = cl.sw_integrals_flat(p, s)
        assert I1 == pytest.approx(2 * Ex)
        assert I2 == pytest.approx(2 * Ey)
        assert I3 == pytest.approx(C)

    @pytest.mark.parametrize("lam", [-0.2, 0.0, 0.5])
    def test_sum_identity(self, lam):
        p = ModelParams2D(lam=lam, alpha=1.0, k2=0.05, k3=0.08)
        s = PhaseState.momentum([0.4, 0.7], [0.9, -0.3])
        I1, I2, I3 = cl.deformed_sw_integrals(p, s)
        assert I1 + I2 - lam * I3 == pytest.approx(2 * cl.hamiltonian_2d(p, s), abs=1e-12)

    def test_nonlinear_angular_integral(self):
        p = ModelParams2D(lam=0.3, alpha=2.0)
        s = PhaseState.velocity([0.5, 0.2], [0.1, 0.4])
        assert cl.nonlinear2d_integrals(p, s)[2] == pytest.approx(2.0 * (0.5 * 0.4 - 0.2 * 0.1))

    def test_rational_energies(self):
        p = ModelParams2D(omega0=1.0, n1=1, n2=2)
        s = PhaseState.momentum([0.5, 0.2], [0.1, 0.4])
        Ex, Ey, _, _ = cl.rational_oscillator_integrals(p, s)
        assert Ex == pytest.approx(0.5 * (0.01 + 0.25))
        assert Ey == pytest.approx(0.5 * (0.16 + 4 * 0.04))

    def test_rational_complex_integrals_equal_ratio(self):
        p = ModelParams2D(omega0=1.0, n1=1, n2=1)
        s = PhaseState.momentum([0.5, 0.3], [0.2, -0.1])
        _, _, I3, I4 = cl.rational_oscillator_integrals(p, s)
        assert I3 == pytest.approx(0.2 * -0.1 + 0.5 * 0.3)
        assert I4 == pytest.approx(0.5 * -0.1 - 0.3 * 0.2)

    @pytest.mark.parametrize("lam", [-0.5, 0.0, 0.7])
    def test_killing_algebra(self, lam):
        rng = np.random.default_rng(3)
        x, y = rng.uniform(-0.8, 0.8, (2, 30))
        residuals = cl.lie_algebra_residuals(lam, x, y, rng.normal(size=(4, 4)))
        assert set(residuals) == {'[X1,X2]=lam*XJ', '[X1,XJ]=X2', '[X2,XJ]=-X1'}
        assert max(residuals.values()) < 1e-10
