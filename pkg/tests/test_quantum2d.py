import csv

import numpy as np
import pytest
from numpy.polynomial import hermite

from src.core import quantum2d as q2
from src.core.errors import (DegenerateRecursionError, DomainError, ImaginaryGError,
                             NotBoundStateError)
from src.core.quantum1d import QuantumParams, energy_series
from src.modules.verification import random_smooth_2d
from src.utils.finite_difference import GridFunction2D

LAMBDAS = (-0.3, -0.1, 0.1, 0.3)


class TestGFactor:
    def test_quantized_value(self):
        assert q2.g_quantized(0.2, 2) == pytest.approx(0.6)
        g = q2.GFactor.quantized(0.2, 2)
        assert g.mu == energy_series(0.2, 2)

    @pytest.mark.parametrize("Lambda", LAMBDAS)
    def test_radical_agrees_with_closed_form(self, Lambda):
        for m in range(3):
            assert q2.g_factor(Lambda, energy_series(Lambda, m)) == \
                pytest.approx(1 - Lambda * m, abs=1e-12)

    def test_imaginary(self):
        with pytest.raises(ImaginaryGError):
            q2.g_quantized(0.5, 3)
        with pytest.raises(ImaginaryGError):
            q2.g_factor(0.5, 5.0)


class TestEnergies:
    @pytest.mark.parametrize("Lambda", LAMBDAS)
    def test_separation_reproduces_closed_form(self, Lambda):
        for m in range(8):
            for n in range(8):
                if q2.admissible_2d(Lambda, m, n):
                    assert q2.separated_energy(Lambda, m, n) == \
                        pytest.approx(q2.energy_2d(Lambda, m, n), abs=1e-12)

    @pytest.mark.parametrize("Lambda", LAMBDAS)
    def test_degeneracy_in_total_quantum_number(self, Lambda):
        for N in range(8):
            energies = {q2.energy_2d(Lambda, m, N - m) for m in range(N + 1)
                        if q2.admissible_2d(Lambda, m, N - m)}
            assert len(energies) <= 1

    def test_inadmissible(self):
        assert not q2.admissible_2d(0.5, 2, 0)
        assert not q2.admissible_2d(0.3, 3, 5)
        with pytest.raises(NotBoundStateError):
            q2.energy_2d(0.5, 2, 0)

    def test_spectrum_table(self, tmp_path):
        entries = q2.spectrum_2d(0.0, 2)
        assert len(entries) == 12
        assert [e.provenance for e in entries[:2]] == ['closed-form', 'separation']
        assert entries[-1].N == 2 and entries[-1].energy == pytest.approx(3.0)
        path = tmp_path / 'spectrum2d.csv'
        q2.write_spectrum_2d_csv(path, entries)
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['m', 'n', 'N=m+n', 'energy', 'provenance']
        assert len(rows) == 13


class TestDeformedHermite:
    @pytest.mark.parametrize("Lambda", LAMBDAS)
    def test_solves_ode(self, Lambda):
        y = np.linspace(-1, 1, 50)
        G = q2.g_quantized(Lambda, 1)
        for n in range(9):
            poly = q2.deformed_hermite(Lambda, G, n)
            scale = max(1.0, float(np.max(np.abs(poly(y)))))
            assert np.max(np.abs(poly.ode_residual(y))) / scale < 1e-10

    @pytest.mark.parametrize("n", range(7))
    def test_flat_limit_is_hermite(self, n):
        ours = q2.deformed_hermite(0.0, 1.0, n).coefficients
        classical = hermite.herm2poly([0] * n + [1])
        ratio = classical[n % 2] / ours[n % 2]
        scale = np.max(np.abs(classical))
        np.testing.assert_allclose(ours * ratio, classical, atol=1e-12 * scale)

    def test_parity(self):
        c = q2.deformed_hermite(0.1, 0.9, 5).coefficients
        assert np.all(c[::2] == 0.0)

    def test_collapsed_recursion(self):
        with pytest.raises(DegenerateRecursionError):
            q2.deformed_hermite(0.5, 0.75, 2)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            q2.deformed_hermite(0.1, 1.0, -1)

    def test_polynomial_csv(self, tmp_path):
        path = tmp_path / 'poly.csv'
        q2.write_polynomials_csv(path, [q2.deformed_hermite(0.1, 1.0, n) for n in range(4)])
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['degree', 'c0', 'c1', 'c2', 'c3']
        assert [int(r[0]) for r in rows[1:]] == [0, 1, 2, 3]


class TestModes:
    @pytest.mark.parametrize("Lambda", [-0.1, 0.05])
    def test_y_orthogonality(self, Lambda):
        for m, n in [(0, 2), (1, 3), (2, 4), (0, 1)]:
            assert abs(q2.y_mode_overlap(Lambda, 1.0, m, n)) < 1e-8

    def test_z_ground_mode(self):
        assert q2.z_mode(0.2, 0, 0.0) == pytest.approx(1.0)

    def test_sturm_liouville_coefficients(self):
        form = q2.sturm_liouville_form(0.2, 0.8)
        y = np.array([0.0, 1.0])
        np.testing.assert_allclose(form.p(y), [1.0, 1.2])
        np.testing.assert_allclose(form.q(y), [0.0, -0.64 / 1.2])
        np.testing.assert_allclose(form.w(y), 1.0)

    def test_wavefunction_outside_disk(self):
        with pytest.raises(DomainError):
            q2.wavefunction_2d(QuantumParams(lam=-0.5), 0, 0, 2.0, 0.0)


class TestGridOperators:
    def test_wavefunction_is_eigenfunction(self):
        qp = QuantumParams(lam=0.1, beta=1.0)
        axis = np.arange(-6, 6 + 1e-9, 0.02)
        psi = GridFunction2D.sample(lambda x, y: q2.wavefunction_2d(qp, 1, 1, x, y), axis, axis)
        h_psi = q2.apply_hamiltonian_2d(qp, psi)
        energy = qp.energy_scale * q2.energy_2d(qp.Lambda, 1, 1)
        assert q2.relative_residual(h_psi - psi.scaled(energy), psi) < 1e-5

    def test_direct_form_agrees(self):
        qp = QuantumParams(lam=-0.05, beta=1.0)
        axis = np.linspace(-3, 3, 121)
        psi = random_smooth_2d(axis, axis, np.random.default_rng(11))
        split = q2.apply_hamiltonian_2d(qp, psi)
        direct = q2.apply_hamiltonian_2d_direct(qp, psi)
        assert q2.relative_residual(split - direct, psi) < 1e-10

    def test_compatible_operators_commute(self):
        qp = QuantumParams(lam=0.1, beta=1.0)
        axis = np.arange(-5, 5 + 1e-9, 0.025)
        psi = random_smooth_2d(axis, axis, np.random.default_rng(5))
        pairs = q2.compatible_sets(qp, accuracy=6)
        assert [p.label for p in pairs] == ['H1 | H2-lam*J2', 'H1-lam*J2 | H2', 'H1+H2 | J']
        for pair in pairs:
            assert pair.commutator_residual(psi) < 1e-6, pair.label

    def test_h1_and_h2_do_not_commute(self):
        qp = QuantumParams(lam=0.3, beta=1.0)
        axis = np.linspace(-1.5, 1.5, 121)
        psi = random_smooth_2d(axis, axis, np.random.default_rng(2))

        def h1(f):
            return q2.apply_h1(qp, f)

        def h2(f):
            return q2.apply_h2(qp, f)
        assert q2.relative_residual(q2.commutator(h1, h2, psi), psi) > 1e-3
