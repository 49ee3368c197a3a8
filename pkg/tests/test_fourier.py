"""Fourier snapshots, loss assignment and the path-decomposition oracle."""

import numpy as np
import pytest
from scipy.integrate import quad

from spectral_lab.core.exceptions import AliasingError, SizeError
from spectral_lab.models.circuit import ParameterTable
from spectral_lab.models.spectra import FourierSnapshot
from spectral_lab.services.circuit import build_circuit, init_params
from spectral_lab.services.fourier import (
    circuit_snapshot,
    coefficient_gradients,
    coefficients_by_decomposition,
    decomposition_terms,
    dft_coefficients,
    exact_grid_size,
    fit_coefficients,
    loss_decomposition,
    mean_coefficient_profile,
    nonint_loss_assignment,
    projected_coefficients,
    sample_grid,
    sinc_weights,
)
from spectral_lab.services.simcore import evaluate_circuit, evaluate_grid
from spectral_lab.services.spectrum import redundancy_profile


def quadrature_coefficient(func, omega: float) -> complex:
    """``(1/2pi) int_0^2pi f(x) exp(-i omega x) dx`` by adaptive quadrature."""
    options = {"limit": 200, "epsabs": 1e-12, "epsrel": 1e-12}
    real, _ = quad(lambda x: func(x) * np.cos(omega * x), 0, 2 * np.pi, **options)
    imag, _ = quad(lambda x: -func(x) * np.sin(omega * x), 0, 2 * np.pi, **options)
    return complex(real, imag) / (2 * np.pi)


class TestDft:
    def test_grid_points(self):
        np.testing.assert_allclose(sample_grid(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def test_pure_sine(self):
        grid = sample_grid(2048)
        snapshot = dft_coefficients(np.sin(5 * grid), 100)
        assert snapshot.coefficient(5) == pytest.approx(-0.5j, abs=1e-12)
        assert snapshot.coefficient(-5) == pytest.approx(0.5j, abs=1e-12)
        assert snapshot.coefficient(4) == pytest.approx(0, abs=1e-12)

    def test_constant(self):
        snapshot = dft_coefficients(np.ones(16), 4)
        assert snapshot.coefficient(0) == pytest.approx(1.0)
        np.testing.assert_allclose(np.delete(snapshot.coefficients, 4), 0, atol=1e-14)

    def test_nyquist_is_rejected(self):
        with pytest.raises(AliasingError, match="Nyquist"):
            dft_coefficients(np.zeros(32), 16)

    def test_untracked_frequency(self):
        with pytest.raises(KeyError):
            dft_coefficients(np.zeros(16), 3).coefficient(5)

    def test_exact_grid_size_is_power_of_two_above_band(self):
        size = exact_grid_size(100, 100)
        assert size == 256
        assert exact_grid_size(2420, 64) == 4096

    def test_matches_quadrature(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 6)
        snapshot = circuit_snapshot(ladder_circuit, params, 64, 6)
        for omega in (0, 1, 2, 3, 4, 5):
            expected = quadrature_coefficient(
                lambda x: evaluate_circuit(ladder_circuit, params, x), omega
            )
            assert abs(snapshot.coefficient(omega) - expected) < 1e-8

    def test_real_function_is_conjugate_symmetric(self, ladder_circuit):
        params = init_params(ladder_circuit, 2.0, 8)
        snapshot = circuit_snapshot(ladder_circuit, params, 32, 8)
        for omega in range(9):
            assert snapshot.coefficient(-omega) == pytest.approx(
                np.conj(snapshot.coefficient(omega)), abs=1e-10
            )
        assert np.all(snapshot.magnitudes() <= 1 + 1e-12)

    def test_fit_coefficients_recovers_integer_spectrum(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 2)
        grid = sample_grid(32)
        samples = evaluate_grid(ladder_circuit, params, grid)
        fitted = fit_coefficients(samples, grid, range(-4, 5))
        exact = dft_coefficients(samples, 4)
        np.testing.assert_allclose(fitted.coefficients, exact.coefficients, atol=1e-10)


class TestCoefficientGradients:
    def test_match_finite_differences(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 21)
        gradients = coefficient_gradients(ladder_circuit, params, [0, 1, 2, 3, 4])
        h = 1e-5
        for k in range(len(params)):
            plus, minus = params.copy(), params.copy()
            plus.values[k] += h
            minus.values[k] -= h
            up = circuit_snapshot(ladder_circuit, plus, 16, 4)
            down = circuit_snapshot(ladder_circuit, minus, 16, 4)
            for omega, gradient in gradients.items():
                numeric = (up.coefficient(omega) - down.coefficient(omega)) / (2 * h)
                assert abs(gradient[k] - numeric) < 1e-6

    def test_projection_agrees_on_integer_spectrum(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 5)
        omegas = np.arange(-4, 5, dtype=np.float64)
        c, dc = projected_coefficients(ladder_circuit, params, omegas)
        snapshot = circuit_snapshot(ladder_circuit, params, 16, 4)
        np.testing.assert_allclose(c, snapshot.coefficients, atol=1e-10)
        gradients = coefficient_gradients(ladder_circuit, params, range(5))
        for omega in range(5):
            np.testing.assert_allclose(dc[omega + 4], gradients[omega], atol=1e-10)


class TestLossDecomposition:
    def test_sine_target_against_zero_model(self):
        grid = sample_grid(64)
        target = dft_coefficients(np.sin(5 * grid), 10)
        model = dft_coefficients(np.zeros(64), 10)
        spectrum = loss_decomposition(model, target)
        assert spectrum.total == pytest.approx(0.5)
        assert spectrum.per_omega[spectrum.omegas == 5][0] == pytest.approx(0.25)
        assert spectrum.per_omega[spectrum.omegas == -5][0] == pytest.approx(0.25)

    def test_parseval_for_band_limited_model(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 13)
        grid = sample_grid(64)
        values = evaluate_grid(ladder_circuit, params, grid)
        target_values = np.sin(3 * grid + 1.0) / 2 + np.sin(grid) / 2
        spectrum = loss_decomposition(dft_coefficients(values, 20), dft_coefficients(target_values, 20))
        assert spectrum.total == pytest.approx(np.mean((values - target_values) ** 2), abs=1e-12)

    def test_cross_weight_of_distant_frequencies(self):
        weights = sinc_weights(np.array([0.0, 100.5]))
        assert abs(weights[0, 1]) < 0.0032
        assert weights[0, 0] == pytest.approx(1.0)

    def test_nonint_reduces_to_orthogonal_case(self):
        grid = sample_grid(32)
        model = dft_coefficients(np.cos(2 * grid) + 0.3 * np.sin(grid), 6)
        target = dft_coefficients(np.sin(3 * grid), 6)
        orthogonal = loss_decomposition(model, target)
        assigned = nonint_loss_assignment(model, target, orthogonal.omegas)
        np.testing.assert_allclose(assigned.per_omega, orthogonal.per_omega, atol=1e-12)

    def test_nonint_total_matches_integral(self):
        omegas = np.array([-1.5, -0.5, 0.5, 1.5])
        c15 = 0.15 * np.exp(0.4j)
        coefficients = np.array([np.conj(c15), 0.5, 0.5, c15])
        model = FourierSnapshot(omegas=omegas, coefficients=coefficients, grid_size=0)
        target = FourierSnapshot(omegas=omegas, coefficients=np.zeros(4, dtype=complex), grid_size=0)
        spectrum = nonint_loss_assignment(model, target, omegas)

        def difference(x: float) -> float:
            return np.cos(0.5 * x) + 0.3 * np.cos(1.5 * x + 0.4)

        integral, _ = quad(lambda x: difference(x) ** 2, 0, 2 * np.pi, epsabs=1e-12)
        assert spectrum.total == pytest.approx(integral / (2 * np.pi), abs=1e-6)


class TestDecomposition:
    def test_single_qubit_zero_parameters(self):
        circuit = build_circuit(1, 1)
        snapshot = coefficients_by_decomposition(circuit, ParameterTable(np.zeros(4)))
        assert snapshot.coefficient(1) == pytest.approx(0.5, abs=1e-12)
        assert snapshot.coefficient(-1) == pytest.approx(0.5, abs=1e-12)
        assert snapshot.coefficient(0) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize(
        ("n", "L", "encoding", "layout", "seed"),
        [
            (1, 2, "constant", "none", 0),
            (2, 1, "ternary", "ladder", 1),
            (2, 2, "linear", "all_to_all", 2),
            (2, 2, "binary", "one_d_hop", 3),
            (2, 2, "constant", "ladder", 4),
        ],
    )
    def test_matches_dft(self, n, L, encoding, layout, seed):
        circuit = build_circuit(n, L, encoding, layout)
        params = init_params(circuit, 1.5, seed)
        decomposed, counts = decomposition_terms(circuit, params)
        band = int(circuit.max_frequency)
        exact = circuit_snapshot(circuit, params, exact_grid_size(band, band), band)
        for omega in decomposed.omegas:
            assert abs(decomposed.coefficient(omega) - exact.coefficient(omega)) < 1e-8
        assert counts == redundancy_profile(circuit.encoding, n, L).as_dict()

    def test_too_large(self):
        circuit = build_circuit(3, 1)
        with pytest.raises(SizeError):
            coefficients_by_decomposition(circuit, init_params(circuit, 0.1, 0))


def test_mean_coefficient_profile_columns(ladder_circuit):
    frame, rho = mean_coefficient_profile(ladder_circuit, 1.0, [0, 1, 2])
    assert list(frame.columns) == ["omega", "redundancy", "mean_abs_coefficient", "total_gradient"]
    assert frame["omega"].tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert frame["redundancy"].tolist() == [70, 56, 28, 8, 1]
    assert -1.0 <= rho <= 1.0
