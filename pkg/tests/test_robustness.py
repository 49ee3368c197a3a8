"""Perturbation robustness of Fourier coefficients."""

import numpy as np
import pytest

from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.models.circuit import ParameterTable
from spectral_lab.schemas.run_config import validate_config
from spectral_lab.services.circuit import build_circuit, init_params
from spectral_lab.services.robustness import (
    default_deltas,
    perturb_report,
    robustness_experiment,
    unit_directions,
)


def test_default_deltas():
    deltas = default_deltas()
    assert deltas.size == 20
    assert deltas[0] == 0.0
    assert deltas[-1] == pytest.approx(np.pi)


def test_unit_directions_have_unit_norm():
    directions = unit_directions(50, 12, seed=3)
    np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(directions, unit_directions(50, 12, seed=3))


class TestPerturbReport:
    def test_zero_delta_row_is_one(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 2)
        report = perturb_report(ladder_circuit, params, [0.0, 0.3, 1.0], n_directions=10, seed=1)
        np.testing.assert_array_equal(report.omegas, [1.0, 2.0, 3.0])
        assert report.matrix.shape == (3, 3)
        assert np.all(np.isfinite(report.matrix))
        np.testing.assert_allclose(report.matrix[0], 1.0, atol=1e-12)
        assert report.samples_per_delta == 10

    def test_reproducible(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 2)
        first = perturb_report(ladder_circuit, params, [0.5], n_directions=5, seed=9)
        second = perturb_report(ladder_circuit, params, [0.5], n_directions=5, seed=9)
        np.testing.assert_array_equal(first.matrix, second.matrix)

    def test_vanishing_reference_is_undefined(self):
        circuit = build_circuit(1, 1)
        params = ParameterTable(np.zeros(circuit.parameter_count))
        report = perturb_report(circuit, params, [0.0, 0.2], n_directions=4, omegas=[1, 2])
        assert report.matrix[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.isnan(report.matrix[:, 1]))

    def test_needs_a_direction(self, ladder_circuit):
        with pytest.raises(ConfigurationError):
            perturb_report(ladder_circuit, init_params(ladder_circuit, 1.0, 0), [0.1], n_directions=0)

    def test_needs_a_frequency(self, ladder_circuit):
        params = init_params(ladder_circuit, 1.0, 0)
        with pytest.raises(ConfigurationError, match="No frequencies"):
            perturb_report(ladder_circuit, params, [0.1], n_directions=2, omegas=[])

    def test_defaults_skip_frequencies_out_of_reach(self):
        circuit = build_circuit(3, 2, "constant", "none")
        report = perturb_report(circuit, init_params(circuit, 1.0, 4), [0.0], n_directions=2)
        np.testing.assert_array_equal(report.omegas, [1.0, 2.0])
        assert np.all(np.isfinite(report.matrix))


def test_robustness_experiment(tiny_config_data):
    tiny_config_data["experiment"]["phase_seeds"] = [0, 1]
    config = validate_config(tiny_config_data)
    report = robustness_experiment(config)
    assert report.matrix.shape == (2, 1)
    np.testing.assert_array_equal(report.omegas, [1.0])
    np.testing.assert_allclose(report.matrix[0], 1.0, atol=1e-12)
    assert report.samples_per_delta == 3 * 2
