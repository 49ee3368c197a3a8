import numpy as np
import pytest

from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.services.fourier import sample_grid
from spectral_lab.services.targets import make_target, target_snapshot


def test_normalized_by_amplitude_sum():
    target = make_target([1, 3], amplitudes=[1.0, 3.0], phases=[0.0, 0.0])
    x = np.array([np.pi / 2])
    assert target(x)[0] == pytest.approx((1.0 - 3.0) / 4.0)
    np.testing.assert_allclose(target.normalized_amplitudes(), [0.125, 0.375])


def test_phases_are_seeded():
    assert make_target([1, 2], phase_seed=7) == make_target([1, 2], phase_seed=7)
    assert make_target([1, 2], phase_seed=7) != make_target([1, 2], phase_seed=8)


def test_snapshot_matches_exact_coefficients():
    target = make_target([2, 5], phase_seed=3)
    snapshot = target_snapshot(target, 64, 8)
    for omega in range(-8, 9):
        assert snapshot.coefficient(omega) == pytest.approx(target.coefficient(omega), abs=1e-12)


def test_zero_mean_on_grid():
    target = make_target([1, 2, 3], phase_seed=0)
    assert np.mean(target(sample_grid(128))) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("frequencies", [[], [0], [2, 2], [1.5]])
def test_malformed_frequency_sets(frequencies):
    with pytest.raises(ConfigurationError):
        make_target(frequencies)
