"""Sinusoidal regression targets."""

import numpy as np

from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.models.experiments import TargetFunction
from spectral_lab.models.spectra import FourierSnapshot
from spectral_lab.services.fourier import dft_coefficients, sample_grid


def make_target(
    frequencies: list[int],
    amplitudes: list[float] | None = None,
    phase_seed: int | None = 0,
    phases: list[float] | None = None,
) -> TargetFunction:
    """Build a target with phases drawn uniformly on [0, 2pi) from a seed.

    Args:
        frequencies: Distinct positive integer frequencies.
        amplitudes: Amplitudes before normalization, all 1 by default.
        phase_seed: Seed for the phase draw.
        phases: Explicit phases, overriding the seeded draw.

    Returns:
        Target normalized by the sum of its amplitudes.

    Raises:
        ConfigurationError: If the frequency set is empty or malformed.
    """
    if not frequencies:
        raise ConfigurationError("Target frequency set is empty")
    if len(set(frequencies)) != len(frequencies) or any(
        int(omega) != omega or omega <= 0 for omega in frequencies
    ):
        raise ConfigurationError(
            f"Target frequencies must be distinct positive integers: {frequencies}"
        )
    amplitudes = amplitudes or [1.0] * len(frequencies)
    if len(amplitudes) != len(frequencies) or any(a <= 0 for a in amplitudes):
        raise ConfigurationError("Need one positive amplitude per target frequency")
    if phases is None:
        rng = np.random.default_rng(phase_seed)
        phases = rng.uniform(0.0, 2 * np.pi, size=len(frequencies)).tolist()
    elif len(phases) != len(frequencies):
        raise ConfigurationError("Need one phase per target frequency")
    return TargetFunction(
        frequencies=tuple(int(omega) for omega in frequencies),
        amplitudes=tuple(float(a) for a in amplitudes),
        phases=tuple(float(p) for p in phases),
    )


def target_snapshot(target: TargetFunction, grid_size: int, omega_max_track: int) -> FourierSnapshot:
    return dft_coefficients(target(sample_grid(grid_size)), omega_max_track)
