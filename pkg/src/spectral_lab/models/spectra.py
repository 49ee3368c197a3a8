"""Frequency spectra, Fourier snapshots and per-frequency losses."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FrequencySpectrum:
    """Redundancy counts on a scaled integer lattice.

    Keys of ``entries`` are ``omega * lattice_scale``; counts are Python ints
    so full-scale totals (4**100) stay exact.
    """

    lattice_scale: int
    entries: dict[int, int] = field(default_factory=dict)

    def omegas(self) -> np.ndarray:
        return np.array(sorted(self.entries), dtype=np.float64) / self.lattice_scale

    def redundancy(self, omega: float) -> int:
        key = round(omega * self.lattice_scale)
        if abs(key - omega * self.lattice_scale) > 1e-9:
            return 0
        return self.entries.get(key, 0)

    def as_dict(self) -> dict[float, int]:
        return {key / self.lattice_scale: count for key, count in sorted(self.entries.items())}

    def total(self) -> int:
        return sum(self.entries.values())

    def max_frequency(self) -> float:
        return max(self.entries) / self.lattice_scale

    def is_integer(self) -> bool:
        return all(key % self.lattice_scale == 0 for key in self.entries)


@dataclass(frozen=True, eq=False)
class FourierSnapshot:
    """Coefficients ``c_omega`` of a sampled real function on [0, 2pi)."""

    omegas: np.ndarray
    coefficients: np.ndarray
    grid_size: int

    def coefficient(self, omega: float) -> complex:
        matches = np.flatnonzero(np.isclose(self.omegas, omega, atol=1e-12))
        if matches.size == 0:
            raise KeyError(f"Frequency {omega} is not tracked")
        return complex(self.coefficients[matches[0]])

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)

    def restrict(self, omegas: np.ndarray) -> "FourierSnapshot":
        """Sub-snapshot on the given (tracked) frequencies."""
        values = np.array([self.coefficient(float(omega)) for omega in omegas])
        return FourierSnapshot(
            omegas=np.asarray(omegas, dtype=np.float64),
            coefficients=values,
            grid_size=self.grid_size,
        )


@dataclass(frozen=True, eq=False)
class LossSpectrum:
    """Loss assigned to each frequency."""

    omegas: np.ndarray
    per_omega: np.ndarray
    total: float
