"""Targets, training traces and experiment result tables."""

import enum
from dataclasses import dataclass, field

import numpy as np

from spectral_lab.models.circuit import ParameterTable
from spectral_lab.models.spectra import FourierSnapshot


class Profile(str, enum.Enum):
    """Config presets: a quick desk scale and the full experiment scale."""

    desk = "desk"
    full = "full"


@dataclass(frozen=True)
class TargetFunction:
    """Normalized sum of sinusoids ``(1/sum A) * sum A sin(omega x + phi)``."""

    frequencies: tuple[int, ...]
    amplitudes: tuple[float, ...]
    phases: tuple[float, ...]

    @property
    def normalizer(self) -> float:
        return float(sum(self.amplitudes))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        total = np.zeros_like(x)
        for omega, amplitude, phase in zip(
            self.frequencies, self.amplitudes, self.phases, strict=True
        ):
            total = total + amplitude * np.sin(omega * x + phase)
        return total / self.normalizer

    def coefficient(self, omega: float) -> complex:
        """Exact Fourier coefficient of the target at ``omega``."""
        for freq, amplitude, phase in zip(
            self.frequencies, self.amplitudes, self.phases, strict=True
        ):
            if omega == freq:
                return amplitude * np.exp(1j * phase) / (2j * self.normalizer)
            if omega == -freq:
                return -amplitude * np.exp(-1j * phase) / (2j * self.normalizer)
        return 0j

    def normalized_amplitudes(self) -> np.ndarray:
        """Magnitude of ``c_omega`` each target frequency should reach."""
        return np.array(self.amplitudes, dtype=np.float64) / (2 * self.normalizer)


@dataclass(frozen=True)
class TrainingOptions:
    """Optimizer and evaluation settings for one run."""

    lr: float = 0.0005
    epochs: int = 3000
    eval_every: int = 5
    grid_size: int = 256
    omega_max_track: int = 64
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    early_stop_loss: float = 1e-5


@dataclass
class TrainingTrace:
    """Per-evaluation record of a training run.

    ``normalized`` rows hold ``|f_omega| / A_omega`` at the target
    frequencies, with ``A_omega`` the coefficient magnitude of the
    normalized target.
    """

    target_omegas: np.ndarray
    eval_every: int
    eval_epochs: list[int] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)
    parseval_residuals: list[float] = field(default_factory=list)
    snapshots: list[FourierSnapshot] = field(default_factory=list)
    normalized: list[np.ndarray] = field(default_factory=list)
    final_params: ParameterTable | None = None
    aborted: bool = False
    early_stopped: bool = False

    @property
    def matrix(self) -> np.ndarray:
        if not self.normalized:
            return np.zeros((0, self.target_omegas.size))
        return np.vstack(self.normalized)


@dataclass(frozen=True, eq=False)
class PerturbationReport:
    """Mean normalized ``|c_omega|`` per perturbation magnitude.

    NaN marks frequencies whose unperturbed coefficient vanishes.
    """

    deltas: np.ndarray
    omegas: np.ndarray
    matrix: np.ndarray
    samples_per_delta: int


@dataclass(frozen=True)
class ConvergenceRow:
    """Epochs a layout needs to reach the threshold at one frequency."""

    layout: str
    cnots_per_layer: float
    omega: int
    epochs_to_converge: float | None
    runs: int
    converged_runs: int = 0


@dataclass
class ConvergenceTable:
    """Rows of an entanglement sweep, plus the traces they came from."""

    rows: list[ConvergenceRow] = field(default_factory=list)
    traces: dict[str, list[TrainingTrace]] = field(default_factory=dict)

    def mean_epochs(self, layout: str, omega: int) -> float | None:
        for row in self.rows:
            if row.layout == layout and row.omega == omega:
                return row.epochs_to_converge
        raise KeyError(f"No row for layout {layout} at omega {omega}")


@dataclass(frozen=True, eq=False)
class InitSweepTable:
    """Mean initial ``|c_omega|^2`` per initialization std-dev.

    ``sigmas`` are standard deviations; ``sigma ** 2`` is reported alongside
    when the table is written out.
    """

    sigmas: np.ndarray
    omegas: np.ndarray
    mean_abs_sq: np.ndarray
    seeds: tuple[int, ...]
    traces: dict[float, list[TrainingTrace]] = field(default_factory=dict)
