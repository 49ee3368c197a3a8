"""Full-batch Adam training with per-evaluation Fourier snapshots."""

import logging
from dataclasses import dataclass, field

import numpy as np

from spectral_lab.core.exceptions import AliasingError, ConfigurationError
from spectral_lab.models.circuit import ParameterTable, ReuploaderCircuit
from spectral_lab.models.experiments import TargetFunction, TrainingOptions, TrainingTrace
from spectral_lab.models.spectra import FourierSnapshot
from spectral_lab.schemas.run_config import TrainingConfig
from spectral_lab.services.fourier import dft_coefficients, loss_decomposition, sample_grid
from spectral_lab.services.gradients import grad_mse
from spectral_lab.services.simcore import evaluate_grid

logger = logging.getLogger(__name__)

CONVERGENCE_THRESHOLD = 0.9
CONVERGENCE_HOLD = 2


@dataclass
class AdamState:
    """First and second moment estimates plus the step counter."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = 0.0005
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_options(cls, size: int, options: TrainingOptions) -> "AdamState":
        return cls(
            m=np.zeros(size),
            v=np.zeros(size),
            lr=options.lr,
            beta1=options.beta1,
            beta2=options.beta2,
            eps=options.eps,
        )


def adam_step(params: ParameterTable, gradient: np.ndarray, state: AdamState) -> ParameterTable:
    """One bias-corrected Adam update; returns new parameters and advances ``state``."""
    state.t += 1
    state.m = state.beta1 * state.m + (1 - state.beta1) * gradient
    state.v = state.beta2 * state.v + (1 - state.beta2) * gradient**2
    m_hat = state.m / (1 - state.beta1**state.t)
    v_hat = state.v / (1 - state.beta2**state.t)
    return ParameterTable(params.values - state.lr * m_hat / (np.sqrt(v_hat) + state.eps))


def validate_options(options: TrainingOptions, target: TargetFunction) -> None:
    if options.lr <= 0:
        raise ConfigurationError(f"Learning rate must be positive, got {options.lr}")
    if options.epochs < 0:
        raise ConfigurationError(f"epochs must be non-negative, got {options.epochs}")
    if options.eval_every < 1:
        raise ConfigurationError(f"eval_every must be at least 1, got {options.eval_every}")
    if options.grid_size <= 2 * options.omega_max_track:
        raise AliasingError(
            f"Grid size {options.grid_size} must exceed 2 * omega_max_track "
            f"= {2 * options.omega_max_track} (Nyquist)"
        )
    if max(target.frequencies) > options.omega_max_track:
        raise ConfigurationError(
            f"Target frequency {max(target.frequencies)} above omega_max_track "
            f"{options.omega_max_track}"
        )


@dataclass
class _Recorder:
    target: TargetFunction
    options: TrainingOptions
    trace: TrainingTrace
    x_grid: np.ndarray
    target_snapshot: FourierSnapshot = field(init=False)

    def __post_init__(self) -> None:
        self.target_snapshot = dft_coefficients(self.target(self.x_grid), self.options.omega_max_track)

    def record(self, circuit: ReuploaderCircuit, params: ParameterTable, epoch: int, loss: float) -> None:
        snapshot = dft_coefficients(
            evaluate_grid(circuit, params, self.x_grid), self.options.omega_max_track
        )
        spectrum = loss_decomposition(snapshot, self.target_snapshot)
        magnitudes = np.array(
            [abs(snapshot.coefficient(omega)) for omega in self.target.frequencies]
        )
        self.trace.eval_epochs.append(epoch)
        self.trace.losses.append(loss)
        self.trace.parseval_residuals.append(loss - spectrum.total)
        self.trace.snapshots.append(snapshot)
        self.trace.normalized.append(magnitudes / self.target.normalized_amplitudes())


def train(
    circuit: ReuploaderCircuit,
    params0: ParameterTable,
    target: TargetFunction,
    options: TrainingOptions | None = None,
) -> TrainingTrace:
    """Fit the circuit to a target with full-batch Adam on the grid MSE.

    Epoch 0 is the initial evaluation; every ``eval_every`` epochs, and at
    the final epoch, the loss, the Fourier snapshot, the Parseval residual
    and the normalized magnitudes at the target frequencies are recorded.
    Training stops early at an evaluation whose loss is below ``options.early_stop_loss``.

    Args:
        circuit: Circuit to train.
        params0: Initial parameters, left unmodified.
        target: Regression target.
        options: Optimizer and evaluation settings.

    Returns:
        Trace of the run. A non-finite loss ends the run with ``aborted`` set.

    Raises:
        ConfigurationError: If the options are invalid for the target.
    """
    options = options or TrainingOptions()
    validate_options(options, target)
    x_grid = sample_grid(options.grid_size)
    target_values = target(x_grid)
    trace = TrainingTrace(
        target_omegas=np.array(target.frequencies, dtype=np.float64),
        eval_every=options.eval_every,
    )
    recorder = _Recorder(target=target, options=options, trace=trace, x_grid=x_grid)
    state = AdamState.for_options(len(params0), options)
    params = params0.copy()

    for epoch in range(options.epochs + 1):
        loss, gradient = grad_mse(circuit, params, x_grid, target_values)
        if not (np.isfinite(loss) and np.all(np.isfinite(gradient))):
            logger.warning(f"Non-finite loss at epoch {epoch}; aborting run")
            trace.aborted = True
            break
        if epoch % options.eval_every == 0 or epoch == options.epochs:
            recorder.record(circuit, params, epoch, loss)
            logger.debug(f"Epoch {epoch}: loss={loss:.6e}")
            if loss < options.early_stop_loss:
                trace.early_stopped = True
                logger.info(f"Loss {loss:.3e} below {options.early_stop_loss:g} at epoch {epoch}")
                break
        if epoch == options.epochs:
            break
        params = adam_step(params, gradient, state)

    trace.final_params = params
    logger.info(
        f"Training finished after {trace.eval_epochs[-1] if trace.eval_epochs else 0} epochs, "
        f"final loss {trace.losses[-1] if trace.losses else float('nan'):.6e}"
    )
    return trace


def epochs_to_threshold(
    trace: TrainingTrace,
    omega: float,
    threshold: float = CONVERGENCE_THRESHOLD,
    hold: int = CONVERGENCE_HOLD,
) -> int | None:
    """First evaluation epoch from which ``omega`` stays above threshold for ``hold`` evals.

    A run that stopped early counts as holding through its last evaluation.
    Thresholds above 1 are never reached.
    """
    if threshold <= 0:
        raise ConfigurationError(f"threshold must be positive, got {threshold}")
    if hold < 1:
        raise ConfigurationError(f"hold must be at least 1, got {hold}")
    if threshold > 1:
        return None
    columns = np.flatnonzero(np.isclose(trace.target_omegas, omega))
    if columns.size == 0:
        raise KeyError(f"Frequency {omega} is not a target of this trace")
    above = trace.matrix[:, columns[0]] >= threshold
    rows = above.size
    for start in range(rows):
        window = above[start : start + hold]
        complete = window.size == hold or trace.early_stopped
        if window.size and complete and window.all():
            return trace.eval_epochs[start]
    return None


def options_from_config(training: TrainingConfig) -> TrainingOptions:
    return TrainingOptions(
        lr=training.lr,
        epochs=training.epochs,
        eval_every=training.eval_every,
        grid_size=training.grid_size,
        omega_max_track=training.omega_max_track,
    )
