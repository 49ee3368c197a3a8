"""Training sweeps over entanglement layouts, init scales and encodings."""

import logging

import numpy as np
import pandas as pd

from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.core.workers import worker_pool
from spectral_lab.models.circuit import EncodingKind
from spectral_lab.models.experiments import (
    ConvergenceRow,
    ConvergenceTable,
    InitSweepTable,
    TargetFunction,
    TrainingTrace,
)
from spectral_lab.schemas.run_config import CircuitConfig, LayoutConfig, RunConfig
from spectral_lab.services.circuit import circuit_from_config, init_params
from spectral_lab.services.fourier import circuit_snapshot
from spectral_lab.services.spectrum import tracked_frequencies
from spectral_lab.services.targets import make_target
from spectral_lab.services.training import epochs_to_threshold, options_from_config, train

logger = logging.getLogger(__name__)


def _config_target(config: RunConfig) -> TargetFunction:
    return make_target(
        config.target.frequencies, config.target.amplitudes, phase_seed=config.target.phase_seed
    )


def _train_seeds(config: RunConfig, circuit_config: CircuitConfig, seeds: list[int]) -> list[TrainingTrace]:
    """Train one model per seed; the seed drives both init angles and random layouts."""
    target = _config_target(config)
    options = options_from_config(config.training)

    def run(seed: int) -> TrainingTrace:
        circuit = circuit_from_config(circuit_config, entanglement_seed=seed)
        params0 = init_params(circuit, config.init.sigma, seed)
        return train(circuit, params0, target, options)

    with worker_pool() as executor:
        return list(executor.map(run, seeds))


def _mean_epochs(
    traces: list[TrainingTrace], omega: int, threshold: float, hold: int
) -> tuple[float | None, int]:
    epochs = [
        value
        for trace in traces
        if not trace.aborted
        and (value := epochs_to_threshold(trace, omega, threshold, hold)) is not None
    ]
    if not epochs:
        return None, 0
    return float(np.mean(epochs)), len(epochs)


# ============== Entanglement ==============
def entanglement_sweep(
    base_config: RunConfig,
    layouts: list[LayoutConfig] | None = None,
    seeds: list[int] | None = None,
) -> ConvergenceTable:
    """Epochs to converge per target frequency for each CNOT layout.

    Runs that never reach the threshold (or abort) are left out of the
    mean and reported through ``converged_runs``; a row with no converged
    run has ``epochs_to_converge`` None.
    """
    layouts = layouts if layouts is not None else base_config.experiment.layouts
    seeds = seeds if seeds is not None else base_config.experiment.seeds
    if not layouts:
        raise ConfigurationError("Entanglement sweep needs at least one layout")
    threshold, hold = base_config.experiment.threshold, base_config.experiment.hold
    table = ConvergenceTable()
    for layout in layouts:
        circuit_config = base_config.circuit.model_copy(
            update={
                "entanglement": layout.generator,
                "entanglement_count": layout.count,
                "entanglement_seed": None,
            }
        )
        label = layout.label()
        traces = _train_seeds(base_config, circuit_config, seeds)
        table.traces[label] = traces
        cnots = np.mean(
            circuit_from_config(circuit_config, entanglement_seed=seeds[0]).entanglement.cnots_per_block()
        )
        for omega in base_config.target.frequencies:
            mean, converged = _mean_epochs(traces, omega, threshold, hold)
            table.rows.append(
                ConvergenceRow(
                    layout=label,
                    cnots_per_layer=float(cnots),
                    omega=omega,
                    epochs_to_converge=mean,
                    runs=len(traces),
                    converged_runs=converged,
                )
            )
        logger.info(f"Layout {label}: {len(traces)} runs finished")
    return table


# ============== Initialization ==============
def init_sweep(
    base_config: RunConfig,
    sigma_list: list[float] | None = None,
    seeds: list[int] | None = None,
    run_training: bool = False,
) -> InitSweepTable:
    """Mean initial ``|c_omega|^2`` over seeds for each init std-dev.

    Frequencies run over the integers up to ``training.omega_max_track``
    that the circuit output can carry, zero included.

    Args:
        base_config: Circuit, grid and target settings.
        sigma_list: Standard deviations of the initial angles.
        seeds: Init seeds averaged per sigma.
        run_training: Also train one model per (sigma, seed) and keep the traces.
    """
    sigma_list = sigma_list if sigma_list is not None else base_config.experiment.sigmas
    seeds = seeds if seeds is not None else base_config.experiment.seeds
    if not sigma_list:
        raise ConfigurationError("Init sweep needs at least one sigma")
    circuit = circuit_from_config(base_config.circuit)
    band = base_config.training.omega_max_track
    grid_size = base_config.training.grid_size
    omegas = tracked_frequencies(circuit, band, include_zero=True)

    rows = []
    traces: dict[float, list[TrainingTrace]] = {}
    for sigma in sigma_list:
        powers = [
            np.abs(
                circuit_snapshot(circuit, init_params(circuit, sigma, seed), grid_size, band)
                .restrict(omegas)
                .coefficients
            )
            ** 2
            for seed in seeds
        ]
        rows.append(np.mean(powers, axis=0))
        if run_training:
            sigma_config = base_config.model_copy(
                update={"init": base_config.init.model_copy(update={"sigma": sigma})}
            )
            traces[sigma] = _train_seeds(sigma_config, base_config.circuit, seeds)
        logger.info(f"Init sweep sigma={sigma:g} (sigma^2={sigma**2:g}) done")
    return InitSweepTable(
        sigmas=np.asarray(sigma_list, dtype=np.float64),
        omegas=omegas,
        mean_abs_sq=np.vstack(rows),
        seeds=tuple(seeds),
        traces=traces,
    )


# ============== Encodings ==============
def encoding_comparison(
    base_config: RunConfig,
    encodings: list[EncodingKind] | None = None,
    seeds: list[int] | None = None,
) -> pd.DataFrame:
    """Mean epochs to threshold per encoding and target frequency.

    Returns:
        Frame with columns encoding, omega, mean_epochs, converged_runs,
        runs and epochs_ratio (max/min of mean_epochs across omega for the
        encoding, NaN unless every frequency converged).
    """
    encodings = encodings if encodings is not None else base_config.experiment.encodings
    seeds = seeds if seeds is not None else base_config.experiment.seeds
    threshold, hold = base_config.experiment.threshold, base_config.experiment.hold
    records = []
    for kind in encodings:
        circuit_config = base_config.circuit.model_copy(update={"encoding": kind, "betas": None})
        traces = _train_seeds(base_config, circuit_config, seeds)
        means = []
        for omega in base_config.target.frequencies:
            mean, converged = _mean_epochs(traces, omega, threshold, hold)
            means.append(mean)
            records.append(
                {
                    "encoding": kind.value,
                    "omega": omega,
                    "mean_epochs": np.nan if mean is None else mean,
                    "converged_runs": converged,
                    "runs": len(traces),
                }
            )
        ratio = np.nan
        if all(mean is not None and mean > 0 for mean in means):
            values = [float(mean) for mean in means if mean is not None]
            ratio = max(values) / min(values)
        for record in records[-len(means) :]:
            record["epochs_ratio"] = ratio
        logger.info(f"Encoding {kind.value}: epochs ratio {ratio:.3f}")
    return pd.DataFrame(
        records,
        columns=["encoding", "omega", "mean_epochs", "converged_runs", "runs", "epochs_ratio"],
    )
