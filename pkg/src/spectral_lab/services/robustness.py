"""Coefficient robustness under isotropic parameter perturbations."""

import logging

import numpy as np

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.core.workers import worker_pool
from spectral_lab.models.circuit import ParameterTable, ReuploaderCircuit
from spectral_lab.models.experiments import PerturbationReport
from spectral_lab.schemas.run_config import RunConfig
from spectral_lab.services.circuit import circuit_from_config, init_params
from spectral_lab.services.fourier import circuit_snapshot, exact_grid_size
from spectral_lab.services.spectrum import tracked_frequencies
from spectral_lab.services.targets import make_target
from spectral_lab.services.training import options_from_config, train

logger = logging.getLogger(__name__)

DEFAULT_DELTA_COUNT = 20
UNDEFINED_BELOW = 1e-12


def default_deltas() -> np.ndarray:
    """Twenty magnitudes evenly spaced on [0, pi]."""
    return np.linspace(0.0, np.pi, DEFAULT_DELTA_COUNT)


def unit_directions(n_directions: int, size: int, seed: int) -> np.ndarray:
    """Uniform random unit vectors: Gaussian draws scaled to norm 1."""
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((n_directions, size))
    return draws / np.linalg.norm(draws, axis=1, keepdims=True)


def perturb_report(
    circuit: ReuploaderCircuit,
    params_star: ParameterTable,
    deltas: np.ndarray | list[float] | None = None,
    n_directions: int = 100,
    seed: int = 0,
    omegas: list[int] | None = None,
) -> PerturbationReport:
    """Mean ``|c_omega(theta* + delta u)| / |c_omega(theta*)|`` per delta.

    The same directions are reused for every delta. Frequencies whose
    unperturbed coefficient is below 1e-12 get a NaN column.

    Args:
        circuit: Trained circuit.
        params_star: Trained parameters.
        deltas: Perturbation magnitudes, twenty values on [0, pi] by default.
        n_directions: Directions averaged per delta.
        seed: Seed of the direction draw.
        omegas: Tracked positive frequencies. Defaults to the integer
            frequencies the circuit output can carry, up to
            ``settings.default_omega_max_track``.
    """
    if n_directions < 1:
        raise ConfigurationError(f"n_directions must be at least 1, got {n_directions}")
    delta_arr = default_deltas() if deltas is None else np.asarray(deltas, dtype=np.float64)
    if omegas is None:
        omega_arr = tracked_frequencies(circuit, settings.default_omega_max_track)
    else:
        omega_arr = np.asarray(omegas, dtype=np.float64).reshape(-1)
    if omega_arr.size == 0:
        raise ConfigurationError("No frequencies to track")
    band = int(omega_arr.max())
    grid_size = exact_grid_size(circuit.max_frequency, band)

    def magnitudes(params: ParameterTable) -> np.ndarray:
        return np.abs(circuit_snapshot(circuit, params, grid_size, band).restrict(omega_arr).coefficients)

    reference = magnitudes(params_star)
    undefined = reference < UNDEFINED_BELOW
    if undefined.any():
        logger.warning(
            f"Unperturbed coefficient vanishes at omega={omega_arr[undefined].tolist()}; "
            "columns reported as undefined"
        )
    directions = unit_directions(n_directions, len(params_star), seed)
    safe_reference = np.where(undefined, 1.0, reference)

    def row(delta: float) -> np.ndarray:
        total = np.zeros(omega_arr.size)
        for direction in directions:
            total += magnitudes(ParameterTable(params_star.values + delta * direction))
        return total / n_directions / safe_reference

    with worker_pool() as executor:
        matrix = np.vstack(list(executor.map(row, delta_arr.tolist())))
    matrix[:, undefined] = np.nan
    return PerturbationReport(
        deltas=delta_arr, omegas=omega_arr, matrix=matrix, samples_per_delta=n_directions
    )


def robustness_experiment(
    config: RunConfig, phase_seeds: list[int] | None = None
) -> PerturbationReport:
    """Train one model per target phase draw and average their perturbation reports.

    Directions are averaged within each phase draw first, then the
    normalized matrices are averaged over draws, skipping undefined entries.
    """
    phase_seeds = phase_seeds or config.experiment.phase_seeds
    circuit = circuit_from_config(config.circuit)
    options = options_from_config(config.training)
    reports: list[PerturbationReport] = []
    for phase_seed in phase_seeds:
        target = make_target(
            config.target.frequencies, config.target.amplitudes, phase_seed=phase_seed
        )
        params0 = init_params(circuit, config.init.sigma, config.init.seed)
        trace = train(circuit, params0, target, options)
        if trace.aborted or trace.final_params is None:
            logger.warning(f"Training aborted for phase seed {phase_seed}; skipping")
            continue
        reports.append(
            perturb_report(
                circuit,
                trace.final_params,
                config.experiment.deltas,
                config.experiment.n_directions,
                seed=config.init.seed,
                omegas=list(target.frequencies),
            )
        )
    if not reports:
        raise ConfigurationError("Every training run aborted; nothing to perturb")
    stack = np.stack([report.matrix for report in reports])
    defined = np.isfinite(stack)
    counts = defined.sum(axis=0)
    sums = np.where(defined, stack, 0.0).sum(axis=0)
    matrix = np.full(sums.shape, np.nan)
    np.divide(sums, counts, out=matrix, where=counts > 0)
    return PerturbationReport(
        deltas=reports[0].deltas,
        omegas=reports[0].omegas,
        matrix=matrix,
        samples_per_delta=config.experiment.n_directions * len(reports),
    )
