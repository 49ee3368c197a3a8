"""Statistical trends on the desk profile: bias, redundancy, robustness, init and entanglement.

These train dozens of circuits and are deselected by default; run with
``pytest -m slow``.
"""

from itertools import pairwise

import numpy as np
import pytest
from scipy.stats import spearmanr

from spectral_lab.models.circuit import EncodingKind
from spectral_lab.schemas.run_config import RunConfig, profile_config
from spectral_lab.services.circuit import circuit_from_config, init_params
from spectral_lab.services.fourier import mean_coefficient_profile
from spectral_lab.services.robustness import default_deltas, perturb_report
from spectral_lab.services.sweeps import entanglement_sweep, init_sweep
from spectral_lab.services.targets import make_target
from spectral_lab.services.training import epochs_to_threshold, options_from_config, train

pytestmark = pytest.mark.slow

TEN_SEEDS = list(range(10))


@pytest.fixture(scope="module")
def desk() -> RunConfig:
    return profile_config("desk")


def epochs_per_frequency(config: RunConfig, encoding: EncodingKind, seed: int) -> np.ndarray:
    """Epochs to threshold per target frequency; runs that never converge count as ``epochs + 1``."""
    circuit = circuit_from_config(config.circuit.model_copy(update={"encoding": encoding}))
    target = make_target(config.target.frequencies, config.target.amplitudes, phase_seed=config.target.phase_seed)
    trace = train(circuit, init_params(circuit, config.init.sigma, seed), target, options_from_config(config.training))
    censored = config.training.epochs + 1
    epochs = [
        epochs_to_threshold(trace, omega, config.experiment.threshold, config.experiment.hold)
        for omega in config.target.frequencies
    ]
    return np.array([censored if value is None else value for value in epochs], dtype=np.float64)


@pytest.fixture(scope="module")
def constant_epochs(desk: RunConfig) -> np.ndarray:
    return np.vstack([epochs_per_frequency(desk, EncodingKind.constant, seed) for seed in desk.experiment.seeds])


def spread(epochs: np.ndarray) -> float:
    means = np.maximum(epochs.mean(axis=0), 1.0)
    return float(means.max() / means.min())


# ═══════════════════════════════════════════════════════════════════
# Spectral bias
# ═══════════════════════════════════════════════════════════════════


def test_higher_frequencies_converge_later(desk, constant_epochs):
    frequencies = desk.target.frequencies
    rhos = [spearmanr(frequencies, row).statistic for row in constant_epochs]
    assert np.mean(rhos) >= 0.7


def test_ternary_encoding_flattens_the_bias(desk, constant_epochs):
    ternary = np.vstack([epochs_per_frequency(desk, EncodingKind.ternary, seed) for seed in desk.experiment.seeds])
    assert spread(ternary) < spread(constant_epochs)


# ═══════════════════════════════════════════════════════════════════
# Redundancy and gradients
# ═══════════════════════════════════════════════════════════════════


def test_gradient_tracks_redundancy_at_small_angles(desk):
    circuit = circuit_from_config(desk.circuit)
    rhos = [mean_coefficient_profile(circuit, 0.1, [seed])[1] for seed in TEN_SEEDS]
    assert sum(rho > 0 for rho in rhos) >= 9


# ═══════════════════════════════════════════════════════════════════
# Robustness
# ═══════════════════════════════════════════════════════════════════


def test_low_frequencies_survive_perturbation_better(desk):
    circuit = circuit_from_config(desk.circuit)
    target = make_target(desk.target.frequencies, desk.target.amplitudes, phase_seed=desk.target.phase_seed)
    options = options_from_config(desk.training)
    lowest, highest = min(desk.target.frequencies), max(desk.target.frequencies)
    mid_range = default_deltas()[6:14]
    wins = 0
    for seed in TEN_SEEDS:
        trace = train(circuit, init_params(circuit, desk.init.sigma, seed), target, options)
        assert trace.final_params is not None
        report = perturb_report(circuit, trace.final_params, mid_range, n_directions=100, seed=seed, omegas=[lowest, highest])
        low, high = np.nanmean(report.matrix, axis=0)
        wins += int(low >= high)
    assert wins >= 8


# ═══════════════════════════════════════════════════════════════════
# Initialization scale
# ═══════════════════════════════════════════════════════════════════


def test_small_initialization_starts_with_more_power(desk):
    table = init_sweep(desk, sigma_list=[0.1, 10.0], seeds=TEN_SEEDS)
    power = table.mean_abs_sq[:, table.omegas > 0].sum(axis=1)
    assert power[0] > power[1]


# ═══════════════════════════════════════════════════════════════════
# Entanglement
# ═══════════════════════════════════════════════════════════════════


def test_more_cnots_speed_up_the_top_frequency(desk):
    table = entanglement_sweep(desk, seeds=TEN_SEEDS)
    top = max(desk.target.frequencies)
    labels = ["none", "random(1)", "ladder", "all_to_all"]
    epochs = [table.mean_epochs(label, top) for label in labels]
    ordered = [np.inf if value is None else value for value in epochs]
    inversions = sum(later > earlier for earlier, later in pairwise(ordered))
    assert inversions <= 1
