"""Numerical checks of the gradient, small-angle and robustness bounds."""

import logging
import warnings

import numpy as np
from scipy.special import gammaln

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError, InsufficientSamplesWarning
from spectral_lab.core.workers import worker_pool
from spectral_lab.models.circuit import (
    EncodingKind,
    EntanglementKind,
    Observable,
    ParameterTable,
    ReuploaderCircuit,
)
from spectral_lab.models.spectra import FourierSnapshot, FrequencySpectrum
from spectral_lab.models.theory import BoundReport, BoundRow, MomentTable, SmallAngleStats
from spectral_lab.services import targets
from spectral_lab.services.circuit import build_circuit, init_params, make_encoding
from spectral_lab.services.fourier import (
    circuit_snapshot,
    coefficient_jacobian,
    exact_grid_size,
    projected_coefficients,
    sinc_weights,
)
from spectral_lab.services.spectrum import redundancy_profile, tracked_frequencies

logger = logging.getLogger(__name__)

MIN_MONTE_CARLO_SAMPLES = 30
SMALL_ANGLE_MAX_SIGMA = 0.3


def trace_norm(obs: Observable, n: int) -> float:
    """Sum of absolute eigenvalues of a diagonal observable."""
    return float(np.sum(np.abs(obs.diagonal(n))))


# ============== Gradient bounds ==============
def _target_coefficients(target: FourierSnapshot, omegas: np.ndarray) -> np.ndarray:
    values = np.zeros(omegas.size, dtype=np.complex128)
    for i, omega in enumerate(omegas):
        hits = np.flatnonzero(np.isclose(target.omegas, omega, atol=1e-12))
        if hits.size:
            values[i] = target.coefficients[hits[0]]
    return values


def thm1_report(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    target_snapshot: FourierSnapshot,
    tolerance: float | None = None,
) -> BoundReport:
    """Check ``|dL(omega)/dtheta_k| <= 4 R(omega) ||O||_tr |c_D(omega)|``.

    One row per parameter and non-negative tracked frequency. Coefficients
    are taken on an alias-free grid, so they are exact for the circuit.

    Args:
        circuit: Circuit with an integer spectrum.
        params: Parameters at which to check the bound.
        target_snapshot: Target coefficients on integer frequencies.
        tolerance: Allowed negative slack, ``settings.bound_tolerance`` by default.

    Returns:
        Report whose ``violations`` must be zero.

    Raises:
        ConfigurationError: For non-integer spectra (use ``thm2_report``).
    """
    spectrum = redundancy_profile(circuit.encoding, circuit.n, circuit.L)
    if not spectrum.is_integer():
        raise ConfigurationError("Spectrum is not integer-valued; use thm2_report instead")
    band = int(np.max(np.abs(target_snapshot.omegas)))
    omegas = np.arange(0, band + 1, dtype=np.float64)
    grid_size = exact_grid_size(circuit.max_frequency, band)

    model = circuit_snapshot(circuit, params, grid_size, band).restrict(omegas).coefficients
    difference = model - _target_coefficients(target_snapshot, omegas)
    jac = coefficient_jacobian(circuit, params, omegas, grid_size)
    redundancy = np.array([spectrum.redundancy(omega) for omega in omegas], dtype=np.float64)
    norm = trace_norm(circuit.observable, circuit.n)

    lhs = np.abs(2 * np.real(np.conj(difference)[:, None] * jac))
    rhs = 4 * redundancy * norm * np.abs(difference)
    report = BoundReport(tolerance=settings.bound_tolerance if tolerance is None else tolerance)
    for a, omega in enumerate(omegas):
        for k in range(jac.shape[1]):
            report.rows.append(BoundRow(k=k, omega=float(omega), lhs=float(lhs[a, k]), rhs=float(rhs[a])))
    return report


def sinc_bound_rows(
    omegas: np.ndarray,
    c_model: np.ndarray,
    dc_model: np.ndarray,
    c_target: np.ndarray,
    redundancy: np.ndarray,
    norm: float,
    tolerance: float | None = None,
) -> BoundReport:
    """Sinc-weighted bound on raw coefficient arrays.

    lhs is ``|dL(omega)/dtheta_k|`` under the assignment
    ``L(omega) = Re(c_D(omega) sum_omega' conj(c_D(omega')) w(omega - omega'))``;
    rhs is ``2 ||O||_tr sum_omega' |sinc(pi(omega - omega'))|
    (|c_D(omega')| R(omega) + |c_D(omega)| R(omega'))``.

    Args:
        omegas: Frequencies, shape ``(K,)``.
        c_model: Model coefficients, shape ``(K,)``.
        dc_model: Coefficient gradients, shape ``(K, P)``.
        c_target: Target coefficients, shape ``(K,)``.
        redundancy: ``R(omega)`` per frequency.
        norm: Trace norm of the observable.
        tolerance: Allowed negative slack.

    Returns:
        Rows for every parameter and every omega >= 0.
    """
    omegas = np.asarray(omegas, dtype=np.float64)
    difference = np.asarray(c_model) - np.asarray(c_target)
    dc_model = np.asarray(dc_model).reshape(omegas.size, -1)
    redundancy = np.asarray(redundancy, dtype=np.float64)
    weights = sinc_weights(omegas)
    cross = weights @ np.conj(difference)
    cross_grad = weights @ np.conj(dc_model)
    lhs = np.abs(np.real(dc_model * cross[:, None] + difference[:, None] * cross_grad))

    magnitude = np.abs(np.sinc(np.subtract.outer(omegas, omegas)))
    abs_diff = np.abs(difference)
    rhs = 2 * norm * (
        redundancy * (magnitude @ abs_diff) + abs_diff * (magnitude @ redundancy)
    )
    report = BoundReport(tolerance=settings.bound_tolerance if tolerance is None else tolerance)
    for a in np.flatnonzero(omegas >= 0):
        for k in range(dc_model.shape[1]):
            report.rows.append(
                BoundRow(k=k, omega=float(omegas[a]), lhs=float(lhs[a, k]), rhs=float(rhs[a]))
            )
    return report


def thm2_report(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    target_snapshot: FourierSnapshot,
    spectrum: FrequencySpectrum | None = None,
    tolerance: float | None = None,
) -> BoundReport:
    """Sinc-weighted bound for arbitrary real spectra.

    Model coefficients and their gradients are least-squares projections of
    the sampled output and parameter-shift derivatives onto the spectrum's
    atoms. Target frequencies outside ``target_snapshot`` count as zero.
    """
    spectrum = spectrum or redundancy_profile(circuit.encoding, circuit.n, circuit.L)
    omegas = spectrum.omegas()
    model, dc_model = projected_coefficients(circuit, params, omegas)
    redundancy = np.array([spectrum.redundancy(omega) for omega in omegas], dtype=np.float64)
    return sinc_bound_rows(
        omegas,
        model,
        dc_model,
        _target_coefficients(target_snapshot, omegas),
        redundancy,
        trace_norm(circuit.observable, circuit.n),
        tolerance,
    )


# ============== Gaussian moments ==============
def gaussian_abs_moment(r: int, sigma: float) -> float:
    """``E|X|^r`` for ``X ~ N(0, sigma^2)``: ``sigma^r 2^(r/2) Gamma((r+1)/2) / sqrt(pi)``."""
    if r < 0 or int(r) != r:
        raise ConfigurationError(f"Moment order must be a non-negative integer, got {r}")
    if sigma < 0:
        raise ConfigurationError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return 1.0 if r == 0 else 0.0
    log_moment = (
        r * np.log(sigma) + 0.5 * r * np.log(2.0) + gammaln((r + 1) / 2) - 0.5 * np.log(np.pi)
    )
    return float(np.exp(log_moment))


def moment_table(r_max: int, sigma: float) -> MomentTable:
    return MomentTable(
        sigma=sigma, entries={r: gaussian_abs_moment(r, sigma) for r in range(r_max + 1)}
    )


# ============== Small-angle statistics ==============
def small_angle_grad_stats(
    circuit: ReuploaderCircuit,
    sigma: float,
    n_samples: int,
    seed: int,
    omega_max_track: int | None = None,
) -> SmallAngleStats:
    """Monte Carlo mean and RMS of ``|dc_omega/dtheta_k|`` at ``theta ~ N(0, sigma^2 I)``.

    Sample i uses seed ``seed + i``; statistics are combined in sample order.
    Without ``omega_max_track`` the integer frequencies the circuit output can
    carry are tracked, up to ``settings.default_omega_max_track``.

    Raises:
        ConfigurationError: If sigma leaves the small-angle regime (> 0.3).
    """
    if not 0 <= sigma <= SMALL_ANGLE_MAX_SIGMA:
        raise ConfigurationError(
            f"sigma={sigma} outside the small-angle regime [0, {SMALL_ANGLE_MAX_SIGMA}]"
        )
    if not all(float(beta).is_integer() for beta in circuit.encoding.betas):
        raise ConfigurationError("Small-angle statistics need integer encoding scales")
    if n_samples < MIN_MONTE_CARLO_SAMPLES:
        warnings.warn(
            f"{n_samples} samples is below {MIN_MONTE_CARLO_SAMPLES}; statistics are unreliable",
            InsufficientSamplesWarning,
            stacklevel=2,
        )
    if omega_max_track is None:
        omegas = tracked_frequencies(circuit, settings.default_omega_max_track, include_zero=True)
    else:
        omegas = np.arange(0, omega_max_track + 1, dtype=np.float64)
    band = int(omegas[-1])
    grid_size = exact_grid_size(circuit.max_frequency, band)

    def sample(index: int) -> np.ndarray:
        params = init_params(circuit, sigma, seed + index)
        return np.abs(coefficient_jacobian(circuit, params, omegas, grid_size))

    with worker_pool() as executor:
        magnitudes = np.stack(list(executor.map(sample, range(n_samples))))
    return SmallAngleStats(
        sigma=sigma,
        omegas=omegas,
        mean_abs=magnitudes.mean(axis=(0, 2)),
        rms=np.sqrt((magnitudes**2).mean(axis=(0, 2))),
        n_samples=n_samples,
    )


def small_angle_slopes(
    circuit: ReuploaderCircuit,
    sigmas: list[float],
    n_samples: int,
    seed: int,
    omega_max_track: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Log-log slope of mean ``|dc_omega/dtheta|`` against sigma, per omega.

    Frequencies whose statistics vanish at some sigma get a NaN slope.
    """
    stats = [small_angle_grad_stats(circuit, s, n_samples, seed, omega_max_track) for s in sigmas]
    omegas = stats[0].omegas
    means = np.stack([s.mean_abs for s in stats])
    log_sigma = np.log(np.asarray(sigmas, dtype=np.float64))
    slopes = np.full(omegas.size, np.nan)
    for a in range(omegas.size):
        if np.all(means[:, a] > 0):
            slopes[a] = np.polyfit(log_sigma, np.log(means[:, a]), 1)[0]
    return omegas, slopes


# ============== Robustness ==============
def robustness_bound(sigma_a: float, a_bar: float, kappa: float, rho: float, R: int) -> float:
    """Normalized RMS deviation bound ``(sigma_a / (kappa a_bar)) sqrt((1 + (R-1) rho) / R)``."""
    if R < 1 or int(R) != R:
        raise ConfigurationError(f"Redundancy must be a positive integer, got {R}")
    if not 0 < kappa <= 1:
        raise ConfigurationError(f"kappa must lie in (0, 1], got {kappa}")
    if not 0 <= rho <= 1:
        raise ConfigurationError(f"rho must lie in [0, 1], got {rho}")
    if a_bar <= 0:
        raise ConfigurationError(f"a_bar must be positive, got {a_bar}")
    if sigma_a < 0:
        raise ConfigurationError(f"sigma_a must be non-negative, got {sigma_a}")
    return float(sigma_a / (kappa * a_bar) * np.sqrt((1 + (R - 1) * rho) / R))


# ============== Randomized suite ==============
_RANDOM_ENCODINGS = (
    EncodingKind.constant,
    EncodingKind.linear,
    EncodingKind.binary,
    EncodingKind.ternary,
)
_RANDOM_LAYOUTS = (
    EntanglementKind.none,
    EntanglementKind.ladder,
    EntanglementKind.one_d_hop,
    EntanglementKind.all_to_all,
)
_HALF_INTEGER_BETAS = (0.5, 1.0, 1.5)
FULL_SCALE_DRAWS = 3


def _random_target(rng: np.random.Generator, band: int) -> FourierSnapshot:
    count = int(rng.integers(1, min(band, 4) + 1))
    frequencies = sorted(rng.choice(np.arange(1, band + 1), size=count, replace=False).tolist())
    amplitudes = rng.uniform(0.2, 1.0, size=count).tolist()
    target = targets.make_target(frequencies, amplitudes, phase_seed=int(rng.integers(0, 2**31)))
    return targets.target_snapshot(target, exact_grid_size(band, band), band)


def random_bound_instance(
    rng: np.random.Generator, max_qubits: int = 3, max_layers: int = 3, sigma: float = 0.5
) -> tuple[ReuploaderCircuit, ParameterTable, FourierSnapshot]:
    """Random integer-spectrum circuit, Gaussian parameters and a random target."""
    n = int(rng.integers(1, max_qubits + 1))
    L = int(rng.integers(1, max_layers + 1))
    kind = _RANDOM_ENCODINGS[int(rng.integers(0, len(_RANDOM_ENCODINGS)))]
    layout = _RANDOM_LAYOUTS[int(rng.integers(0, len(_RANDOM_LAYOUTS)))]
    observable = Observable(qubit=int(rng.integers(0, n)))
    circuit = build_circuit(n, L, make_encoding(kind, n), layout, observable)
    params = init_params(circuit, sigma, int(rng.integers(0, 2**31)))
    snapshot = _random_target(rng, int(circuit.max_frequency))
    return circuit, params, snapshot


def random_half_integer_instance(
    rng: np.random.Generator, sigma: float = 0.5
) -> tuple[ReuploaderCircuit, ParameterTable, FourierSnapshot]:
    """Random n, L <= 2 circuit on a half-integer lattice with an integer target."""
    n = int(rng.integers(1, 3))
    L = int(rng.integers(1, 3))
    betas = [1.5] + [float(rng.choice(_HALF_INTEGER_BETAS)) for _ in range(n - 1)]
    encoding = make_encoding(EncodingKind.custom, n, betas)
    layout = _RANDOM_LAYOUTS[int(rng.integers(0, len(_RANDOM_LAYOUTS)))]
    circuit = build_circuit(n, L, encoding, layout, Observable(qubit=int(rng.integers(0, n))))
    params = init_params(circuit, sigma, int(rng.integers(0, 2**31)))
    snapshot = _random_target(rng, int(np.floor(circuit.max_frequency)))
    return circuit, params, snapshot


def verify_bounds(
    profile: str = "desk",
    instances: int = 100,
    seed: int = 0,
    sigma: float = 0.5,
) -> tuple[BoundReport, dict[str, float | int]]:
    """Randomized falsification run of both gradient bounds.

    ``instances`` integer-spectrum circuits (n, L <= 3) are checked with
    ``thm1_report`` and a quarter as many half-integer circuits with
    ``thm2_report``. The ``full`` profile adds constant-encoding draws at
    n=5, L=20.

    Returns:
        Combined report and a summary ``{instances, violations, min_slack}``.
    """
    rng = np.random.default_rng(seed)
    combined = BoundReport(tolerance=settings.bound_tolerance)
    checked = 0

    def record(report: BoundReport, circuit: ReuploaderCircuit, label: str) -> None:
        nonlocal checked
        checked += 1
        if report.violations:
            logger.warning(
                f"{label} instance {checked}: {report.violations} violations "
                f"(n={circuit.n}, L={circuit.L}, betas={circuit.encoding.betas})"
            )
        combined.extend(report)

    for _ in range(instances):
        circuit, params, target = random_bound_instance(rng, sigma=sigma)
        record(thm1_report(circuit, params, target), circuit, "integer")
    for _ in range(max(1, instances // 4)):
        circuit, params, target = random_half_integer_instance(rng, sigma)
        record(thm2_report(circuit, params, target), circuit, "half-integer")
    if profile == "full":
        large = build_circuit(5, 20, EncodingKind.constant, EntanglementKind.ladder)
        for _ in range(FULL_SCALE_DRAWS):
            params = init_params(large, sigma, int(rng.integers(0, 2**31)))
            snapshot = _random_target(rng, int(large.max_frequency))
            record(thm1_report(large, params, snapshot), large, "full-scale")

    summary: dict[str, float | int] = {
        "instances": checked,
        "violations": combined.violations,
        "min_slack": combined.min_slack,
    }
    logger.info(f"Verified {checked} instances: {combined.violations} violations")
    return combined, summary
