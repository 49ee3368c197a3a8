"""Fourier coefficients of sampled circuit outputs and per-frequency losses.

Convention: ``c_omega = (1/M) sum_m f(x_m) exp(-i omega x_m)`` on the grid
``x_m = 2 pi m / M``, so that ``f(x) = sum_omega c_omega exp(i omega x)``.
"""

import itertools
import logging
from collections.abc import Iterable

import numpy as np
import pandas as pd
from scipy.linalg import hadamard
from scipy.stats import spearmanr

from spectral_lab.core.exceptions import AliasingError, ConfigurationError, SizeError
from spectral_lab.models.circuit import ParameterTable, ReuploaderCircuit
from spectral_lab.models.spectra import FourierSnapshot, LossSpectrum
from spectral_lab.services.circuit import init_params
from spectral_lab.services.gradients import jacobian_grid
from spectral_lab.services.simcore import block_unitary, evaluate_grid
from spectral_lab.services.spectrum import lattice_scale, redundancy_profile

logger = logging.getLogger(__name__)

DECOMPOSITION_MAX_QUBITS = 2
DECOMPOSITION_MAX_LAYERS = 2


def sample_grid(M: int) -> np.ndarray:
    """Equally spaced points ``2 pi m / M`` on [0, 2pi)."""
    if M < 2:
        raise ConfigurationError(f"Grid needs at least 2 points, got {M}")
    return 2 * np.pi * np.arange(M) / M


def exact_grid_size(max_frequency: float, omega_max_track: int, minimum: int = 8) -> int:
    """Smallest power of two grid on which the tracked band is alias-free."""
    needed = max(2 * omega_max_track + 1, int(np.ceil(max_frequency)) + omega_max_track + 1, minimum)
    return int(2 ** int(np.ceil(np.log2(needed))))


def _check_band(M: int, omega_max_track: int) -> None:
    if omega_max_track < 0:
        raise ConfigurationError("omega_max_track must be non-negative")
    if omega_max_track >= M / 2:
        raise AliasingError(
            f"omega_max_track={omega_max_track} must stay below the Nyquist "
            f"frequency M/2={M / 2} of a {M}-point grid"
        )


def _dft_rows(values: np.ndarray, omega_max_track: int) -> tuple[np.ndarray, np.ndarray]:
    """DFT along axis 0 restricted to ``-W..W``; returns (omegas, coefficients)."""
    M = values.shape[0]
    _check_band(M, omega_max_track)
    omegas = np.arange(-omega_max_track, omega_max_track + 1)
    spectrum = np.fft.fft(values, axis=0) / M
    return omegas.astype(np.float64), spectrum[omegas % M]


def dft_coefficients(samples: np.ndarray, omega_max_track: int) -> FourierSnapshot:
    """Fourier snapshot of grid samples for ``|omega| <= omega_max_track``.

    Raises:
        AliasingError: If the tracked band reaches the Nyquist limit.
    """
    samples = np.asarray(samples, dtype=np.float64).reshape(-1)
    omegas, coefficients = _dft_rows(samples, omega_max_track)
    return FourierSnapshot(omegas=omegas, coefficients=coefficients, grid_size=samples.size)


def circuit_snapshot(
    circuit: ReuploaderCircuit, params: ParameterTable, grid_size: int, omega_max_track: int
) -> FourierSnapshot:
    """Sample the circuit on a grid and take its snapshot."""
    return dft_coefficients(evaluate_grid(circuit, params, sample_grid(grid_size)), omega_max_track)


def fit_coefficients(
    samples: np.ndarray, x_grid: np.ndarray, omegas: Iterable[float]
) -> FourierSnapshot:
    """Least-squares coefficients on ``exp(i omega x)`` atoms for real omegas."""
    samples = np.asarray(samples, dtype=np.float64).reshape(-1)
    omega_arr = np.asarray(list(omegas), dtype=np.float64)
    atoms = np.exp(1j * np.outer(np.asarray(x_grid, dtype=np.float64), omega_arr))
    coefficients, *_ = np.linalg.lstsq(atoms, samples.astype(np.complex128), rcond=None)
    return FourierSnapshot(omegas=omega_arr, coefficients=coefficients, grid_size=samples.size)


def coefficient_jacobian(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    omegas: np.ndarray,
    grid_size: int | None = None,
) -> np.ndarray:
    """``dc_omega / dtheta_k`` for integer omegas, shape ``(len(omegas), P)``.

    The DFT is linear, so the derivative of a coefficient is the DFT of the
    parameter-shift derivative samples.
    """
    omegas = np.asarray(omegas, dtype=np.float64)
    if np.any(np.abs(omegas - np.round(omegas)) > 1e-12):
        raise ConfigurationError("Coefficient gradients need integer frequencies")
    band = int(np.max(np.abs(omegas))) if omegas.size else 0
    M = grid_size or exact_grid_size(circuit.max_frequency, band)
    _check_band(M, band)
    jac = jacobian_grid(circuit, params, sample_grid(M))
    spectrum = np.fft.fft(jac, axis=0) / M
    return spectrum[np.round(omegas).astype(np.int64) % M]


def coefficient_gradients(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    omega_set: Iterable[int],
    grid_size: int | None = None,
) -> dict[int, np.ndarray]:
    """Map from each frequency to the complex gradient vector of ``c_omega``."""
    omegas = np.array(sorted(set(omega_set)), dtype=np.float64)
    jac = coefficient_jacobian(circuit, params, omegas, grid_size)
    return {int(omega): jac[i] for i, omega in enumerate(omegas)}


def projected_coefficients(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    omegas: np.ndarray,
    grid_size: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients and their gradients on arbitrary real frequencies.

    Output samples and parameter-shift derivatives are projected onto the
    ``exp(i omega x)`` atoms by least squares, which is exact when
    ``omegas`` covers the circuit spectrum.

    Returns:
        Tuple ``(c, dc)`` of shapes ``(K,)`` and ``(K, P)``.
    """
    omegas = np.asarray(omegas, dtype=np.float64)
    band = int(np.ceil(np.max(np.abs(omegas)))) if omegas.size else 0
    M = grid_size or 2 * exact_grid_size(circuit.max_frequency, band)
    xs = sample_grid(M)
    atoms = np.exp(1j * np.outer(xs, omegas))
    samples = evaluate_grid(circuit, params, xs).astype(np.complex128)
    jac = jacobian_grid(circuit, params, xs).astype(np.complex128)
    solution, *_ = np.linalg.lstsq(atoms, np.column_stack([samples, jac]), rcond=None)
    return solution[:, 0], solution[:, 1:]


def mean_coefficient_profile(
    circuit: ReuploaderCircuit,
    sigma: float,
    seeds: Iterable[int],
    grid_size: int | None = None,
) -> tuple[pd.DataFrame, float]:
    """Mean ``|c_omega|`` and total gradient ``G(omega)`` over random models.

    Each seed draws ``theta ~ N(0, sigma^2)``. Rows cover ``omega >= 0`` of
    the spectrum, joined with ``R(omega)``.

    Returns:
        Frame with columns omega, redundancy, mean_abs_coefficient,
        total_gradient, and the Spearman correlation between G and R.
    """
    spectrum = redundancy_profile(circuit.encoding, circuit.n, circuit.L)
    all_omegas = spectrum.omegas()
    omegas = all_omegas[all_omegas >= 0]
    seeds = list(seeds)
    if not seeds:
        raise ConfigurationError("Coefficient profile needs at least one seed")
    magnitudes = np.zeros(omegas.size)
    gradients = np.zeros(omegas.size)
    for seed in seeds:
        params = init_params(circuit, sigma, seed)
        if spectrum.is_integer():
            band = int(omegas[-1])
            M = grid_size or exact_grid_size(circuit.max_frequency, band)
            coefficients = circuit_snapshot(circuit, params, M, band).restrict(omegas).coefficients
            jac = coefficient_jacobian(circuit, params, omegas, M)
        else:
            coefficients, jac = projected_coefficients(circuit, params, all_omegas, grid_size)
            coefficients, jac = coefficients[all_omegas >= 0], jac[all_omegas >= 0]
        magnitudes += np.abs(coefficients)
        gradients += np.abs(jac).sum(axis=1)
    frame = pd.DataFrame(
        {
            "omega": omegas,
            "redundancy": [spectrum.redundancy(omega) for omega in omegas],
            "mean_abs_coefficient": magnitudes / len(seeds),
            "total_gradient": gradients / len(seeds),
        }
    )
    rho = float("nan")
    if omegas.size > 1:
        rho = float(
            spearmanr(frame["total_gradient"], frame["redundancy"].astype(float)).statistic
        )
    logger.info(f"Coefficient profile over {len(seeds)} seeds: Spearman(G, R) = {rho:.3f}")
    return frame, rho


def loss_decomposition(
    model_snapshot: FourierSnapshot, target_snapshot: FourierSnapshot
) -> LossSpectrum:
    """Per-frequency loss ``|c_omega(model) - c_omega(target)|^2``."""
    if not np.array_equal(model_snapshot.omegas, target_snapshot.omegas):
        raise ConfigurationError("Model and target snapshots track different frequencies")
    per_omega = np.abs(model_snapshot.coefficients - target_snapshot.coefficients) ** 2
    return LossSpectrum(
        omegas=model_snapshot.omegas.copy(), per_omega=per_omega, total=float(np.sum(per_omega))
    )


def sinc_weights(omegas: np.ndarray) -> np.ndarray:
    """Overlaps ``exp(i pi d) sinc(pi d)`` with ``d = omega - omega'``."""
    delta = np.subtract.outer(omegas, omegas)
    # np.sinc(d) = sin(pi d) / (pi d), with sinc(0) = 1.
    return np.exp(1j * np.pi * delta) * np.sinc(delta)


def nonint_loss_assignment(
    model_snapshot: FourierSnapshot,
    target_snapshot: FourierSnapshot,
    spectrum: Iterable[float],
) -> LossSpectrum:
    """Loss per frequency for non-orthogonal atoms.

    ``L(omega) = Re(c_D(omega) * sum_omega' conj(c_D(omega')) w(omega - omega'))``
    with ``w(d) = exp(i pi d) sinc(pi d)``; the sum over omega equals
    ``(1/2pi) int_0^{2pi} D(x)^2 dx``.
    """
    omegas = np.asarray(list(spectrum), dtype=np.float64)
    model = model_snapshot.restrict(omegas).coefficients
    target = target_snapshot.restrict(omegas).coefficients
    difference = model - target
    weights = sinc_weights(omegas)
    per_omega = np.real(difference * (weights @ np.conj(difference)))
    return LossSpectrum(omegas=omegas, per_omega=per_omega, total=float(np.sum(per_omega)))


# ============== Path decomposition oracle ==============
def decomposition_terms(
    circuit: ReuploaderCircuit, params: ParameterTable
) -> tuple[FourierSnapshot, dict[float, int]]:
    """Coefficients as sums of path terms ``a_{k,j}`` and the term count per omega.

    Encoding layers are diagonalised as ``H^n diag(exp(-i Lambda x)) H^n``;
    every pair of multi-indices contributes one term to ``c_{Lambda_k - Lambda_j}``.

    Raises:
        SizeError: For more than two qubits or two layers.
    """
    n, L = circuit.n, circuit.L
    if n > DECOMPOSITION_MAX_QUBITS or L > DECOMPOSITION_MAX_LAYERS:
        raise SizeError(f"Decomposition limited to n <= 2, L <= 2, got n={n}, L={L}")
    d = 2**n
    scale = lattice_scale(circuit.encoding.betas)
    hadamards = hadamard(d).astype(np.complex128) / np.sqrt(d)
    blocks = [block_unitary(block, n, params.values) for block in circuit.blocks]

    bits = (np.arange(d)[:, None] >> (n - 1 - np.arange(n))) & 1
    eigen = ((1 - 2 * bits) * np.asarray(circuit.encoding.betas) / 2).sum(axis=1)

    start = hadamards @ blocks[0][:, 0]
    middle = [hadamards @ blocks[l] @ hadamards for l in range(1, L)]
    last = blocks[L] @ hadamards

    paths = list(itertools.product(range(d), repeat=L))
    amplitudes = np.empty((d, len(paths)), dtype=np.complex128)
    sums = np.empty(len(paths), dtype=np.float64)
    for p, path in enumerate(paths):
        weight = start[path[0]]
        for layer in range(1, L):
            weight = weight * middle[layer - 1][path[layer], path[layer - 1]]
        amplitudes[:, p] = last[:, path[-1]] * weight
        sums[p] = eigen[list(path)].sum()

    diagonal = circuit.observable.diagonal(n)
    terms = (np.conj(amplitudes).T * diagonal) @ amplitudes
    keys = np.round(np.subtract.outer(sums, sums) * scale).astype(np.int64)

    coefficients: dict[int, complex] = {}
    counts: dict[int, int] = {}
    for key, term in zip(keys.ravel().tolist(), terms.ravel().tolist(), strict=True):
        coefficients[key] = coefficients.get(key, 0j) + term
        counts[key] = counts.get(key, 0) + 1
    ordered = sorted(coefficients)
    snapshot = FourierSnapshot(
        omegas=np.array(ordered, dtype=np.float64) / scale,
        coefficients=np.array([coefficients[key] for key in ordered]),
        grid_size=0,
    )
    return snapshot, {key / scale: counts[key] for key in ordered}


def coefficients_by_decomposition(
    circuit: ReuploaderCircuit, params: ParameterTable
) -> FourierSnapshot:
    """Oracle snapshot built from explicit block matrices (n <= 2, L <= 2)."""
    snapshot, _ = decomposition_terms(circuit, params)
    return snapshot
