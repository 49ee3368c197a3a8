"""Combinatorial frequency spectra and redundancy profiles.

Eigen-sums and frequencies live on an integer lattice scaled by
``lattice_scale`` (2 for integer betas, 4 when some beta is an exact half),
and counts are exact Python integers.
"""

import logging
from itertools import product

import numpy as np
import pandas as pd

from spectral_lab.core.exceptions import (
    ConfigurationError,
    SizeError,
    UnsupportedLatticeError,
)
from spectral_lab.models.circuit import EncodingAngle, EncodingScheme, GateKind, ReuploaderCircuit
from spectral_lab.models.spectra import FrequencySpectrum

logger = logging.getLogger(__name__)

BRUTEFORCE_MAX_CONFIGURATIONS = 2**20


def lattice_scale(betas: tuple[float, ...]) -> int:
    """Smallest lattice scale hosting ``+-beta/2`` for every beta."""
    doubled = [2 * beta for beta in betas]
    if any(abs(value - round(value)) > 1e-12 for value in doubled):
        raise UnsupportedLatticeError(
            f"Encoding betas {betas} are not integers or exact halves"
        )
    return 2 if all(abs(beta - round(beta)) <= 1e-12 for beta in betas) else 4


def _scaled_eigenvalues(betas: tuple[float, ...], scale: int) -> list[int]:
    return [round(beta * scale / 2) for beta in betas]


def _histogram(encoding: EncodingScheme, L: int) -> tuple[int, int, np.ndarray]:
    """Eigen-sum histogram by iterated convolution of two-point kernels.

    Returns:
        Tuple of (scale, offset, counts) where ``counts[i]`` is the number of
        sign configurations with scaled eigen-sum ``i - offset``.
    """
    scale = lattice_scale(encoding.betas)
    counts = np.array([1], dtype=object)
    offset = 0
    for _ in range(L):
        for half_width in _scaled_eigenvalues(encoding.betas, scale):
            kernel = np.zeros(2 * half_width + 1, dtype=object)
            kernel[0] += 1
            kernel[-1] += 1
            counts = np.convolve(counts, kernel)
            offset += half_width
    return scale, offset, counts


def eigen_sum_histogram(encoding: EncodingScheme, n: int, L: int) -> dict[float, int]:
    """Histogram of all eigen-sums ``sum_g +-beta_g / 2`` over the n*L gates.

    Args:
        encoding: Encoding scheme with n betas.
        n: Number of qubits.
        L: Number of reupload layers.

    Returns:
        Map from eigen-sum to count; total mass ``2**(n*L)``.
    """
    _check_encoding(encoding, n)
    scale, offset, counts = _histogram(encoding, L)
    return {
        (i - offset) / scale: int(count)
        for i, count in enumerate(counts)
        if count != 0
    }


def redundancy_profile(encoding: EncodingScheme, n: int, L: int) -> FrequencySpectrum:
    """Redundancy ``R(omega)`` as the autocorrelation of the eigen-sum histogram."""
    _check_encoding(encoding, n)
    scale, _, counts = _histogram(encoding, L)
    # Convolving with the reversed histogram gives the autocorrelation.
    autocorrelation = np.convolve(counts, counts[::-1])
    centre = counts.size - 1
    entries = {
        i - centre: int(count)
        for i, count in enumerate(autocorrelation)
        if count != 0
    }
    spectrum = FrequencySpectrum(lattice_scale=scale, entries=entries)
    logger.debug(
        f"Redundancy profile {encoding.kind.value} n={n} L={L}: "
        f"{len(entries)} frequencies, max {spectrum.max_frequency()}"
    )
    return spectrum


def frequency_support(betas: tuple[float, ...]) -> np.ndarray:
    """Non-negative frequencies reachable as sums of ``{-beta, 0, +beta}`` over gates.

    This is the set where ``R(omega) > 0`` for the given encoding gates,
    found with indicator convolutions instead of exact counts.
    """
    if not betas:
        return np.zeros(1)
    scale = lattice_scale(betas)
    support = np.ones(1)
    for half_width in _scaled_eigenvalues(betas, scale):
        kernel = np.zeros(2 * half_width + 1)
        kernel[0] = kernel[-1] = 1.0
        support = np.minimum(np.convolve(support, kernel), 1.0)
    autocorrelation = np.convolve(support, support[::-1])
    keys = np.flatnonzero(autocorrelation[support.size - 1 :] > 0.5)
    return keys.astype(np.float64) / scale


# ============== Light cone ==============
# CNOT conjugation of control+target Pauli letters, up to phase.
_CNOT_IMAGE = {
    "II": "II", "IX": "IX", "IY": "ZY", "IZ": "ZZ",
    "XI": "XX", "XX": "XI", "XY": "YZ", "XZ": "YY",
    "YI": "YX", "YX": "YI", "YY": "XZ", "YZ": "XY",
    "ZI": "ZI", "ZX": "ZX", "ZY": "IY", "ZZ": "IZ",
}


def _off_axis(kind: GateKind) -> frozenset[str]:
    """Letters anticommuting with the rotation axis of ``kind``."""
    return frozenset("XYZ".replace(kind.value[-1], ""))


def observable_light_cone(circuit: ReuploaderCircuit) -> tuple[float, ...]:
    """Betas of the encoding gates that can act on the measured observable.

    The observable is pulled back through the program gate by gate while
    tracking, per qubit, the Pauli letters its expansion may hold. Trainable
    angles are treated as generic, so the result is a superset of the gates
    that matter for any parameter values. An encoding gate commuting with
    every letter left on its qubit adds no frequency.
    """
    letters = [frozenset("I")] * circuit.n
    letters[circuit.observable.qubit] = frozenset("Z")
    contributing: list[float] = []
    for gate in reversed(circuit.gate_program):
        if gate.kind is GateKind.cnot:
            c, t = gate.qubits()
            images = [_CNOT_IMAGE[a + b] for a, b in product(letters[c], letters[t])]
            letters[c] = frozenset(image[0] for image in images)
            letters[t] = frozenset(image[1] for image in images)
            continue
        q = gate.target
        off_axis = _off_axis(gate.kind)
        if letters[q] & off_axis:
            if isinstance(gate.angle_source, EncodingAngle):
                contributing.append(gate.angle_source.beta)
            # A generic rotation mixes the two off-axis letters.
            letters[q] = letters[q] | off_axis
    return tuple(reversed(contributing))


def reachable_frequencies(circuit: ReuploaderCircuit) -> np.ndarray:
    """Non-negative frequencies the circuit's output can carry for some parameters."""
    return frequency_support(observable_light_cone(circuit))


def tracked_frequencies(
    circuit: ReuploaderCircuit, band: int, include_zero: bool = False
) -> np.ndarray:
    """Integer reachable frequencies up to ``band``, the default set to record.

    Raises:
        ConfigurationError: If no such frequency exists.
    """
    support = reachable_frequencies(circuit)
    lowest = 0 if include_zero else 1
    keep = (support >= lowest) & (support <= band) & np.isclose(support, np.round(support))
    if not keep.any():
        raise ConfigurationError(
            f"Circuit output carries no integer frequency in [{lowest}, {band}]"
        )
    return np.round(support[keep])


def redundancy_bruteforce(encoding: EncodingScheme, n: int, L: int) -> FrequencySpectrum:
    """Exhaustive enumeration of sign configurations, used as an oracle.

    Raises:
        SizeError: If there are more than ``2**20`` sign configurations.
    """
    _check_encoding(encoding, n)
    gates = n * L
    if 2**gates > BRUTEFORCE_MAX_CONFIGURATIONS:
        raise SizeError(
            f"Brute force needs 2**{gates} configurations, limit is 2**20"
        )
    scale = lattice_scale(encoding.betas)
    scaled = np.array(_scaled_eigenvalues(encoding.betas, scale) * L, dtype=np.int64)
    bits = (np.arange(2**gates)[:, None] >> np.arange(gates)) & 1
    sums = (2 * bits - 1) @ scaled
    values, multiplicities = np.unique(sums, return_counts=True)

    entries: dict[int, int] = {}
    for value_k, count_k in zip(values.tolist(), multiplicities.tolist(), strict=True):
        for value_j, count_j in zip(values.tolist(), multiplicities.tolist(), strict=True):
            omega = value_k - value_j
            entries[omega] = entries.get(omega, 0) + count_k * count_j
    return FrequencySpectrum(lattice_scale=scale, entries=dict(sorted(entries.items())))


def spectrum_frame(spectrum: FrequencySpectrum) -> pd.DataFrame:
    """Tabular spectrum: omega, redundancy, redundancy_normalized."""
    total = spectrum.total()
    rows = [
        {
            "omega": omega,
            "redundancy": count,
            "redundancy_normalized": count / total,
        }
        for omega, count in spectrum.as_dict().items()
    ]
    return pd.DataFrame(rows, columns=["omega", "redundancy", "redundancy_normalized"])


def spectrum_payload(spectrum: FrequencySpectrum) -> dict[str, object]:
    """JSON-ready representation with exact integer counts."""
    return {
        "lattice_scale": spectrum.lattice_scale,
        "total": spectrum.total(),
        "max_frequency": spectrum.max_frequency(),
        "entries": [
            {"omega": omega, "redundancy": count}
            for omega, count in spectrum.as_dict().items()
        ],
    }


def _check_encoding(encoding: EncodingScheme, n: int) -> None:
    if len(encoding.betas) != n:
        raise ConfigurationError(
            f"Encoding carries {len(encoding.betas)} betas for {n} qubits"
        )
