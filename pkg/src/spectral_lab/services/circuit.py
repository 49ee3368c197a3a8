"""Reuploader circuit construction and parameter initialization."""

import itertools
import logging
from typing import TYPE_CHECKING

import numpy as np

from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.models.circuit import (
    EncodingAngle,
    EncodingKind,
    EncodingScheme,
    EntanglementKind,
    EntanglementLayout,
    Gate,
    GateKind,
    Observable,
    ParameterAngle,
    ParameterTable,
    ReuploaderCircuit,
)

if TYPE_CHECKING:
    from spectral_lab.schemas.run_config import CircuitConfig

logger = logging.getLogger(__name__)

_BASES = {
    EncodingKind.constant: lambda i: 1.0,
    EncodingKind.linear: lambda i: float(i + 1),
    EncodingKind.binary: lambda i: float(2**i),
    EncodingKind.ternary: lambda i: float(3**i),
}


def encoding_betas(
    kind: EncodingKind | str, n: int, custom: list[float] | None = None
) -> tuple[float, ...]:
    """Per-qubit encoding scales for a named family.

    Args:
        kind: Encoding family.
        n: Number of qubits.
        custom: Explicit betas, required for the custom kind.

    Returns:
        Tuple of n positive scales.

    Raises:
        ConfigurationError: If n < 1 or custom betas are missing or malformed.
    """
    kind = EncodingKind(kind)
    if n < 1:
        raise ConfigurationError(f"Qubit count must be at least 1, got {n}")
    if kind is EncodingKind.custom:
        if custom is None:
            raise ConfigurationError("Custom encoding requires explicit betas")
        if len(custom) != n:
            raise ConfigurationError(f"Expected {n} custom betas, got {len(custom)}")
        return tuple(float(beta) for beta in custom)
    return tuple(_BASES[kind](i) for i in range(n))


def make_encoding(
    kind: EncodingKind | str, n: int, custom: list[float] | None = None
) -> EncodingScheme:
    kind = EncodingKind(kind)
    return EncodingScheme(kind=kind, betas=encoding_betas(kind, n, custom))


def all_pairs(n: int) -> list[tuple[int, int]]:
    """Ordered ``(control, target)`` pairs with control < target."""
    return list(itertools.combinations(range(n), 2))


def make_entanglement(
    kind: EntanglementKind | str,
    n: int,
    L: int,
    count: int | None = None,
    seed: int | None = None,
) -> EntanglementLayout:
    """Resolve a layout generator into CNOT pairs for each of the L+1 blocks."""
    kind = EntanglementKind(kind)
    blocks = L + 1
    resolved: list[tuple[tuple[int, int], ...]]
    if n < 2 or kind is EntanglementKind.none:
        resolved = [()] * blocks
    elif kind is EntanglementKind.ladder:
        ladder = tuple((q, q + 1) for q in range(n - 1))
        resolved = [ladder] * blocks
    elif kind is EntanglementKind.one_d_hop:
        resolved = [((b % (n - 1), b % (n - 1) + 1),) for b in range(blocks)]
    elif kind is EntanglementKind.all_to_all:
        resolved = [tuple(all_pairs(n))] * blocks
    else:
        if count is None or seed is None:
            raise ConfigurationError("Random entanglement requires count and seed")
        pairs = all_pairs(n)
        if not 0 <= count <= len(pairs):
            raise ConfigurationError(
                f"Random entanglement count {count} outside [0, {len(pairs)}] for {n} qubits"
            )
        rng = np.random.default_rng(seed)
        resolved = []
        for _ in range(blocks):
            picks = rng.choice(len(pairs), size=count, replace=False)
            resolved.append(tuple(pairs[int(i)] for i in picks))
    return EntanglementLayout(
        generator=kind, resolved=tuple(resolved), count=count, seed=seed
    )


def _trainable_block(n: int, block: int, pairs: tuple[tuple[int, int], ...]) -> tuple[Gate, ...]:
    gates = [
        Gate(GateKind.ry, q, angle_source=ParameterAngle(ParameterTable.index(n, block, q, 0)))
        for q in range(n)
    ]
    gates += [
        Gate(GateKind.rx, q, angle_source=ParameterAngle(ParameterTable.index(n, block, q, 1)))
        for q in range(n)
    ]
    for control, target in pairs:
        if not (0 <= control < n and 0 <= target < n):
            raise ConfigurationError(
                f"CNOT pair ({control}, {target}) out of range for {n} qubits"
            )
        gates.append(Gate(GateKind.cnot, target, control=control))
    return tuple(gates)


def build_circuit(
    n: int,
    L: int,
    encoding: EncodingScheme | EncodingKind | str = EncodingKind.constant,
    entanglement: EntanglementLayout | EntanglementKind | str = EntanglementKind.none,
    observable: Observable | None = None,
) -> ReuploaderCircuit:
    """Build a reuploader circuit.

    Each trainable block applies RY on every qubit, then RX on every qubit,
    then its CNOT pairs. Encoding layers apply ``RX(beta_i x)`` to qubit i.

    Args:
        n: Number of qubits.
        L: Number of reupload layers.
        encoding: Encoding scheme or the name of a non-custom family.
        entanglement: Resolved layout or the name of a deterministic generator.
        observable: Measured observable, Z on qubit 0 by default.

    Returns:
        Immutable circuit with ``n * 2 * (L + 1)`` trainable parameters.
    """
    if n < 1 or L < 1:
        raise ConfigurationError(f"Need n >= 1 and L >= 1, got n={n}, L={L}")
    if not isinstance(encoding, EncodingScheme):
        encoding = make_encoding(encoding, n)
    if not isinstance(entanglement, EntanglementLayout):
        entanglement = make_entanglement(entanglement, n, L)
    observable = observable or Observable(qubit=0)
    if len(encoding.betas) != n:
        raise ConfigurationError(f"Encoding has {len(encoding.betas)} betas for {n} qubits")
    if len(entanglement.resolved) != L + 1:
        raise ConfigurationError(
            f"Entanglement layout has {len(entanglement.resolved)} blocks, expected {L + 1}"
        )
    if not 0 <= observable.qubit < n:
        raise ConfigurationError(f"Observable qubit {observable.qubit} out of range")

    blocks = tuple(
        _trainable_block(n, b, pairs) for b, pairs in enumerate(entanglement.resolved)
    )
    layer = tuple(
        Gate(GateKind.rx, q, angle_source=EncodingAngle(beta))
        for q, beta in enumerate(encoding.betas)
    )
    circuit = ReuploaderCircuit(
        n=n,
        L=L,
        encoding=encoding,
        entanglement=entanglement,
        observable=observable,
        blocks=blocks,
        encoding_layers=(layer,) * L,
    )
    logger.debug(
        f"Built circuit n={n} L={L} encoding={encoding.kind.value} "
        f"entanglement={entanglement.describe()} params={circuit.parameter_count}"
    )
    return circuit


def init_params(circuit: ReuploaderCircuit, sigma: float, seed: int) -> ParameterTable:
    """Draw i.i.d. ``N(0, sigma^2)`` angles, reproducible from the seed."""
    if sigma < 0:
        raise ConfigurationError(f"sigma must be non-negative, got {sigma}")
    rng = np.random.default_rng(seed)
    return ParameterTable(sigma * rng.standard_normal(circuit.parameter_count))


def circuit_from_config(config: "CircuitConfig", entanglement_seed: int | None = None) -> ReuploaderCircuit:
    """Build the circuit described by a validated config block.

    Args:
        config: Circuit section of a run config.
        entanglement_seed: Replaces the config's seed for random layouts.
    """
    encoding = make_encoding(config.encoding, config.n, config.betas)
    seed = config.entanglement_seed if entanglement_seed is None else entanglement_seed
    layout = make_entanglement(
        config.entanglement, config.n, config.L, config.entanglement_count, seed
    )
    return build_circuit(
        config.n, config.L, encoding, layout, Observable(qubit=config.observable_qubit)
    )
