"""Domain types for statevectors, gates and reuploader circuits."""

import enum
from dataclasses import dataclass, field

import numpy as np

from spectral_lab.core.exceptions import ConfigurationError


class GateKind(str, enum.Enum):
    """Supported gate set."""

    rx = "RX"
    ry = "RY"
    rz = "RZ"
    cnot = "CNOT"


class EncodingKind(str, enum.Enum):
    """Per-qubit encoding scale families."""

    constant = "constant"
    linear = "linear"
    binary = "binary"
    ternary = "ternary"
    custom = "custom"


class EntanglementKind(str, enum.Enum):
    """CNOT layout generators for trainable blocks."""

    ladder = "ladder"
    one_d_hop = "one_d_hop"
    all_to_all = "all_to_all"
    random = "random"
    none = "none"


# ============== Angle sources ==============
@dataclass(frozen=True)
class ParameterAngle:
    """Angle read from the parameter table."""

    index: int


@dataclass(frozen=True)
class EncodingAngle:
    """Angle ``beta * x`` for the current input."""

    beta: float


@dataclass(frozen=True)
class FixedAngle:
    """Constant angle in radians."""

    angle: float


AngleSource = ParameterAngle | EncodingAngle | FixedAngle


# ============== Gates and observables ==============
@dataclass(frozen=True)
class Gate:
    """Single gate of a circuit program.

    Rotations follow ``G(phi) = exp(-i phi P / 2)``.
    """

    kind: GateKind
    target: int
    control: int | None = None
    angle_source: AngleSource | None = None

    def __post_init__(self) -> None:
        if self.kind is GateKind.cnot:
            if self.control is None:
                raise ConfigurationError("CNOT requires a control qubit")
            if self.control == self.target:
                raise ConfigurationError(
                    f"CNOT control and target coincide on qubit {self.target}"
                )
        else:
            if self.control is not None:
                raise ConfigurationError(f"{self.kind.value} takes no control qubit")
            if self.angle_source is None:
                raise ConfigurationError(f"{self.kind.value} requires an angle source")

    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)


@dataclass(frozen=True)
class Observable:
    """Pauli-Z measured on a single qubit, multiplied by ``scale``."""

    qubit: int = 0
    scale: float = 1.0

    def diagonal(self, n: int) -> np.ndarray:
        """Eigenvalues in computational-basis order (qubit 0 is the MSB)."""
        if not 0 <= self.qubit < n:
            raise ConfigurationError(
                f"Observable qubit {self.qubit} out of range for {n} qubits"
            )
        bits = (np.arange(2**n) >> (n - 1 - self.qubit)) & 1
        return self.scale * (1 - 2 * bits).astype(np.float64)


@dataclass(frozen=True, eq=False)
class ComplexState:
    """Dense statevector; amplitude index bit ``n-1-q`` belongs to qubit ``q``."""

    amplitudes: np.ndarray
    qubit_count: int

    def __post_init__(self) -> None:
        if self.qubit_count < 1:
            raise ConfigurationError("qubit_count must be positive")
        if self.amplitudes.shape != (2**self.qubit_count,):
            raise ConfigurationError(
                f"Expected {2**self.qubit_count} amplitudes, got {self.amplitudes.shape}"
            )

    @classmethod
    def zero(cls, n: int) -> "ComplexState":
        amplitudes = np.zeros(2**n, dtype=np.complex128)
        amplitudes[0] = 1.0
        return cls(amplitudes=amplitudes, qubit_count=n)

    @classmethod
    def basis(cls, bits: str) -> "ComplexState":
        """Basis state from a bitstring, leftmost character is qubit 0."""
        amplitudes = np.zeros(2 ** len(bits), dtype=np.complex128)
        amplitudes[int(bits, 2)] = 1.0
        return cls(amplitudes=amplitudes, qubit_count=len(bits))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


# ============== Circuit layout ==============
@dataclass(frozen=True)
class EncodingScheme:
    """Encoding scales ``beta_i`` repeated identically in every layer."""

    kind: EncodingKind
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(beta <= 0 for beta in self.betas):
            raise ConfigurationError(f"Encoding betas must be positive: {self.betas}")


@dataclass(frozen=True)
class EntanglementLayout:
    """CNOT pairs per trainable block, resolved from a generator."""

    generator: EntanglementKind
    resolved: tuple[tuple[tuple[int, int], ...], ...]
    count: int | None = None
    seed: int | None = None

    def cnots_per_block(self) -> list[int]:
        return [len(pairs) for pairs in self.resolved]

    def describe(self) -> str:
        if self.generator is EntanglementKind.random:
            return f"random({self.count})"
        return self.generator.value


@dataclass(frozen=True)
class ReuploaderCircuit:
    """Reuploader program: block 0, then L x (encoding layer, block)."""

    n: int
    L: int
    encoding: EncodingScheme
    entanglement: EntanglementLayout
    observable: Observable
    blocks: tuple[tuple[Gate, ...], ...]
    encoding_layers: tuple[tuple[Gate, ...], ...]

    @property
    def parameter_count(self) -> int:
        return self.n * 2 * (self.L + 1)

    @property
    def gate_program(self) -> tuple[Gate, ...]:
        program: list[Gate] = list(self.blocks[0])
        for layer, block in zip(self.encoding_layers, self.blocks[1:], strict=True):
            program.extend(layer)
            program.extend(block)
        return tuple(program)

    @property
    def max_frequency(self) -> float:
        return self.L * sum(self.encoding.betas)


@dataclass(eq=False)
class ParameterTable:
    """Trainable angles indexed by (block, qubit, rotation slot)."""

    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)

    def __len__(self) -> int:
        return int(self.values.size)

    @staticmethod
    def index(n: int, block: int, qubit: int, slot: int) -> int:
        """Flat index; slot 0 is the RY angle, slot 1 the RX angle."""
        return (block * n + qubit) * 2 + slot

    def copy(self) -> "ParameterTable":
        return ParameterTable(self.values.copy())
