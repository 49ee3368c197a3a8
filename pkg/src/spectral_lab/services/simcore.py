"""Dense statevector simulation for RX/RY/RZ/CNOT circuits.

States are batched as arrays of shape ``(B, 2**n)``; amplitude index bit
``n-1-q`` belongs to qubit ``q`` (qubit 0 is the most significant bit).
"""

import logging
from collections.abc import Sequence

import numpy as np

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError, NumericError
from spectral_lab.models.circuit import (
    ComplexState,
    EncodingAngle,
    FixedAngle,
    Gate,
    GateKind,
    Observable,
    ParameterAngle,
    ParameterTable,
    ReuploaderCircuit,
)

logger = logging.getLogger(__name__)


def rotation_matrices(kind: GateKind, angles: np.ndarray) -> np.ndarray:
    """Stack of ``exp(-i phi P / 2)`` matrices, shape ``(B, 2, 2)``."""
    half = np.asarray(angles, dtype=np.float64) / 2
    c = np.cos(half)
    s = np.sin(half)
    mats = np.empty((half.size, 2, 2), dtype=np.complex128)
    if kind is GateKind.rx:
        mats[:, 0, 0] = c
        mats[:, 0, 1] = -1j * s
        mats[:, 1, 0] = -1j * s
        mats[:, 1, 1] = c
    elif kind is GateKind.ry:
        mats[:, 0, 0] = c
        mats[:, 0, 1] = -s
        mats[:, 1, 0] = s
        mats[:, 1, 1] = c
    elif kind is GateKind.rz:
        mats[:, 0, 0] = np.exp(-1j * half)
        mats[:, 0, 1] = 0
        mats[:, 1, 0] = 0
        mats[:, 1, 1] = np.exp(1j * half)
    else:
        raise ConfigurationError(f"{kind.value} is not a rotation")
    return mats


def _check_qubits(gate: Gate, n: int) -> None:
    for qubit in gate.qubits():
        if not 0 <= qubit < n:
            raise ConfigurationError(
                f"{gate.kind.value} acts on qubit {qubit}, circuit has {n} qubits"
            )


def _apply_rotation(states: np.ndarray, n: int, target: int, mats: np.ndarray) -> np.ndarray:
    batch = states.shape[0]
    tensor = states.reshape((batch,) + (2,) * n)
    moved = np.moveaxis(tensor, target + 1, 1).reshape(batch, 2, -1)
    rotated = np.matmul(mats, moved).reshape((batch, 2) + (2,) * (n - 1))
    return np.moveaxis(rotated, 1, target + 1).reshape(batch, 2**n)


def _apply_cnot(states: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    batch = states.shape[0]
    tensor = states.reshape((batch,) + (2,) * n).copy()
    index: list[slice | int] = [slice(None)] * (n + 1)
    index[control + 1] = 1
    # Target axis inside the control=1 slice.
    target_axis = target + 1 if target < control else target
    branch = tensor[tuple(index)]
    tensor[tuple(index)] = np.flip(branch, axis=target_axis).copy()
    return tensor.reshape(batch, 2**n)


def apply_gate_batch(
    states: np.ndarray, n: int, gate: Gate, angles: np.ndarray | None = None
) -> np.ndarray:
    """Apply one gate to a batch of states with per-row angles."""
    _check_qubits(gate, n)
    if gate.kind is GateKind.cnot:
        assert gate.control is not None
        return _apply_cnot(states, n, gate.control, gate.target)
    if angles is None or not np.all(np.isfinite(angles)):
        raise NumericError(f"Non-finite angle for {gate.kind.value} on qubit {gate.target}")
    angles = np.broadcast_to(np.asarray(angles, dtype=np.float64), (states.shape[0],))
    return _apply_rotation(states, n, gate.target, rotation_matrices(gate.kind, angles))


def apply_gate(state: ComplexState, gate: Gate, resolved_angle: float = 0.0) -> ComplexState:
    """Apply a single gate to one state.

    Args:
        state: Input state.
        gate: Gate to apply.
        resolved_angle: Rotation angle in radians (ignored for CNOT).

    Returns:
        New state; the input is left untouched.

    Raises:
        ConfigurationError: If a gate index is out of range.
        NumericError: If the angle is not finite.
    """
    n = state.qubit_count
    angles = np.array([resolved_angle], dtype=np.float64)
    out = apply_gate_batch(state.amplitudes[None, :], n, gate, angles)
    return ComplexState(amplitudes=out[0], qubit_count=n)


def expectation_batch(states: np.ndarray, n: int, obs: Observable) -> np.ndarray:
    probabilities = np.abs(states) ** 2
    return probabilities @ obs.diagonal(n)


def expectation(state: ComplexState, obs: Observable) -> float:
    """Expectation of a diagonal observable, ``sum_i z_i |a_i|^2``."""
    return float(expectation_batch(state.amplitudes[None, :], state.qubit_count, obs)[0])


def resolve_angles(gate: Gate, params_rows: np.ndarray, xs: np.ndarray) -> np.ndarray | None:
    """Per-row angles of a gate for parameter rows ``(B, P)`` and inputs ``(B,)``."""
    source = gate.angle_source
    if source is None:
        return None
    if isinstance(source, ParameterAngle):
        return params_rows[:, source.index]
    if isinstance(source, EncodingAngle):
        return source.beta * xs
    if isinstance(source, FixedAngle):
        return np.full(xs.shape, source.angle)
    raise ConfigurationError(f"Unknown angle source {source!r}")


def run_gates(
    gates: Sequence[Gate],
    n: int,
    states: np.ndarray,
    params_rows: np.ndarray,
    xs: np.ndarray,
) -> np.ndarray:
    """Apply a gate list to a batch of states."""
    for gate in gates:
        states = apply_gate_batch(states, n, gate, resolve_angles(gate, params_rows, xs))
    return states


def _check_dimensions(circuit: ReuploaderCircuit, params_rows: np.ndarray) -> None:
    if params_rows.ndim != 2 or params_rows.shape[1] != circuit.parameter_count:
        raise ConfigurationError(
            f"Parameter table has shape {params_rows.shape}, "
            f"circuit expects {circuit.parameter_count} parameters"
        )


def evaluate_batch(
    circuit: ReuploaderCircuit, params_rows: np.ndarray, xs: np.ndarray
) -> np.ndarray:
    """Evaluate ``f(x_b, theta_b)`` for every row of a batch.

    Rows are simulated in chunks so that at most
    ``settings.max_batch_amplitudes`` amplitudes are alive at once.

    Args:
        circuit: Circuit to simulate.
        params_rows: Parameter rows, shape ``(B, P)``.
        xs: Inputs, shape ``(B,)``.

    Returns:
        Expectation values, shape ``(B,)``.
    """
    params_rows = np.atleast_2d(np.asarray(params_rows, dtype=np.float64))
    xs = np.broadcast_to(np.asarray(xs, dtype=np.float64), (params_rows.shape[0],))
    _check_dimensions(circuit, params_rows)
    if not np.all(np.isfinite(params_rows)) or not np.all(np.isfinite(xs)):
        raise NumericError("Non-finite parameters or inputs")

    n = circuit.n
    dim = 2**n
    chunk = max(1, settings.max_batch_amplitudes // dim)
    program = circuit.gate_program
    values = np.empty(params_rows.shape[0], dtype=np.float64)
    for start in range(0, params_rows.shape[0], chunk):
        stop = min(start + chunk, params_rows.shape[0])
        states = np.zeros((stop - start, dim), dtype=np.complex128)
        states[:, 0] = 1.0
        states = run_gates(program, n, states, params_rows[start:stop], xs[start:stop])
        values[start:stop] = expectation_batch(states, n, circuit.observable)
    return values


def evaluate_grid(
    circuit: ReuploaderCircuit, params: ParameterTable, xs: np.ndarray
) -> np.ndarray:
    """Evaluate one parameter table on every point of a grid."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    rows = np.broadcast_to(params.values, (xs.size, params.values.size))
    return evaluate_batch(circuit, rows, xs)


def evaluate_circuit(circuit: ReuploaderCircuit, params: ParameterTable, x: float) -> float:
    """Circuit output ``f(x, theta)`` in [-1, 1]."""
    return float(evaluate_grid(circuit, params, np.array([x]))[0])


def block_unitary(gates: Sequence[Gate], n: int, params: np.ndarray, x: float = 0.0) -> np.ndarray:
    """Dense ``2**n x 2**n`` unitary of a gate list."""
    dim = 2**n
    basis = np.eye(dim, dtype=np.complex128)
    rows = np.broadcast_to(np.asarray(params, dtype=np.float64), (dim, np.size(params)))
    out = run_gates(gates, n, basis, rows, np.full(dim, x))
    # Row j of ``out`` is U|j>, i.e. column j of U.
    return out.T
