"""Parameter-shift gradients with a finite-difference oracle."""

import logging

import numpy as np

from spectral_lab.core.config import settings
from spectral_lab.core.exceptions import ConfigurationError
from spectral_lab.models.circuit import ParameterTable, ReuploaderCircuit
from spectral_lab.services.simcore import evaluate_batch, evaluate_circuit, evaluate_grid

logger = logging.getLogger(__name__)

SHIFT = np.pi / 2


def _shifted_jacobian(
    circuit: ReuploaderCircuit, params: ParameterTable, xs: np.ndarray, shift: float
) -> np.ndarray:
    """``(f(theta_k + s) - f(theta_k - s))`` for every k and x, shape ``(M, P)``."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    n_params = circuit.parameter_count
    if len(params) != n_params:
        raise ConfigurationError(
            f"Parameter table has {len(params)} entries, circuit expects {n_params}"
        )
    m = xs.size
    row_cost = 2 * m * max(n_params, 2**circuit.n)
    group = max(1, settings.max_batch_amplitudes // row_cost)

    diffs = np.empty((m, n_params), dtype=np.float64)
    for start in range(0, n_params, group):
        ks = np.arange(start, min(start + group, n_params))
        # Rows 2i and 2i+1 shift only parameter ks[i], by +shift and -shift.
        rows = np.repeat(params.values[None, :], 2 * ks.size, axis=0)
        local = np.arange(ks.size)
        rows[2 * local, ks] += shift
        rows[2 * local + 1, ks] -= shift
        batch = np.repeat(rows, m, axis=0)
        values = evaluate_batch(circuit, batch, np.tile(xs, 2 * ks.size))
        values = values.reshape(ks.size, 2, m)
        diffs[:, ks] = (values[:, 0, :] - values[:, 1, :]).T
    return diffs


def jacobian_grid(
    circuit: ReuploaderCircuit, params: ParameterTable, xs: np.ndarray
) -> np.ndarray:
    """Exact ``df(x_m)/dtheta_k`` on a grid via the +-pi/2 shift rule.

    Returns:
        Array of shape ``(M, P)``.
    """
    return _shifted_jacobian(circuit, params, xs, SHIFT) / 2


def grad_f(circuit: ReuploaderCircuit, params: ParameterTable, x: float) -> np.ndarray:
    """Parameter-shift gradient of ``f(x, theta)``."""
    return jacobian_grid(circuit, params, np.array([x]))[0]


def grad_f_fd(
    circuit: ReuploaderCircuit, params: ParameterTable, x: float, h: float = 1e-5
) -> np.ndarray:
    """Central finite-difference gradient of ``f(x, theta)``.

    Each parameter is perturbed in its own circuit evaluation, independently
    of the batched shift machinery used by ``jacobian_grid``.
    """
    if not 0 < h < 0.1:
        raise ConfigurationError(f"Finite-difference step must lie in (0, 0.1), got {h}")
    gradient = np.empty(len(params), dtype=np.float64)
    for k in range(len(params)):
        plus = params.values.copy()
        minus = params.values.copy()
        plus[k] += h
        minus[k] -= h
        gradient[k] = (
            evaluate_circuit(circuit, ParameterTable(plus), x)
            - evaluate_circuit(circuit, ParameterTable(minus), x)
        ) / (2 * h)
    return gradient


def mse_loss(
    circuit: ReuploaderCircuit, params: ParameterTable, x_grid: np.ndarray, target_values: np.ndarray
) -> float:
    residual = evaluate_grid(circuit, params, x_grid) - np.asarray(target_values)
    return float(np.mean(residual**2))


def grad_mse(
    circuit: ReuploaderCircuit,
    params: ParameterTable,
    x_grid: np.ndarray,
    target_values: np.ndarray,
) -> tuple[float, np.ndarray]:
    """Full-batch grid MSE and its parameter-shift gradient.

    Sums run over the grid axis with numpy's pairwise reduction, which is
    fixed for a given grid size, so repeated calls are bit-identical.

    Args:
        circuit: Circuit to differentiate.
        params: Current parameters.
        x_grid: Grid points, length M.
        target_values: Target values on the grid, length M.

    Returns:
        Tuple of (loss, gradient vector).
    """
    x_grid = np.asarray(x_grid, dtype=np.float64).reshape(-1)
    target_values = np.asarray(target_values, dtype=np.float64).reshape(-1)
    if x_grid.size == 0:
        raise ConfigurationError("Grid is empty")
    if x_grid.size != target_values.size:
        raise ConfigurationError(
            f"Grid has {x_grid.size} points but {target_values.size} target values"
        )
    residual = evaluate_grid(circuit, params, x_grid) - target_values
    jac = jacobian_grid(circuit, params, x_grid)
    m = x_grid.size
    loss = float(np.sum(residual**2) / m)
    gradient = (2.0 / m) * np.sum(residual[:, None] * jac, axis=0)
    return loss, gradient
