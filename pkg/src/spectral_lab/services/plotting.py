"""SVG heatmaps of spectral training dynamics."""

import logging
from io import BytesIO
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from spectral_lab.core.exceptions import ConfigurationError, PersistenceError  # noqa: E402
from spectral_lab.services.persistence import atomic_write_bytes  # noqa: E402

logger = logging.getLogger(__name__)

DYNAMICS_COLUMNS = ("epoch", "omega", "normalized")
TRACE_COLUMNS = ("epoch", "loss", "parseval_residual")
DYNAMICS_FILE = "dynamics.csv"


def _read_csv(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise PersistenceError(f"Cannot read {path}: {exc}") from exc


def load_dynamics(path: str | Path) -> pd.DataFrame:
    """Read a long-format dynamics CSV and pivot it to epoch rows x omega columns.

    A training trace CSV stands in for the ``dynamics.csv`` written next to it
    by the same run.
    """
    path = Path(path)
    frame = _read_csv(path)
    if all(column in frame.columns for column in TRACE_COLUMNS) and "omega" not in frame.columns:
        sibling = path.with_name(DYNAMICS_FILE)
        if not sibling.exists():
            raise ConfigurationError(f"{path} is a training trace but {sibling} does not exist")
        logger.info(f"Reading dynamics of trace {path} from {sibling}")
        path, frame = sibling, _read_csv(sibling)
    missing = [column for column in DYNAMICS_COLUMNS if column not in frame.columns]
    if missing:
        raise ConfigurationError(f"{path} lacks columns {missing}; expected {list(DYNAMICS_COLUMNS)}")
    return frame.pivot(index="epoch", columns="omega", values="normalized").sort_index()


def dynamics_svg(matrix: pd.DataFrame, title: str | None = None) -> bytes:
    """Heatmap with epochs on the x axis, frequencies on the y axis."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    try:
        epochs = matrix.index.to_numpy()
        omegas = matrix.columns.to_numpy()
        mesh = ax.pcolormesh(
            epochs, omegas, matrix.to_numpy().T, shading="nearest", cmap="viridis", vmin=0.0, vmax=1.0
        )
        fig.colorbar(mesh, ax=ax, label="normalized magnitude")
        ax.set_xlabel("epoch")
        ax.set_ylabel("omega")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        buffer = BytesIO()
        fig.savefig(buffer, format="svg")
        return buffer.getvalue()
    finally:
        plt.close(fig)


def plot_dynamics(in_path: str | Path, out_path: str | Path, title: str | None = None) -> Path:
    out_path = Path(out_path)
    atomic_write_bytes(out_path, dynamics_svg(load_dynamics(in_path), title))
    logger.info(f"Wrote heatmap {out_path}")
    return out_path
