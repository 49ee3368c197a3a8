"""Atomic artifact writing, parameter checkpoints and run manifests."""

import hashlib
import json
import logging
import math
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from spectral_lab import __version__
from spectral_lab.core.exceptions import PersistenceError
from spectral_lab.models.circuit import ParameterTable
from spectral_lab.models.experiments import (
    ConvergenceTable,
    InitSweepTable,
    PerturbationReport,
    TrainingTrace,
)
from spectral_lab.models.theory import BoundReport
from spectral_lab.schemas.manifest import FileEntry, RunManifest
from spectral_lab.schemas.run_config import RunConfig, config_hash, dump_config

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
PARAMS_DTYPE = np.dtype("<f8")


# ============== Low-level writes ==============
def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write to a temporary file in the target directory, then rename into place."""
    tmp_name: str | None = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except OSError as exc:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise PersistenceError(f"Cannot write {path}: {exc}") from exc


def csv_bytes(frame: pd.DataFrame) -> bytes:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n").encode(
        "utf-8"
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def json_bytes(payload: Any) -> bytes:
    return (json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n").encode("utf-8")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1024 * 1024), b""):
            digest.update(chunk)
    return digest.hexdigest()


def params_bytes(params: ParameterTable) -> bytes:
    return params.values.astype(PARAMS_DTYPE).tobytes()


def read_params(path: str | Path) -> ParameterTable:
    """Load a checkpoint written as raw little-endian float64."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise PersistenceError(f"Cannot read checkpoint {path}: {exc}") from exc
    if len(data) % PARAMS_DTYPE.itemsize:
        raise PersistenceError(f"Checkpoint {path} is not a whole number of float64 values")
    return ParameterTable(np.frombuffer(data, dtype=PARAMS_DTYPE).astype(np.float64))


# ============== Result tables ==============
def trace_frame(trace: TrainingTrace) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "epoch": trace.eval_epochs,
            "loss": trace.losses,
            "parseval_residual": trace.parseval_residuals,
        }
    )


def dynamics_frame(trace: TrainingTrace) -> pd.DataFrame:
    """Long-format epoch x omega normalized magnitudes."""
    matrix = trace.matrix
    epochs = np.repeat(np.asarray(trace.eval_epochs, dtype=np.int64), trace.target_omegas.size)
    omegas = np.tile(trace.target_omegas.astype(np.int64), len(trace.eval_epochs))
    return pd.DataFrame({"epoch": epochs, "omega": omegas, "normalized": matrix.reshape(-1)})


def snapshots_frame(trace: TrainingTrace) -> pd.DataFrame:
    records = [
        {
            "epoch": epoch,
            "omega": int(omega),
            "re": float(value.real),
            "im": float(value.imag),
            "abs": float(abs(value)),
        }
        for epoch, snapshot in zip(trace.eval_epochs, trace.snapshots, strict=True)
        for omega, value in zip(snapshot.omegas, snapshot.coefficients, strict=True)
        if omega >= 0
    ]
    return pd.DataFrame(records, columns=["epoch", "omega", "re", "im", "abs"])


def perturbation_frame(report: PerturbationReport) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "delta": np.repeat(report.deltas, report.omegas.size),
            "omega": np.tile(report.omegas.astype(np.int64), report.deltas.size),
            "normalized": report.matrix.reshape(-1),
        }
    )


def convergence_frame(table: ConvergenceTable) -> pd.DataFrame:
    """Empty ``epochs_to_converge`` cells mean no run converged."""
    return pd.DataFrame(
        [
            {
                "layout": row.layout,
                "cnots_per_layer": row.cnots_per_layer,
                "omega": row.omega,
                "epochs_to_converge": row.epochs_to_converge,
                "converged_runs": row.converged_runs,
                "runs": row.runs,
            }
            for row in table.rows
        ],
        columns=["layout", "cnots_per_layer", "omega", "epochs_to_converge", "converged_runs", "runs"],
    )


def init_sweep_frame(table: InitSweepTable) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "sigma": np.repeat(table.sigmas, table.omegas.size),
            "sigma_squared": np.repeat(table.sigmas**2, table.omegas.size),
            "omega": np.tile(table.omegas.astype(np.int64), table.sigmas.size),
            "mean_abs_sq": table.mean_abs_sq.reshape(-1),
        }
    )


def bounds_frame(report: BoundReport) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"k": row.k, "omega": row.omega, "lhs": row.lhs, "rhs": row.rhs, "slack": row.slack}
            for row in report.rows
        ],
        columns=["k", "omega", "lhs", "rhs", "slack"],
    )


# ============== Run directory ==============
class RunDirectory:
    """Output directory of one command, with a manifest of everything written."""

    def __init__(self, path: str | Path, command: str, config: RunConfig | None = None) -> None:
        """Create the directory and start the run clock.

        Args:
            path: Output directory.
            command: Subcommand name recorded in the manifest.
            config: Validated config, hashed into the manifest and copied as config.json.
        """
        self.path = Path(path)
        self.command = command
        self.config = config
        self.started_at = datetime.now(timezone.utc)
        self.files: list[str] = []
        try:
            self.path.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise PersistenceError(f"Cannot create output directory {self.path}: {exc}") from exc

    def _write(self, name: str, data: bytes) -> Path:
        target = self.path / name
        atomic_write_bytes(target, data)
        if name not in self.files:
            self.files.append(name)
        logger.debug(f"Wrote {target} ({len(data)} bytes)")
        return target

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        return self._write(name, csv_bytes(frame))

    def write_json(self, name: str, payload: Any) -> Path:
        return self._write(name, json_bytes(payload))

    def write_params(self, name: str, params: ParameterTable) -> Path:
        return self._write(name, params_bytes(params))

    def write_config(self) -> Path | None:
        if self.config is None:
            return None
        return self._write("config.json", (dump_config(self.config) + "\n").encode("utf-8"))

    def finish(self) -> RunManifest:
        """Write manifest.json listing every artifact with its checksum."""
        entries = [
            FileEntry(path=name, sha256=sha256_file(self.path / name), bytes=(self.path / name).stat().st_size)
            for name in sorted(self.files)
        ]
        manifest = RunManifest(
            tool_version=__version__,
            command=self.command,
            config_hash=config_hash(self.config) if self.config is not None else None,
            started_at=self.started_at,
            finished_at=datetime.now(timezone.utc),
            files=entries,
        )
        atomic_write_bytes(
            self.path / "manifest.json", (manifest.model_dump_json(indent=2) + "\n").encode("utf-8")
        )
        logger.info(f"Run {self.command} finished: {len(entries)} files in {self.path}")
        return manifest
