"""Run manifest and summary schemas."""

from datetime import datetime

from pydantic import BaseModel, Field

PARAMS_BYTE_ORDER = "little-endian float64 (<f8)"


class FileEntry(BaseModel):
    """One artifact of a run directory."""

    path: str
    sha256: str
    bytes: int = Field(..., ge=0)


class RunManifest(BaseModel):
    """Provenance of a run directory."""

    tool_version: str
    command: str
    config_hash: str | None = None
    started_at: datetime
    finished_at: datetime
    params_byte_order: str = PARAMS_BYTE_ORDER
    files: list[FileEntry] = Field(default_factory=list)


class BoundSummary(BaseModel):
    instances: int
    violations: int
    min_slack: float
