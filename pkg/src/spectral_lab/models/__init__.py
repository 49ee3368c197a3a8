"""Domain types."""

from spectral_lab.models.circuit import (
    ComplexState,
    EncodingAngle,
    EncodingKind,
    EncodingScheme,
    EntanglementKind,
    EntanglementLayout,
    FixedAngle,
    Gate,
    GateKind,
    Observable,
    ParameterAngle,
    ParameterTable,
    ReuploaderCircuit,
)
from spectral_lab.models.experiments import (
    ConvergenceRow,
    ConvergenceTable,
    InitSweepTable,
    PerturbationReport,
    Profile,
    TargetFunction,
    TrainingOptions,
    TrainingTrace,
)
from spectral_lab.models.spectra import FourierSnapshot, FrequencySpectrum, LossSpectrum
from spectral_lab.models.theory import BoundReport, BoundRow, MomentTable, SmallAngleStats

__all__ = [
    "ComplexState",
    "EncodingAngle",
    "EncodingKind",
    "EncodingScheme",
    "EntanglementKind",
    "EntanglementLayout",
    "FixedAngle",
    "Gate",
    "GateKind",
    "Observable",
    "ParameterAngle",
    "ParameterTable",
    "ReuploaderCircuit",
    "ConvergenceRow",
    "ConvergenceTable",
    "InitSweepTable",
    "PerturbationReport",
    "Profile",
    "TargetFunction",
    "TrainingOptions",
    "TrainingTrace",
    "FourierSnapshot",
    "FrequencySpectrum",
    "LossSpectrum",
    "BoundReport",
    "BoundRow",
    "MomentTable",
    "SmallAngleStats",
]
