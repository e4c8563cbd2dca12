"""Phase identification of single-phase consumers from interval energy readings."""
from .errors import (
    AmbiguousColumn,
    DegenerateGap,
    InsufficientSamples,
    MalformedMatrix,
    PhaseIdError,
    RankDeficientData,
    SingularDependentBlock,
)
from .inference import InferenceReport, infer_phases
from .measurements import MeasurementMatrix, validate
from .preprocess import NoiseModelConfig
from .simulator import SimulationConfig, simulate
from .topology import Phase, PhaseAssignment, assignment_to_matrix, matrix_to_assignment

__all__ = [
    "AmbiguousColumn",
    "DegenerateGap",
    "InferenceReport",
    "InsufficientSamples",
    "MalformedMatrix",
    "MeasurementMatrix",
    "NoiseModelConfig",
    "Phase",
    "PhaseAssignment",
    "PhaseIdError",
    "RankDeficientData",
    "SimulationConfig",
    "SingularDependentBlock",
    "assignment_to_matrix",
    "infer_phases",
    "matrix_to_assignment",
    "simulate",
    "validate",
]
