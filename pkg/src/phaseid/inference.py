"""Phase inference: constraint matrix -> regression matrix -> connectivity.

Noiseless mode takes the three least-significant left singular vectors of
the raw data as the constraint matrix. Noisy mode first removes estimated
technical losses from the phase rows, scales every row by its assumed error
standard deviation, extracts the subspace from the scaled data and maps it
back with L^-1. In both modes the regression matrix R = -C_d^-1 C_i should be
close to the 0/1 connectivity matrix, and each column is rounded to its
entry nearest 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousColumn,
    InsufficientSamples,
    RankDeficientData,
    SingularDependentBlock,
)
from .measurements import N_DEPENDENT, LossVector, MeasurementMatrix
from .preprocess import NoiseModelConfig, build_error_scaling, estimate_losses, remove_losses, scale_data
from .subspace import DiagonalScaling, smallest_subspace, svd
from .topology import PhaseAssignment, matrix_to_assignment

MODES = ("noiseless", "noisy")
MAX_CONDITION = 1e12
AMBIGUITY_TOL = 1e-9
COLUMN_SUM_DRIFT = 0.1


@dataclass(frozen=True, eq=False)
class RegressionMatrix:
    values: np.ndarray  # 3 x n_i
    condition_number: float


@dataclass(frozen=True, eq=False)
class InferenceReport:
    assignment: PhaseAssignment
    regression: RegressionMatrix
    connectivity: np.ndarray
    margins: np.ndarray
    condition_number_Cd: float
    mode: str
    constraint: np.ndarray
    loss: LossVector | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ambiguous_columns(self) -> np.ndarray:
        return np.flatnonzero(self.margins < AMBIGUITY_TOL)


def _check_identifiable(z: MeasurementMatrix) -> None:
    if z.N < z.n_i:
        raise InsufficientSamples(
            f"{z.N} intervals for {z.n_i} consumers; at least {z.n_i} are required"
        )
    if z.n_i and np.linalg.matrix_rank(z.independent) < z.n_i:
        raise RankDeficientData(
            f"consumer readings have rank {np.linalg.matrix_rank(z.independent)} < {z.n_i}"
        )


def constraint_matrix_noiseless(z: MeasurementMatrix) -> np.ndarray:
    """3 x n basis of the left null space of Z (smallest three singular directions)."""
    _check_identifiable(z)
    return smallest_subspace(svd(z.values), N_DEPENDENT)


def constraint_matrix_noisy(
    z: MeasurementMatrix,
    cfg: NoiseModelConfig | None = None,
    scaling: DiagonalScaling | None = None,
) -> np.ndarray:
    """MLPCA constraint matrix U_2s^T L^-1 of loss-corrected data.

    ``scaling`` overrides the error standard deviations derived from ``cfg``.
    """
    _check_identifiable(z)
    if scaling is None:
        scaling = build_error_scaling(z, cfg)
    scaled = scale_data(z, scaling)
    u2 = smallest_subspace(svd(scaled.values), N_DEPENDENT)
    return u2 / scaling.std_devs


def regression_matrix(c) -> RegressionMatrix:
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != N_DEPENDENT or c.shape[1] < N_DEPENDENT:
        raise ValueError(f"constraint matrix must be 3 x n with n >= 3, got {c.shape}")
    c_d, c_i = c[:, :N_DEPENDENT], c[:, N_DEPENDENT:]
    cond = float(np.linalg.cond(c_d))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularDependentBlock(f"condition number of C_d is {cond:.3e}")
    return RegressionMatrix(values=-np.linalg.solve(c_d, c_i), condition_number=cond)


def _round(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dist = np.abs(r - 1.0)
    winner = np.argmin(dist, axis=0)  # first minimum: ties go to the lowest phase
    n_i = r.shape[1]
    conn = np.zeros(r.shape, dtype=np.int8)
    conn[winner, np.arange(n_i)] = 1
    if n_i == 0:
        return conn, np.zeros(0)
    ordered = np.sort(dist, axis=0)
    return conn, ordered[1] - ordered[0]


def round_to_connectivity(r) -> tuple[np.ndarray, np.ndarray]:
    """Per column, set the entry closest to 1 to 1 and the rest to 0.

    Returns the 0/1 matrix and per-column margins (runner-up distance to 1
    minus winner distance). Columns with margin below 1e-9 raise an
    AmbiguousColumn warning; the tie goes to phase A, then B.
    """
    r = np.asarray(getattr(r, "values", r), dtype=np.float64)
    conn, margins = _round(r)
    for c in np.flatnonzero(margins < AMBIGUITY_TOL):
        warnings.warn(f"column {c} is ambiguous (margin {margins[c]:.3e})", AmbiguousColumn, stacklevel=2)
    return conn, margins


def infer_phases(
    z: MeasurementMatrix,
    mode: str = "noisy",
    cfg: NoiseModelConfig | None = None,
    scaling: DiagonalScaling | None = None,
) -> InferenceReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    notes: list[str] = []
    loss = None
    if mode == "noiseless":
        c = constraint_matrix_noiseless(z)
    else:
        loss = estimate_losses(z)
        if len(loss.negative_intervals):
            notes.append(f"{len(loss.negative_intervals)} intervals with negative estimated loss")
        c = constraint_matrix_noisy(remove_losses(z, loss), cfg, scaling)

    reg = regression_matrix(c)
    conn, margins = _round(reg.values)
    for col in np.flatnonzero(margins < AMBIGUITY_TOL):
        notes.append(f"consumer {col}: ambiguous column, resolved toward the lowest phase")
    drift = np.abs(reg.values.sum(axis=0) - 1.0)
    if np.any(drift > COLUMN_SUM_DRIFT):
        notes.append(
            f"{int(np.count_nonzero(drift > COLUMN_SUM_DRIFT))} regression columns "
            f"do not sum to 1 +/- {COLUMN_SUM_DRIFT}"
        )
    return InferenceReport(
        assignment=matrix_to_assignment(conn),
        regression=reg,
        connectivity=conn,
        margins=margins,
        condition_number_Cd=reg.condition_number,
        mode=mode,
        constraint=c,
        loss=loss,
        warnings=tuple(notes),
    )
