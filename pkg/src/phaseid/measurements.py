"""Interval energy data matrix and its dependent/independent row partition."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

N_DEPENDENT = 3


def _frozen(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """n x N energy readings in Wh.

    Rows 0..2 are the transformer phase meters in order A, B, C; the
    remaining rows are the single-phase consumer meters.
    """

    values: np.ndarray
    interval_minutes: int = 15

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise ValueError(f"measurement matrix must be 2-D, got {values.ndim}-D")
        if values.shape[0] < N_DEPENDENT:
            raise ValueError(f"need at least {N_DEPENDENT} phase-meter rows, got {values.shape[0]}")
        if values.shape[1] < 1:
            raise ValueError("need at least one interval")
        if int(self.interval_minutes) <= 0:
            raise ValueError("interval_minutes must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "interval_minutes", int(self.interval_minutes))

    @classmethod
    def from_blocks(cls, dependent, independent, interval_minutes: int = 15) -> "MeasurementMatrix":
        dependent = np.atleast_2d(np.asarray(dependent, dtype=np.float64))
        independent = np.asarray(independent, dtype=np.float64)
        if independent.size == 0:
            independent = independent.reshape(0, dependent.shape[1])
        return cls(np.vstack([dependent, independent]), interval_minutes)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @property
    def n_d(self) -> int:
        return N_DEPENDENT

    @property
    def n_i(self) -> int:
        return self.n - N_DEPENDENT

    @property
    def dependent(self) -> np.ndarray:
        return self.values[:N_DEPENDENT]

    @property
    def independent(self) -> np.ndarray:
        return self.values[N_DEPENDENT:]

    def with_values(self, values) -> "MeasurementMatrix":
        return MeasurementMatrix(values, self.interval_minutes)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class LossVector:
    """Aggregate technical loss per interval (Wh)."""

    loss: np.ndarray

    def __post_init__(self):
        loss = _frozen(self.loss)
        if loss.ndim != 1:
            raise ValueError("loss vector must be 1-D")
        object.__setattr__(self, "loss", loss)

    @property
    def negative_intervals(self) -> np.ndarray:
        return np.flatnonzero(self.loss < 0)

    def __len__(self) -> int:
        return self.loss.shape[0]


@dataclass(frozen=True)
class ValidationReport:
    n: int
    N: int
    n_i: int
    consumer_rank: int
    findings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.findings


def validate(z: MeasurementMatrix) -> ValidationReport:
    """Check a data matrix for defects the inference pipeline cannot tolerate."""
    v = z.values
    findings: list[str] = []
    finite = np.isfinite(v)
    for i, j in np.argwhere(~finite):
        findings.append(f"non-finite at ({i},{j})")
    for i, j in np.argwhere(finite & (v < 0)):
        findings.append(f"negative at ({i},{j})")

    block = z.independent
    if z.n_i == 0:
        rank = 0
    elif finite[N_DEPENDENT:].all():
        rank = int(np.linalg.matrix_rank(block))
    else:
        rank = int(np.linalg.matrix_rank(np.where(np.isfinite(block), block, 0.0)))

    if z.N < z.n_i:
        findings.append(
            f"N < n_i: {z.N} intervals for {z.n_i} consumers, connectivity not identifiable"
        )
    elif rank < z.n_i:
        findings.append(f"consumer block rank {rank} < n_i = {z.n_i}")
    return ValidationReport(n=z.n, N=z.N, n_i=z.n_i, consumer_rank=rank, findings=tuple(findings))


def split(z: MeasurementMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(phase-meter block 3 x N, consumer block n_i x N); views, not copies."""
    return z.dependent, z.independent
