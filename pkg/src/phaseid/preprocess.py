"""Noisy-data preparation: technical-loss removal and MLPCA error scaling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroMeanRow, ZeroPhaseTotal
from .measurements import LossVector, MeasurementMatrix
from .subspace import DiagonalScaling, cholesky_diagonal

ERROR_MODELS = ("relative", "mean_as_variance")


@dataclass(frozen=True)
class NoiseModelConfig:
    """Assumed measurement-error model.

    ``error_model="relative"`` takes each meter's error std as
    ``relative_std * mean(row)``. ``"mean_as_variance"`` instead uses the row
    mean itself as the variance; it is kept for comparison only.
    Clock jitter is not pre-processed separately; it is folded into the
    Gaussian budget and only the simulator reads it.
    """

    relative_std: float = 0.01
    interval_minutes: int = 15
    clock_jitter_std_seconds: float = 0.0
    error_model: str = "relative"

    def __post_init__(self):
        if not 0 < self.relative_std <= 0.05:
            raise ValueError(f"relative_std must be in (0, 0.05], got {self.relative_std}")
        if self.interval_minutes <= 0:
            raise ValueError("interval_minutes must be positive")
        if self.clock_jitter_std_seconds < 0:
            raise ValueError("clock_jitter_std_seconds must be >= 0")
        if self.error_model not in ERROR_MODELS:
            raise ValueError(f"error_model must be one of {ERROR_MODELS}")


def estimate_losses(z: MeasurementMatrix) -> LossVector:
    """Per-interval phase-meter total minus consumer total. May be negative on noisy data."""
    return LossVector(z.dependent.sum(axis=0) - z.independent.sum(axis=0))


def remove_losses(z: MeasurementMatrix, loss: LossVector) -> MeasurementMatrix:
    """Subtract each interval's loss from the phase rows in proportion to their readings."""
    loss = np.asarray(getattr(loss, "loss", loss), dtype=np.float64)
    if loss.shape != (z.N,):
        raise ValueError(f"loss vector has length {loss.shape}, expected {z.N}")
    dep = z.dependent
    total = dep.sum(axis=0)
    if np.any(total == 0):
        j = int(np.flatnonzero(total == 0)[0])
        raise ZeroPhaseTotal(f"phase meters sum to zero in interval {j}")
    corrected = dep - dep * (loss / total)
    values = z.values.copy()
    values[: z.n_d] = corrected
    return z.with_values(values)


def build_error_scaling(z: MeasurementMatrix, cfg: NoiseModelConfig | None = None) -> DiagonalScaling:
    cfg = cfg or NoiseModelConfig()
    means = z.values.mean(axis=1)
    if np.any(means <= 0):
        i = int(np.flatnonzero(means <= 0)[0])
        raise ZeroMeanRow(f"row {i} has non-positive mean {means[i]!r}")
    if cfg.error_model == "relative":
        variances = (cfg.relative_std * means) ** 2
    else:
        variances = means
    return cholesky_diagonal(variances)


def scale_data(z: MeasurementMatrix, l: DiagonalScaling) -> MeasurementMatrix:
    """L^-1 Z: row i divided by std_devs[i]."""
    std = l.std_devs
    if std.shape != (z.n,):
        raise ValueError(f"scaling has {std.shape[0]} entries, data has {z.n} rows")
    return z.with_values(z.values / std[:, None])
