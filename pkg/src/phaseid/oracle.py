"""Exhaustive search over all 3**n_i phase assignments.

Deliberately simple: every candidate is scored by the Frobenius residual
between the phase rows and the per-phase consumer sums it implies. It shares
no code with the PCA pipeline beyond the loss correction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .measurements import MeasurementMatrix
from .preprocess import estimate_losses, remove_losses
from .topology import N_PHASES, PhaseAssignment

MAX_CONSUMERS = 12
CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    best: PhaseAssignment
    best_residual: float
    runner_up_residual: float

    @property
    def decisive(self) -> bool:
        return self.best_residual < 0.5 * self.runner_up_residual


def decode(index: int | np.ndarray, n_i: int) -> np.ndarray:
    """Mixed-radix digits of candidate ``index``; consumer 0 is the most significant digit."""
    powers = N_PHASES ** np.arange(n_i - 1, -1, -1, dtype=np.int64)
    return (np.asarray(index, dtype=np.int64)[..., None] // powers) % N_PHASES


def brute_force_assign(z: MeasurementMatrix, apply_loss_correction: bool = True) -> OracleResult:
    if z.n_i > MAX_CONSUMERS:
        raise TooLarge(f"{z.n_i} consumers exceeds the exhaustive-search cap of {MAX_CONSUMERS}")
    if apply_loss_correction:
        z = remove_losses(z, estimate_losses(z))
    dep, indep = z.dependent, z.independent
    n_i = z.n_i
    total = N_PHASES**n_i

    # (squared residual, index) of the two best candidates seen so far
    best: list[tuple[float, int]] = []
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total))
        digits = decode(idx, n_i)
        sq = np.zeros(idx.shape[0])
        for k in range(N_PHASES):
            onehot = (digits == k).astype(np.float64)
            sq += ((dep[k] - onehot @ indep) ** 2).sum(axis=1)
        top = np.lexsort((idx, sq))[:2]
        best = sorted(best + [(float(sq[t]), int(idx[t])) for t in top])[:2]

    best_sq, best_idx = best[0]
    runner_sq = best[1][0] if len(best) > 1 else np.inf
    return OracleResult(
        best=PhaseAssignment(tuple(decode(best_idx, n_i))),
        best_residual=float(np.sqrt(best_sq)),
        runner_up_residual=float(np.sqrt(runner_sq)),
    )
