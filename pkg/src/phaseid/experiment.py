"""Success-rate and timing sweeps over simulated feeders.

Each cell of the sweep is a (loss regime, interval multiplier) pair. Trial
``t`` of every cell uses seed ``base_seed + t``, so cells share networks and
differ only in the quantity being swept.
"""
from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import PhaseIdError
from .inference import infer_phases
from .preprocess import NoiseModelConfig
from .simulator import SimulationConfig, simulate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    trials: int = 100
    n_multipliers: tuple[float, ...] = (1, 2, 3, 4)
    loss_regimes: tuple[tuple[float, float], ...] = ((0.02, 0.05), (0.05, 0.10))
    base_seed: int = 0
    mode: str = "noisy"
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    noise_model: NoiseModelConfig = field(default_factory=NoiseModelConfig)
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(m < 1 for m in self.n_multipliers):
            raise ValueError("interval multipliers must be >= 1")
        if self.mode not in ("noiseless", "noisy"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "n_multipliers", tuple(float(m) for m in self.n_multipliers))
        object.__setattr__(
            self, "loss_regimes", tuple((float(lo), float(hi)) for lo, hi in self.loss_regimes)
        )

    def regimes(self) -> tuple[tuple[float, float], ...]:
        # exact data has no losses to sweep over
        return ((0.0, 0.0),) if self.mode == "noiseless" else self.loss_regimes

    def trial_config(self, regime, multiplier: float, trial: int) -> SimulationConfig:
        changes = dict(seed=self.base_seed + trial, loss_range=regime, n_multiplier=multiplier)
        if self.mode == "noiseless":
            changes["noise_std_range"] = (0.0, 0.0)
        return self.simulation.replace(**changes)


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    n: int
    N: int
    success: bool
    seconds: float | None
    error: str | None = None


@dataclass(frozen=True)
class CellResult:
    loss_regime: tuple[float, float]
    n_multiplier: float
    trials: int
    successes: int
    mean_wall_time: float
    wall_time_by_node_count: tuple[tuple[int, float], ...]
    errors: int = 0
    outcomes: tuple[TrialOutcome, ...] = ()

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    cells: tuple[CellResult, ...]

    def cell(self, loss_regime, n_multiplier) -> CellResult:
        key = (tuple(float(x) for x in loss_regime), float(n_multiplier))
        for c in self.cells:
            if (c.loss_regime, c.n_multiplier) == key:
                return c
        raise KeyError(key)

    def without_timing(self) -> list[tuple]:
        """Everything that must be reproducible from the config."""
        return [
            (c.loss_regime, c.n_multiplier, c.trials, c.successes, c.errors,
             tuple((o.seed, o.n, o.N, o.success, o.error) for o in c.outcomes))
            for c in self.cells
        ]


def run_trial(sim_cfg: SimulationConfig, mode: str, noise_model: NoiseModelConfig) -> TrialOutcome:
    data = simulate(sim_cfg)
    z = data.noisy
    try:
        t0 = time.perf_counter()
        report = infer_phases(z, mode, noise_model)
        seconds = time.perf_counter() - t0
    except PhaseIdError as exc:
        log.warning("trial seed=%d failed: %s: %s", sim_cfg.seed, type(exc).__name__, exc)
        return TrialOutcome(sim_cfg.seed, z.n, z.N, False, None, f"{type(exc).__name__}: {exc}")
    return TrialOutcome(sim_cfg.seed, z.n, z.N, report.assignment == data.truth.assignment, seconds)


def _run_trial_args(args):
    return run_trial(*args)


def _summarize(regime, multiplier, outcomes: list[TrialOutcome]) -> CellResult:
    outcomes = sorted(outcomes, key=lambda o: o.seed)
    times = sorted((o.n, o.seconds) for o in outcomes if o.seconds is not None)
    return CellResult(
        loss_regime=regime,
        n_multiplier=multiplier,
        trials=len(outcomes),
        successes=sum(o.success for o in outcomes),
        mean_wall_time=float(np.mean([t for _, t in times])) if times else float("nan"),
        wall_time_by_node_count=tuple(times),
        errors=sum(o.error is not None for o in outcomes),
        outcomes=tuple(outcomes),
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    jobs = [
        (regime, mult, [(cfg.trial_config(regime, mult, t), cfg.mode, cfg.noise_model) for t in range(cfg.trials)])
        for regime in cfg.regimes()
        for mult in cfg.n_multipliers
    ]
    cells = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for regime, mult, args in jobs:
                cells.append(_summarize(regime, mult, list(pool.map(_run_trial_args, args))))
    else:
        for regime, mult, args in jobs:
            cells.append(_summarize(regime, mult, [run_trial(*a) for a in args]))
    return ExperimentResult(config=cfg, cells=tuple(cells))


SUCCESS_COLUMNS = (
    "loss_min", "loss_max", "n_multiplier", "trials", "successes", "errors",
    "success_rate", "success_pct", "mean_wall_time_s",
)
TIMING_COLUMNS = ("loss_min", "loss_max", "n_multiplier", "n", "seconds")


def success_rows(result: ExperimentResult) -> list[dict]:
    return [
        {
            "loss_min": c.loss_regime[0],
            "loss_max": c.loss_regime[1],
            "n_multiplier": c.n_multiplier,
            "trials": c.trials,
            "successes": c.successes,
            "errors": c.errors,
            "success_rate": c.success_rate,
            "success_pct": 100.0 * c.success_rate,
            "mean_wall_time_s": c.mean_wall_time,
        }
        for c in result.cells
    ]


def write_success_table(result: ExperimentResult, path) -> None:
    """Success rate per cell (N/n_i against success %)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SUCCESS_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(success_rows(result))


def write_timing_table(result: ExperimentResult, path) -> None:
    """One row per completed inference call (n against seconds)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TIMING_COLUMNS)
        for c in result.cells:
            for n, seconds in c.wall_time_by_node_count:
                w.writerow([c.loss_regime[0], c.loss_regime[1], c.n_multiplier, n, f"{seconds:.6e}"])
