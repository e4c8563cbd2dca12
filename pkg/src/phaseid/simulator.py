"""Synthetic feeder data with full ground-truth bookkeeping.

A run draws per-phase consumer counts, binds each consumer to a load tier,
samples i.i.d. uniform interval readings within that tier, sums them onto the
phase meters with a proportional technical loss, and finally perturbs every
reading (phase and consumer) with Gaussian noise whose std is a fixed
fraction of the reading.

Matrices are drawn interval-major, so a run with a larger ``n_multiplier``
extends the intervals of the same seed's smaller run rather than replacing
them.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .measurements import LossVector, MeasurementMatrix
from .rng import (
    GENERATOR_ID,
    STREAM_LOSSES,
    STREAM_NETWORK,
    STREAM_NOISE,
    STREAM_READINGS,
    Stream,
)
from .topology import N_PHASES, PhaseAssignment

DEFAULT_TIERS = ((10.0, 1000.0), (10.0, 2000.0), (10.0, 3000.0))
LOSS_DRAWS = ("per_interval", "per_run")
NOISE_DRAWS = ("per_meter", "per_reading")

# A load swing of this factor during one second of clock error sets the jitter budget.
JITTER_LOAD_SWING = 5.0


def _pair(value, name: str, cast=float) -> tuple:
    lo, hi = (cast(v) for v in value)
    if lo > hi:
        raise ValueError(f"{name}: lower bound {lo} exceeds upper bound {hi}")
    return lo, hi


@dataclass(frozen=True)
class SimulationConfig:
    seed: int = 0
    consumers_per_phase_range: tuple[int, int] = (5, 100)
    load_tiers: tuple[tuple[float, float], ...] = DEFAULT_TIERS
    loss_range: tuple[float, float] = (0.02, 0.05)
    noise_std_range: tuple[float, float] = (0.005, 0.01)
    n_multiplier: float = 3.0
    loss_draw: str = "per_interval"
    noise_draw: str = "per_meter"
    interval_minutes: int = 15
    clock_jitter_std_seconds: float = 0.0
    phase_counts: tuple[int, int, int] | None = None  # overrides the random draw

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        set_("seed", int(self.seed))
        lo, hi = _pair(self.consumers_per_phase_range, "consumers_per_phase_range", int)
        if lo < 1:
            raise ValueError("each phase needs at least one consumer")
        set_("consumers_per_phase_range", (lo, hi))
        tiers = tuple(_pair(t, "load tier") for t in self.load_tiers)
        if len(tiers) != 3 or any(t[0] < 0 for t in tiers):
            raise ValueError("load_tiers must be three non-negative intervals")
        set_("load_tiers", tiers)
        loss = _pair(self.loss_range, "loss_range")
        if loss[0] < 0 or loss[1] > 0.5:
            raise ValueError("loss_range must lie within [0, 0.5]")
        set_("loss_range", loss)
        noise = _pair(self.noise_std_range, "noise_std_range")
        if noise[0] < 0 or noise[1] > 0.5:
            raise ValueError("noise_std_range must lie within [0, 0.5]")
        set_("noise_std_range", noise)
        if not self.n_multiplier > 0:
            raise ValueError("n_multiplier must be positive")
        if self.loss_draw not in LOSS_DRAWS:
            raise ValueError(f"loss_draw must be one of {LOSS_DRAWS}")
        if self.noise_draw not in NOISE_DRAWS:
            raise ValueError(f"noise_draw must be one of {NOISE_DRAWS}")
        if self.interval_minutes <= 0 or self.clock_jitter_std_seconds < 0:
            raise ValueError("interval_minutes must be positive and jitter non-negative")
        if self.phase_counts is not None:
            counts = tuple(int(c) for c in self.phase_counts)
            if len(counts) != N_PHASES or min(counts) < 1:
                raise ValueError("phase_counts must be three positive integers")
            set_("phase_counts", counts)

    def replace(self, **changes) -> "SimulationConfig":
        return dataclasses.replace(self, **changes)

    def intervals_for(self, n_i: int) -> int:
        return max(1, int(round(self.n_multiplier * n_i)))

    def jitter_relative_std(self) -> float:
        return JITTER_LOAD_SWING * self.clock_jitter_std_seconds / (self.interval_minutes * 60)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["generator_id"] = GENERATOR_ID
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names - {"generator_id"}
        if unknown:
            raise ValueError(f"unknown simulation keys: {sorted(unknown)}")
        if d.get("generator_id", GENERATOR_ID) != GENERATOR_ID:
            raise ValueError(f"unsupported generator {d['generator_id']!r}")
        kwargs = {k: v for k, v in d.items() if k in names}
        if "load_tiers" in kwargs:
            kwargs["load_tiers"] = tuple(tuple(t) for t in kwargs["load_tiers"])
        for key in ("consumers_per_phase_range", "loss_range", "noise_std_range", "phase_counts"):
            if kwargs.get(key) is not None:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class GroundTruth:
    assignment: PhaseAssignment
    true_readings: MeasurementMatrix  # exact sums on the phase rows, no loss, no noise
    injected_loss: LossVector
    per_interval_loss_fraction: np.ndarray
    consumer_tiers: np.ndarray
    noise_std_fractions: np.ndarray  # effective relative std per meter, n x N

    @property
    def lossy_readings(self) -> np.ndarray:
        """Pre-noise readings as the meters would see them (losses on the phase rows)."""
        values = self.true_readings.values.copy()
        values[:N_PHASES] *= 1.0 + self.per_interval_loss_fraction
        return values

    def noise_std(self) -> np.ndarray:
        """Absolute noise std of every entry of the measured matrix."""
        return self.noise_std_fractions * self.lossy_readings


@dataclass(frozen=True, eq=False)
class SimulatedDataset:
    noisy: MeasurementMatrix
    truth: GroundTruth
    config_echo: SimulationConfig


def generate_network(cfg: SimulationConfig, rng: Stream) -> PhaseAssignment:
    if cfg.phase_counts is not None:
        counts = np.array(cfg.phase_counts)
    else:
        lo, hi = cfg.consumers_per_phase_range
        counts = rng.integers(lo, hi, N_PHASES)
    contiguous = np.repeat(np.arange(N_PHASES), counts)
    return PhaseAssignment(tuple(contiguous[rng.permutation(contiguous.shape[0])]))


def generate_consumer_readings(
    a: PhaseAssignment, cfg: SimulationConfig, rng: Stream
) -> tuple[np.ndarray, np.ndarray]:
    """(n_i x N readings, tier index per consumer)."""
    n_i = a.n_i
    N = cfg.intervals_for(n_i)
    tiers = rng.integers(0, len(cfg.load_tiers) - 1, n_i)
    bounds = np.array(cfg.load_tiers)[tiers]
    u = rng.random((N, n_i)).T
    readings = bounds[:, :1] + (bounds[:, 1:] - bounds[:, :1]) * u
    return readings, tiers


def _phase_sums(readings: np.ndarray, a: PhaseAssignment) -> np.ndarray:
    sums = np.zeros((N_PHASES, readings.shape[1]))
    for c, phase in enumerate(a.as_array()):  # ascending consumer index, fixed order
        sums[phase] += readings[c]
    return sums


def aggregate_with_losses(
    readings: np.ndarray, a: PhaseAssignment, cfg: SimulationConfig, rng: Stream
) -> tuple[np.ndarray, LossVector, np.ndarray]:
    """(lossy phase rows 3 x N, injected loss, loss fraction per interval)."""
    N = readings.shape[1]
    lo, hi = cfg.loss_range
    if cfg.loss_draw == "per_interval":
        fractions = rng.uniform(lo, hi, N)
    else:
        fractions = np.full(N, rng.uniform(lo, hi))
    exact = _phase_sums(readings, a)
    total = np.zeros(N)
    for row in readings:
        total += row
    return exact * (1.0 + fractions), LossVector(fractions * total), fractions


def _noise_fractions(cfg: SimulationConfig, shape: tuple[int, int], rng: Stream) -> np.ndarray:
    n, N = shape
    lo, hi = cfg.noise_std_range
    if cfg.noise_draw == "per_meter":
        u = np.repeat(rng.uniform(lo, hi, n)[:, None], N, axis=1)
    else:
        u = rng.uniform(lo, hi, (N, n)).T
    jitter = cfg.jitter_relative_std()
    return np.sqrt(u**2 + jitter**2) if jitter else u


def add_measurement_noise(
    z: MeasurementMatrix, cfg: SimulationConfig, rng: Stream
) -> tuple[MeasurementMatrix, np.ndarray]:
    """Gaussian draw around every entry with std = fraction x entry; returns fractions too."""
    fractions = _noise_fractions(cfg, (z.n, z.N), rng)
    g = rng.normal((z.N, z.n)).T
    return z.with_values(z.values + fractions * z.values * g), fractions


def simulate(cfg: SimulationConfig) -> SimulatedDataset:
    a = generate_network(cfg, Stream(cfg.seed, STREAM_NETWORK))
    readings, tiers = generate_consumer_readings(a, cfg, Stream(cfg.seed, STREAM_READINGS))
    lossy, injected, fractions = aggregate_with_losses(readings, a, cfg, Stream(cfg.seed, STREAM_LOSSES))
    true = MeasurementMatrix(np.vstack([_phase_sums(readings, a), readings]), cfg.interval_minutes)
    measured = MeasurementMatrix(np.vstack([lossy, readings]), cfg.interval_minutes)
    noisy, noise_fractions = add_measurement_noise(measured, cfg, Stream(cfg.seed, STREAM_NOISE))
    truth = GroundTruth(
        assignment=a,
        true_readings=true,
        injected_loss=injected,
        per_interval_loss_fraction=fractions,
        consumer_tiers=tiers,
        noise_std_fractions=noise_fractions,
    )
    return SimulatedDataset(noisy=noisy, truth=truth, config_echo=cfg)
