import numpy as np
import pytest

from phaseid.rng import GENERATOR_ID, STREAM_NETWORK, STREAM_NOISE, STREAM_READINGS, Stream
from phaseid.simulator import (
    SimulationConfig,
    add_measurement_noise,
    aggregate_with_losses,
    generate_consumer_readings,
    generate_network,
    simulate,
)
from phaseid.measurements import MeasurementMatrix
from phaseid.topology import PhaseAssignment, assignment_to_matrix

NARROW_TIERS = ((100.0, 500.0), (500.0, 2000.0), (2000.0, 5000.0))


@pytest.mark.parametrize("seed", range(25))
def test_network_counts_in_range(seed):
    a = generate_network(SimulationConfig(seed=seed), Stream(seed, STREAM_NETWORK))
    assert all(5 <= c <= 100 for c in a.counts())


def test_network_degenerate_range():
    cfg = SimulationConfig(consumers_per_phase_range=(1, 1))
    a = generate_network(cfg, Stream(0, STREAM_NETWORK))
    assert a.n_i == 3 and a.counts() == (1, 1, 1)


def test_network_deterministic_and_shuffled():
    cfg = SimulationConfig(seed=3)
    a = generate_network(cfg, Stream(3, STREAM_NETWORK))
    assert a == generate_network(cfg, Stream(3, STREAM_NETWORK))
    arr = a.as_array()
    assert not np.all(np.diff(arr) >= 0)  # not left in contiguous blocks


def test_phase_counts_override():
    a = generate_network(SimulationConfig(phase_counts=(2, 3, 4)), Stream(0, STREAM_NETWORK))
    assert a.counts() == (2, 3, 4)


def test_readings_stay_in_tier():
    cfg = SimulationConfig(seed=2, load_tiers=NARROW_TIERS)
    a = generate_network(cfg, Stream(2, STREAM_NETWORK))
    readings, tiers = generate_consumer_readings(a, cfg, Stream(2, STREAM_READINGS))
    assert readings.shape == (a.n_i, 3 * a.n_i)
    bounds = np.array(NARROW_TIERS)[tiers]
    assert np.all(readings >= bounds[:, :1]) and np.all(readings < bounds[:, 1:])
    assert set(np.unique(tiers)) == {0, 1, 2}


def test_readings_constant_tiers():
    cfg = SimulationConfig(load_tiers=((7.0, 7.0),) * 3, n_multiplier=2)
    a = PhaseAssignment(("A", "B", "C", "A"))
    readings, _ = generate_consumer_readings(a, cfg, Stream(0, STREAM_READINGS))
    assert readings.shape == (4, 8)
    assert np.all(readings == 7.0)


def test_readings_deterministic():
    cfg = SimulationConfig()
    a = PhaseAssignment(("A", "B", "C") * 4)
    r1, _ = generate_consumer_readings(a, cfg, Stream(9, STREAM_READINGS))
    r2, _ = generate_consumer_readings(a, cfg, Stream(9, STREAM_READINGS))
    assert r1.tobytes() == r2.tobytes()


def test_zero_loss_gives_exact_sums():
    cfg = SimulationConfig(loss_range=(0.0, 0.0))
    a = PhaseAssignment(("A", "B", "C", "C", "A"))
    readings = np.random.default_rng(0).uniform(10, 100, size=(5, 9))
    dep, loss, fractions = aggregate_with_losses(readings, a, cfg, Stream(0, 2))
    np.testing.assert_allclose(dep, assignment_to_matrix(a) @ readings, rtol=1e-15)
    assert np.all(loss.loss == 0) and np.all(fractions == 0)


@pytest.mark.parametrize("loss_range", [(0.02, 0.05), (0.05, 0.10)])
def test_loss_excess_within_regime(loss_range):
    d = simulate(SimulationConfig(seed=1, loss_range=loss_range, noise_std_range=(0.0, 0.0)))
    excess = d.noisy.dependent.sum(axis=0) / d.noisy.independent.sum(axis=0) - 1
    assert np.all(excess >= loss_range[0] - 1e-12) and np.all(excess <= loss_range[1] + 1e-12)
    np.testing.assert_allclose(
        d.truth.injected_loss.loss, d.noisy.dependent.sum(axis=0) - d.noisy.independent.sum(axis=0), rtol=1e-9
    )


def test_per_run_loss_draw():
    d = simulate(SimulationConfig(seed=1, loss_draw="per_run"))
    assert np.unique(d.truth.per_interval_loss_fraction).size == 1


def test_zero_noise_is_identity():
    z = MeasurementMatrix(np.random.default_rng(1).uniform(1, 10, size=(5, 6)))
    out, _ = add_measurement_noise(z, SimulationConfig(noise_std_range=(0.0, 0.0)), Stream(0, STREAM_NOISE))
    assert out.values.tobytes() == z.values.tobytes()


def test_noise_statistics():
    v, u = 500.0, 0.01
    z = MeasurementMatrix(np.full((100, 100), v))
    out, fractions = add_measurement_noise(z, SimulationConfig(noise_std_range=(u, u)), Stream(17, STREAM_NOISE))
    sigma = u * v
    assert abs(out.values.mean() - v) <= 3 * sigma / 100
    assert abs(out.values.std() - sigma) <= 0.1 * sigma
    assert np.all(fractions == u)


def test_noise_per_meter_fraction():
    z = MeasurementMatrix(np.full((6, 20), 100.0))
    _, fractions = add_measurement_noise(z, SimulationConfig(), Stream(2, STREAM_NOISE))
    assert np.all(fractions == fractions[:, :1])
    assert np.all((fractions >= 0.005) & (fractions < 0.01))


def test_clock_jitter_folded_into_noise():
    cfg = SimulationConfig(noise_std_range=(0.003, 0.003), clock_jitter_std_seconds=1.0, interval_minutes=15)
    jitter = 5 * 1.0 / (15 * 60)
    z = MeasurementMatrix(np.full((4, 3), 10.0))
    _, fractions = add_measurement_noise(z, cfg, Stream(0, STREAM_NOISE))
    np.testing.assert_allclose(fractions, np.hypot(0.003, jitter))


def test_noise_deterministic():
    z = MeasurementMatrix(np.random.default_rng(1).uniform(1, 10, size=(5, 6)))
    cfg = SimulationConfig()
    a, _ = add_measurement_noise(z, cfg, Stream(5, STREAM_NOISE))
    b, _ = add_measurement_noise(z, cfg, Stream(5, STREAM_NOISE))
    assert a.values.tobytes() == b.values.tobytes()


@pytest.mark.parametrize("seed", range(5))
def test_truth_conserves_exactly(seed):
    d = simulate(SimulationConfig(seed=seed))
    t = d.truth.true_readings
    a = d.truth.assignment.as_array()
    for k in range(3):
        acc = np.zeros(t.N)
        for c in np.flatnonzero(a == k):
            acc += t.independent[c]
        assert acc.tobytes() == t.dependent[k].tobytes()


def test_interval_count_follows_multiplier():
    d = simulate(SimulationConfig(seed=4, n_multiplier=3))
    assert d.noisy.N == 3 * d.noisy.n_i
    assert d.noisy.values.shape == d.truth.true_readings.values.shape


def test_larger_multiplier_extends_same_run():
    short = simulate(SimulationConfig(seed=4, n_multiplier=1))
    long = simulate(SimulationConfig(seed=4, n_multiplier=3))
    assert short.truth.assignment == long.truth.assignment
    np.testing.assert_array_equal(long.noisy.values[:, : short.noisy.N], short.noisy.values)


def test_seeds_give_different_networks():
    for s in range(20):
        a = simulate(SimulationConfig(seed=2 * s, consumers_per_phase_range=(5, 30), n_multiplier=1)).truth.assignment
        b = simulate(SimulationConfig(seed=2 * s + 1, consumers_per_phase_range=(5, 30), n_multiplier=1)).truth.assignment
        assert a != b


def test_config_round_trip_dict():
    cfg = SimulationConfig(seed=12, loss_range=(0.05, 0.1), phase_counts=(3, 4, 5))
    d = cfg.to_dict()
    assert d["generator_id"] == GENERATOR_ID
    assert SimulationConfig.from_dict(d) == cfg


@pytest.mark.parametrize(
    "bad",
    [
        dict(loss_range=(0.1, 0.05)),
        dict(loss_range=(0.0, 0.6)),
        dict(consumers_per_phase_range=(0, 5)),
        dict(n_multiplier=0),
        dict(loss_draw="sometimes"),
        dict(seed=-1),
        dict(load_tiers=((1, 2), (3, 4))),
    ],
)
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SimulationConfig(**bad)
