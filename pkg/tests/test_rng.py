import numpy as np
import pytest

from phaseid.rng import Stream

# First raw words of Philox4x64-10 keyed (5, 2), counter 0.
FROZEN_RAW = [15619566328700425198, 13223840669503165452, 7748127585963790793]


def test_raw_stream_is_pinned():
    assert Stream(5, 2).raw(3).tolist() == FROZEN_RAW


def test_uniform_from_raw_words():
    words = Stream(5, 2).raw(3)
    expected = [(int(w) >> 11) * 2.0**-53 for w in words]
    assert Stream(5, 2).random(3).tolist() == expected


def test_streams_are_independent():
    assert Stream(1, 0).raw(4).tolist() != Stream(1, 1).raw(4).tolist()
    assert Stream(1, 0).raw(4).tolist() != Stream(2, 0).raw(4).tolist()


def test_integers_inclusive_bounds():
    draws = Stream(3, 0).integers(5, 7, 5000)
    assert set(np.unique(draws)) == {5, 6, 7}
    assert Stream(3, 0).integers(1, 1, 10).tolist() == [1] * 10


def test_integers_formula():
    u = Stream(8, 1).random(10)
    assert Stream(8, 1).integers(0, 9, 10).tolist() == np.floor(u * 10).astype(int).tolist()


def test_normal_moments():
    g = Stream(4, 3).normal(100_000)
    assert abs(g.mean()) < 0.02
    assert abs(g.std() - 1) < 0.02


def test_permutation_is_permutation():
    p = Stream(0, 0).permutation(50)
    assert sorted(p.tolist()) == list(range(50))
    assert p.tolist() != list(range(50))


def test_seed_bounds():
    with pytest.raises(ValueError):
        Stream(-1, 0)
    with pytest.raises(ValueError):
        Stream(2**64, 0)
