import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import almost
from qugrid import (
    Distribution,
    empirical_distribution,
    measure_shot,
    probabilities,
    sample,
    simulate,
)

BELL = Distribution(np.array([0.5, 0.0, 0.0, 0.5]))


def test_sample_point_mass():
    counts = sample(Distribution(np.array([1.0, 0.0])), 10)
    assert counts == {"0": 10}


def test_sample_bell_golden_seed():
    # frozen for the documented PCG64 + inverse-CDF scheme
    counts = sample(BELL, 1000, seed=42)
    assert counts == {"00": 503, "11": 497}


def test_sample_never_leaves_support():
    counts = sample(BELL, 5000, seed=9)
    assert set(counts) <= {"00", "11"}
    assert sum(counts.values()) == 5000


def test_sample_rejects_nonpositive_count():
    with pytest.raises(ValueError):
        sample(BELL, 0)
    with pytest.raises(ValueError):
        sample(BELL, -3)


def test_sample_is_reproducible():
    assert sample(BELL, 1000, seed=7) == sample(BELL, 1000, seed=7)


def test_sample_large_run_frequencies():
    counts = sample(BELL, 100_000, seed=2024)
    assert counts == {"00": 50090, "11": 49910}
    assert abs(counts["00"] / 100_000 - 0.5) < 0.01


def test_measure_shot_point_mass():
    rng = np.random.default_rng(0)
    record = measure_shot(Distribution(np.array([0.0, 1.0])), "0", rng)
    assert (record.index, record.input, record.output) == (1, "0", "1")


def test_measure_shot_stays_in_support():
    rng = np.random.default_rng(13)
    for i in range(50):
        record = measure_shot(BELL, "00", rng, index=i + 1)
        assert record.output in ("00", "11")
        assert record.index == i + 1


def test_measure_shot_golden_sequence():
    half = Distribution(np.array([0.5, 0.5]))
    rng = np.random.default_rng(7)
    outputs = [measure_shot(half, "0", rng, index=i + 1).output for i in range(10)]
    assert outputs == ["1", "1", "1", "0", "0", "1", "0", "1", "1", "0"]


def test_empirical_distribution_sums_to_one():
    dist = empirical_distribution(BELL, 1000, seed=42)
    assert almost(dist.probabilities.sum(), 1.0)
    assert almost(dist.probabilities, [0.503, 0, 0, 0.497])


def test_sampling_a_simulated_circuit(registry, bell_circuit):
    dist = probabilities(simulate(bell_circuit, "00", registry))
    counts = sample(dist, 1000, seed=42)
    assert counts == {"00": 503, "11": 497}


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8),
    st.integers(1, 500),
    st.integers(0, 2**31 - 1),
)
def test_sample_counts_always_sum_to_n(weights, n, seed):
    size = 1 << (len(weights) - 1).bit_length()
    padded = np.zeros(size)
    padded[: len(weights)] = weights
    dist = Distribution(padded / padded.sum())
    counts = sample(dist, n, seed=seed)
    assert sum(counts.values()) == n
    assert all(c > 0 for c in counts.values())
