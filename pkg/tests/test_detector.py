import math

import numpy as np
import pytest

from plasmon_qrng.characterization import pair_frequencies
from plasmon_qrng.detector import (
    DetectionEvent,
    DetectionEvents,
    EventOrigin,
    add_afterpulses,
    add_dark_counts,
    apply_dead_time,
    apply_efficiency,
    last_kept_times,
    observed_rate,
    quantize,
)
from plasmon_qrng.errors import DomainError, TickOverflowError
from plasmon_qrng.photon_source import sample_poisson_arrivals

DEAD_TIME = 24e-9


def _events(*rows: tuple[int, float]) -> DetectionEvents:
    return DetectionEvents.from_events(DetectionEvent(channel, time) for channel, time in rows)


def test_dead_time_drops_event_inside_the_window() -> None:
    kept = apply_dead_time(_events((0, 0.0), (0, 10e-9)), DEAD_TIME)

    assert kept.to_list() == [DetectionEvent(0, 0.0)]


def test_dead_time_clocks_are_per_channel() -> None:
    kept = apply_dead_time(_events((0, 0.0), (1, 10e-9)), DEAD_TIME)

    assert len(kept) == 2


def test_dead_time_is_non_paralyzable() -> None:
    # the dropped event at 20 ns does not extend the window; 30 ns is kept
    kept = apply_dead_time(_events((0, 0.0), (0, 20e-9), (0, 30e-9)), DEAD_TIME)

    assert kept.times.tolist() == [0.0, 30e-9]


def test_zero_dead_time_is_identity() -> None:
    events = _events((0, 0.0), (0, 1e-12), (1, 2e-12))

    kept = apply_dead_time(events, 0.0)

    assert kept.to_list() == events.to_list()


def test_dead_time_carries_across_windows() -> None:
    kept = apply_dead_time(_events((0, 5e-9), (1, 5e-9)), DEAD_TIME, carry_in={0: -10e-9})

    assert kept.channels.tolist() == [1]
    assert last_kept_times(_events((0, 1e-9), (1, 2e-9), (0, 3e-9))) == {0: 3e-9, 1: 2e-9}


def test_unordered_events_are_rejected() -> None:
    with pytest.raises(DomainError, match="not time-ordered"):
        apply_dead_time(_events((0, 10e-9), (0, 0.0)), DEAD_TIME)


def test_efficiency_thins_the_stream(rng: np.random.Generator) -> None:
    times = np.arange(100_000) * 1e-6
    events = DetectionEvents.on_channel(times, 0, EventOrigin.SIGNAL)

    kept = apply_efficiency(events, 0.25, rng)

    assert abs(len(kept) - 25_000) < 5 * math.sqrt(100_000 * 0.25 * 0.75)
    assert apply_efficiency(events, 1.0, rng) is events


def test_dark_counts_follow_poisson_statistics() -> None:
    dark = add_dark_counts(100.0, 100.0, seed=11, channel=1)

    assert abs(len(dark) - 10_000) < 500
    assert set(dark.channels.tolist()) == {1}
    assert set(dark.origins.tolist()) == {EventOrigin.DARK}
    assert len(add_dark_counts(1.0, 0.0, seed=11)) == 0


def test_certain_afterpulse_doubles_a_single_event() -> None:
    result = add_afterpulses(_events((1, 1e-6)), 1.0, 50e-9, seed=3)

    assert len(result) == 2
    assert result.channels.tolist() == [1, 1]
    assert result.origins.tolist() == [EventOrigin.SIGNAL, EventOrigin.AFTERPULSE]
    assert result.times[1] >= 1e-6 + 50e-9


def test_afterpulse_probability_zero_is_identity() -> None:
    events = _events((0, 0.0), (1, 1e-6))

    assert add_afterpulses(events, 0.0, 50e-9, seed=3) is events


def test_afterpulse_count_is_binomial() -> None:
    times = np.arange(1_000_000) * 1e-6
    events = DetectionEvents.on_channel(times, 0, EventOrigin.SIGNAL)

    result = add_afterpulses(events, 0.01, 50e-9, seed=8)

    spawned = int(np.count_nonzero(result.origins == EventOrigin.AFTERPULSE))
    assert abs(spawned - 10_000) < 500
    assert np.all(np.diff(result.times) >= 0)


@pytest.mark.parametrize(
    ("time", "ticks"),
    [(1.00e-9, 40), (0.0, 0), (12.4e-12, 0), (25.1e-12, 1)],
)
def test_quantize_floors_to_ticks(time: float, ticks: int) -> None:
    records = quantize(_events((1, time)), 25e-12)

    assert int(records["ticks"][0]) == ticks
    assert int(records["channel"][0]) == 1


def test_quantize_rejects_tick_overflow() -> None:
    with pytest.raises(TickOverflowError):
        quantize(_events((0, 2.0**65 * 25e-12)), 25e-12)


def test_observed_rate_model() -> None:
    assert observed_rate(0.0, DEAD_TIME) == 0.0
    assert observed_rate(1 / DEAD_TIME, DEAD_TIME) == pytest.approx(0.5 / DEAD_TIME)


def test_quantize_snaps_only_within_tolerance() -> None:
    tick = 25e-12
    records = quantize(_events((0, (40 - 1e-8) * tick), (0, (41 - 1e-3) * tick), (0, 41.5 * tick)), tick)

    assert records["ticks"].tolist() == [40, 40, 41]


def test_dead_time_favours_alternating_pairs(rng: np.random.Generator) -> None:
    # two detectors at 1.2e6 /s each; about 1e7 detected bits
    per_channel, duration = 1.2e6, 4.3
    arrivals = sample_poisson_arrivals(2 * per_channel, duration, seed=21)
    channels = (rng.random(len(arrivals)) < 0.5).astype(np.uint8)
    events = DetectionEvents(arrivals.times, channels, np.zeros(len(arrivals), dtype=np.uint8))

    kept = apply_dead_time(events, DEAD_TIME)
    pairs = pair_frequencies(kept.channels)
    n = len(kept) - 1
    excess = (pairs.p01 + pairs.p10) - (pairs.p00 + pairs.p11)
    z = excess * math.sqrt(n) / math.sqrt(1.0 - excess**2)

    assert n >= 10_000_000
    assert z >= 5
    # after a click its own detector is blind for the dead time while the other
    # one is live: P(same detector next) = exp(-r tau) / 2
    assert excess == pytest.approx(1.0 - math.exp(-per_channel * DEAD_TIME), rel=0.1)
    for channel in (0, 1):
        count = int(np.count_nonzero(kept.channels == channel))
        assert count == pytest.approx(observed_rate(per_channel, DEAD_TIME) * duration, rel=0.01)
