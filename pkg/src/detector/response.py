import logging

import numpy as np

from ..errors import DomainError, TickOverflowError
from ..photon_source import sample_poisson_arrivals
from ..seeding import make_rng
from ..timetag.models import RECORD_DTYPE
from .models import DetectionEvents, EventOrigin

logger = logging.getLogger(__name__)

TICK_COUNTER_LIMIT = 2.0**64
# a ratio less than this many ticks below a boundary is counted on the boundary,
# so decimal times such as 1 ns / 25 ps give 40 and not 39.999...; any ratio
# further below floors normally
TICK_SNAP_TOLERANCE = 1e-6


def apply_efficiency(events: DetectionEvents, efficiency: float, rng: np.random.Generator) -> DetectionEvents:
    if not 0.0 <= efficiency <= 1.0:
        raise DomainError(f"efficiency must be in [0, 1], got {efficiency}")
    if efficiency == 1.0 or len(events) == 0:
        return events
    return events.select(rng.random(len(events)) < efficiency)


def apply_dead_time(
    events: DetectionEvents,
    dead_time: float,
    carry_in: dict[int, float] | None = None,
) -> DetectionEvents:
    """Non-paralyzable dead time with an independent clock per channel.

    An event is kept iff its time is >= (last kept time on its channel) + dead_time.
    ``carry_in`` maps channel -> last kept time from an earlier stretch of the stream.
    """
    if dead_time < 0:
        raise DomainError(f"dead_time must be >= 0, got {dead_time}")
    if len(events) == 0:
        return events

    carry_in = carry_in or {}
    keep = np.ones(len(events), dtype=bool)
    for channel in np.unique(events.channels).tolist():
        positions = np.flatnonzero(events.channels == channel)
        times = events.times[positions]
        if np.any(np.diff(times) < 0):
            raise DomainError(f"events on channel {channel} are not time-ordered")
        keep[positions] = _dead_time_mask(times, dead_time, carry_in.get(channel))
    return events.select(keep)


def _dead_time_mask(times: np.ndarray, dead_time: float, anchor: float | None) -> np.ndarray:
    keep = np.ones(times.size, dtype=bool)
    if times.size == 0 or dead_time <= 0:
        return keep

    # an event after a gap >= dead_time is always kept; only events after a
    # short gap need the sequential walk
    candidates = np.flatnonzero(np.diff(times) < dead_time) + 1
    first_blocked = anchor is not None and times[0] - anchor < dead_time
    if candidates.size == 0 and not first_blocked:
        return keep

    dropped: set[int] = set()
    if first_blocked:
        dropped.add(0)
    last_kept = anchor
    for index, time, previous in zip(
        candidates.tolist(), times[candidates].tolist(), times[candidates - 1].tolist(), strict=True
    ):
        if index - 1 not in dropped:
            last_kept = previous
        if time - last_kept < dead_time:
            dropped.add(index)
        else:
            last_kept = time

    keep[list(dropped)] = False
    return keep


def last_kept_times(events: DetectionEvents) -> dict[int, float]:
    result: dict[int, float] = {}
    for channel in np.unique(events.channels).tolist():
        result[channel] = float(events.times[events.channels == channel].max())
    return result


def add_dark_counts(
    duration: float,
    dark_rate: float,
    seed: int,
    channel: int = 0,
    start: float = 0.0,
) -> DetectionEvents:
    """Homogeneous Poisson dark events on one channel over [start, start + duration)."""
    if dark_rate < 0:
        raise DomainError(f"dark_rate must be >= 0, got {dark_rate}")
    arrivals = sample_poisson_arrivals(dark_rate, duration, seed, start=start)
    return DetectionEvents.on_channel(arrivals.times, channel, EventOrigin.DARK)


def add_afterpulses(
    events: DetectionEvents,
    afterpulse_prob: float,
    afterpulse_delay: float,
    seed: int,
) -> DetectionEvents:
    """Each event spawns, with probability afterpulse_prob, one afterpulse on its channel.

    The afterpulse lands at t + afterpulse_delay + Exp(mean=afterpulse_delay / 4).
    """
    if not 0.0 <= afterpulse_prob <= 1.0:
        raise DomainError(f"afterpulse_prob must be in [0, 1], got {afterpulse_prob}")
    if afterpulse_delay < 0:
        raise DomainError(f"afterpulse_delay must be >= 0, got {afterpulse_delay}")
    if afterpulse_prob == 0.0 or len(events) == 0:
        return events

    rng = make_rng(seed)
    parents = np.flatnonzero(rng.random(len(events)) < afterpulse_prob)
    jitter = rng.exponential(afterpulse_delay / 4.0, parents.size) if afterpulse_delay > 0 else np.zeros(parents.size)
    spawned = DetectionEvents(
        events.times[parents] + afterpulse_delay + jitter,
        events.channels[parents],
        np.full(parents.size, EventOrigin.AFTERPULSE, dtype=np.uint8),
    )
    logger.debug("Spawned %d afterpulses from %d detections", parents.size, len(events))
    return DetectionEvents.concat([events, spawned]).sorted()


def quantize(events: DetectionEvents, tick_resolution: float) -> np.ndarray:
    """Floor event times to integer ticks (within TICK_SNAP_TOLERANCE); returns a RECORD_DTYPE array in input order."""
    if not tick_resolution > 0:
        raise DomainError(f"tick_resolution must be > 0, got {tick_resolution}")
    records = np.empty(len(events), dtype=RECORD_DTYPE)
    if len(events) == 0:
        return records
    if np.any(np.diff(events.times) < 0):
        raise DomainError("events must be time-ordered before quantization")
    if events.times[0] < 0:
        raise DomainError("event times must be >= 0")

    ratios = np.floor(events.times / tick_resolution + TICK_SNAP_TOLERANCE)
    if ratios[-1] >= TICK_COUNTER_LIMIT:
        raise TickOverflowError(f"timestamp {events.times[-1]!r} s overflows the 64-bit tick counter")
    records["ticks"] = ratios.astype(np.uint64)
    records["channel"] = events.channels
    return records


def observed_rate(true_rate: float, dead_time: float) -> float:
    """Detected rate r / (1 + r * dead_time) of a non-paralyzable detector."""
    if true_rate < 0 or dead_time < 0:
        raise DomainError("rate and dead time must be non-negative")
    return true_rate / (1.0 + true_rate * dead_time)
