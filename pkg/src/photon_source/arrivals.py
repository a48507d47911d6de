import logging
import math

import numpy as np

from ..errors import DomainError
from ..seeding import PRNG_ALGORITHM, make_rng
from .models import ArrivalTimes

logger = logging.getLogger(__name__)

ARRIVAL_ALGORITHM = f"{PRNG_ALGORITHM}/inverse-cdf-exponential"


def sample_poisson_arrivals(rate: float, duration: float, seed: int, start: float = 0.0) -> ArrivalTimes:
    """Homogeneous Poisson arrivals on [start, start + duration).

    Inter-arrival gaps are -ln(U)/rate with U = 1 - random() in (0, 1].
    """
    if rate < 0:
        raise DomainError(f"rate must be >= 0, got {rate}")
    if not duration > 0:
        raise DomainError(f"duration must be > 0, got {duration}")

    rng = make_rng(seed)
    times = _exponential_arrivals(rng, rate, duration) + start if rate > 0 else np.empty(0, dtype=np.float64)
    return ArrivalTimes(times=times, duration=duration, rate=rate, seed=seed, algorithm=ARRIVAL_ALGORITHM)


def _exponential_arrivals(rng: np.random.Generator, rate: float, duration: float) -> np.ndarray:
    expected = rate * duration
    batch = max(16, int(expected + 6.0 * math.sqrt(expected) + 16))
    pieces: list[np.ndarray] = []
    elapsed = 0.0
    while True:
        gaps = -np.log(1.0 - rng.random(batch)) / rate
        times = elapsed + np.cumsum(gaps)
        inside = int(np.searchsorted(times, duration, side="left"))
        pieces.append(times[:inside])
        if inside < times.size:
            break
        elapsed = float(times[-1])
        batch = max(16, batch // 4)

    times = np.concatenate(pieces) if len(pieces) > 1 else pieces[0]
    return _enforce_strictly_increasing(times)


def _enforce_strictly_increasing(times: np.ndarray) -> np.ndarray:
    # zero gaps can appear at float resolution; nudge them forward one ulp
    ties = np.flatnonzero(np.diff(times) <= 0)
    if ties.size == 0:
        return times
    logger.debug("Resolving %d arrival ties at float resolution", ties.size)
    times = times.copy()
    for index in ties + 1:
        if times[index] <= times[index - 1]:
            times[index] = np.nextafter(times[index - 1], np.inf)
    return times
