import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import entropy as shannon_entropy
from scipy.stats import linregress

from ..errors import DomainError
from ..timetag.models import BitSequence, bit_array
from .models import (
    AutocorrelationResult,
    BlockHistogram,
    CharacterizationResult,
    CharacterizationSummary,
    PairFrequencies,
    RunLengthResult,
    SlopeFit,
)

logger = logging.getLogger(__name__)

RUN_FIT_MAX_LENGTH = 20
PI_COORDINATE_BITS = 16


def autocorrelation(bits: BitSequence | np.ndarray, max_lag: int = 31) -> AutocorrelationResult:
    """Lag-k coefficients sum((x_i - m)(x_i+k - m)) / sum((x_i - m)^2), both over i < n - k.

    m is the mean of the whole sequence.
    """
    x = bit_array(bits).astype(bool)
    n = x.size
    if max_lag < 1:
        raise DomainError(f"max_lag must be >= 1, got {max_lag}")
    if n <= max_lag + 1:
        raise DomainError(f"sequence of {n} bits is too short for max_lag={max_lag}")
    ones = int(np.count_nonzero(x))
    if ones in (0, n):
        raise DomainError("autocorrelation is undefined for a constant sequence (zero variance)")

    mean = ones / n
    prefix = np.concatenate(([0], np.cumsum(x[: max_lag + 1], dtype=np.int64)))
    suffix = np.concatenate(([0], np.cumsum(x[::-1][: max_lag + 1], dtype=np.int64)))
    coefficients: list[float] = []
    for k in range(1, max_lag + 1):
        window = n - k
        both = int(np.count_nonzero(x[:window] & x[k:]))
        head_ones = ones - int(suffix[k])
        tail_ones = ones - int(prefix[k])
        numerator = both - mean * (head_ones + tail_ones) + window * mean * mean
        denominator = head_ones * (1.0 - 2.0 * mean) + window * mean * mean
        if denominator <= 0:
            raise DomainError(f"zero variance in the lag-{k} window")
        coefficients.append(float(np.clip(numerator / denominator, -1.0, 1.0)))
    return AutocorrelationResult(coefficients=coefficients)


def block_values(bits: BitSequence | np.ndarray, block_bits: int) -> np.ndarray:
    """Non-overlapping blocks as MSB-first integers; a trailing partial block is dropped."""
    x = bit_array(bits)
    count = x.size // block_bits
    if block_bits == 8:
        return np.packbits(x[: count * 8]).astype(np.int64)
    weights = 1 << np.arange(block_bits - 1, -1, -1, dtype=np.int64)
    return x[: count * block_bits].reshape(count, block_bits).astype(np.int64) @ weights


def block_histogram(bits: BitSequence | np.ndarray, block_bits: int = 8) -> BlockHistogram:
    if not 1 <= block_bits <= 24:
        raise DomainError(f"block_bits must be in [1, 24], got {block_bits}")
    values = block_values(bits, block_bits)
    if values.size == 0:
        raise DomainError(f"need at least {block_bits} bits for one block")
    counts = np.bincount(values, minlength=1 << block_bits)
    return BlockHistogram(block_bits=block_bits, counts=counts.tolist(), mean=float(values.mean()))


def single_bit_proportions(bits: BitSequence | np.ndarray) -> tuple[float, float]:
    x = bit_array(bits)
    if x.size == 0:
        raise DomainError("proportions need a non-empty sequence")
    ones = int(np.count_nonzero(x)) / x.size
    return 1.0 - ones, ones


def run_lengths(bits: BitSequence | np.ndarray) -> RunLengthResult:
    """Maximal runs per value, with a least-squares fit of log10(count) against length 1..20."""
    x = bit_array(bits)
    if x.size == 0:
        raise DomainError("run lengths need a non-empty sequence")
    starts = np.concatenate(([0], np.flatnonzero(np.diff(x)) + 1))
    lengths = np.diff(np.concatenate((starts, [x.size])))
    values = x[starts]

    zero_runs = _run_histogram(lengths[values == 0])
    one_runs = _run_histogram(lengths[values == 1])
    return RunLengthResult(
        zero_runs=zero_runs,
        one_runs=one_runs,
        fitted_slope_zeros=_fit_log_counts(zero_runs),
        fitted_slope_ones=_fit_log_counts(one_runs),
    )


def _run_histogram(lengths: np.ndarray) -> list[int]:
    if lengths.size == 0:
        return []
    return np.bincount(lengths)[1:].tolist()


def _fit_log_counts(histogram: list[int]) -> SlopeFit:
    counts = np.asarray(histogram[:RUN_FIT_MAX_LENGTH], dtype=np.float64)
    lengths = np.arange(1, counts.size + 1, dtype=np.float64)
    present = counts > 0
    if np.count_nonzero(present) < 2:
        return SlopeFit(points=int(np.count_nonzero(present)))
    fit = linregress(lengths[present], np.log10(counts[present]))
    stderr = float(fit.stderr) if np.isfinite(fit.stderr) else None
    return SlopeFit(slope=float(fit.slope), stderr=stderr, points=int(np.count_nonzero(present)))


def block_entropy(bits: BitSequence | np.ndarray, block_bits: int = 8) -> float:
    """Shannon entropy (bits) of the empirical non-overlapping block distribution."""
    histogram = block_histogram(bits, block_bits)
    return entropy_of_counts(histogram.counts)


def entropy_of_counts(counts: list[int] | np.ndarray) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    if counts.sum() <= 0:
        raise DomainError("entropy needs at least one complete block")
    return float(shannon_entropy(counts[counts > 0], base=2))


def estimate_pi(bits: BitSequence | np.ndarray) -> float:
    """Monte Carlo pi from 32-bit points.

    Each point is two MSB-first 16-bit coordinates x, y in [0, 2^16); it is
    inside iff x^2 + y^2 < 2^32.
    """
    x = bit_array(bits)
    points = x.size // (2 * PI_COORDINATE_BITS)
    if points == 0:
        raise DomainError(f"pi estimation needs at least {2 * PI_COORDINATE_BITS} bits")
    packed = np.packbits(x[: points * 2 * PI_COORDINATE_BITS])
    coords = np.frombuffer(packed.tobytes(), dtype=">u2").astype(np.int64).reshape(points, 2)
    inside = np.count_nonzero(coords[:, 0] ** 2 + coords[:, 1] ** 2 < (1 << (2 * PI_COORDINATE_BITS)))
    return 4.0 * inside / points


def pair_frequencies(bits: BitSequence | np.ndarray) -> PairFrequencies:
    """Frequencies of overlapping adjacent pairs (x_i, x_i+1)."""
    x = bit_array(bits)
    if x.size < 2:
        raise DomainError("pair frequencies need at least 2 bits")
    codes = (x[:-1].astype(np.int64) << 1) | x[1:]
    counts = np.bincount(codes, minlength=4)
    total = int(counts.sum())
    return PairFrequencies(
        p00=counts[0] / total,
        p01=counts[1] / total,
        p10=counts[2] / total,
        p11=counts[3] / total,
        pair_count=total,
    )


def characterize(
    bits: BitSequence | np.ndarray,
    max_lag: int = 31,
    block_bits: int = 8,
    label: str = "sequence",
    workers: int = 1,
) -> CharacterizationResult:
    x = bit_array(bits)
    logger.info("Characterizing %d bits (%s)", x.size, label)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        autocorrelation_future = executor.submit(autocorrelation, x, max_lag)
        histogram_future = executor.submit(block_histogram, x, block_bits)
        runs_future = executor.submit(run_lengths, x)
        pi_future = executor.submit(estimate_pi, x)
        pairs_future = executor.submit(pair_frequencies, x)
        proportions = single_bit_proportions(x)

        correlation = autocorrelation_future.result()
        histogram = histogram_future.result()
        runs = runs_future.result()
        summary = CharacterizationSummary(
            label=label,
            bit_count=int(x.size),
            fraction_zeros=proportions[0],
            fraction_ones=proportions[1],
            mean=histogram.mean,
            entropy=entropy_of_counts(histogram.counts),
            pi_estimate=pi_future.result(),
            run_slope_zeros=runs.fitted_slope_zeros,
            run_slope_ones=runs.fitted_slope_ones,
            max_abs_autocorrelation=correlation.max_abs,
            pairs=pairs_future.result(),
        )
    if not math.isfinite(summary.entropy):
        logger.warning("Entropy is not finite for %s", label)
    return CharacterizationResult(summary=summary, autocorrelation=correlation, histogram=histogram, runs=runs)
