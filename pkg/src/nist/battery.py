import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
from scipy.special import gammaincc
from scipy.stats import binom

from ..errors import DomainError, InputSizeError
from ..timetag.models import BitSequence, bit_array
from . import suite
from .models import (
    DISPLAY_NAMES,
    TEST_NAMES,
    UNIFORMITY_THRESHOLD,
    BatteryConfig,
    BatteryReport,
    SubStatistic,
    TestOutcome,
)

logger = logging.getLogger(__name__)

UNIFORMITY_BINS = 10
# tests whose sub-statistics form a large template family; rows show the median template
TEMPLATE_FAMILY_TESTS = frozenset({"non_overlapping_template"})


def proportion_threshold(sequence_count: int, alpha: float = 0.01) -> int:
    """Minimum passing count floor(m * (p - 3 * sqrt(p(1 - p) / m))) with p = 1 - alpha."""
    if sequence_count < 1:
        raise DomainError(f"sequence_count must be >= 1, got {sequence_count}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    p_hat = 1.0 - alpha
    lower = p_hat - 3.0 * math.sqrt(p_hat * alpha / sequence_count)
    # 1e-9 absorbs float error when m * lower lands on an integer
    return max(0, math.floor(sequence_count * lower + 1e-9))


def uniformity_p(p_values: list[float]) -> float:
    """Chi-square p-value of the p-values' 10-bin histogram against uniform."""
    if not p_values:
        return 0.0
    values = np.clip(np.asarray(p_values, dtype=np.float64), 0.0, 1.0)
    bins = np.minimum((values * UNIFORMITY_BINS).astype(np.int64), UNIFORMITY_BINS - 1)
    observed = np.bincount(bins, minlength=UNIFORMITY_BINS)
    expected = values.size / UNIFORMITY_BINS
    chi_square = float(np.sum((observed - expected) ** 2)) / expected
    return float(gammaincc((UNIFORMITY_BINS - 1) / 2.0, chi_square / 2.0))


def minimum_length(test_name: str, config: BatteryConfig) -> int:
    """Smallest sequence length the battery accepts for a test under ``config``."""
    match test_name:
        case "frequency" | "cumulative_sums" | "runs":
            return 100
        case "block_frequency":
            return max(100, config.block_frequency_block_length)
        case "longest_run":
            return suite.LONGEST_RUN_TABLES[0][0]
        case "rank":
            return 38 * suite.RANK_MATRIX_SIZE**2
        case "dft":
            return 1000
        case "non_overlapping_template":
            return config.non_overlapping_blocks * (1 << config.template_length)
        case "overlapping_template":
            # chi-square validity: every expected class count >= 5
            blocks = math.ceil(5.0 / min(suite.OVERLAPPING_TEMPLATE_PI))
            return blocks * config.overlapping_block_length
        case "universal":
            return suite.UNIVERSAL_TABLE[0][0]
        case "approximate_entropy":
            return 1 << (config.approximate_entropy_block_length + 5)
        case "serial":
            return 1 << (config.serial_block_length + 2)
        case "linear_complexity":
            return 200 * config.linear_complexity_block_length
        case "random_excursions" | "random_excursions_variant":
            return 1_000_000
    raise DomainError(f"unknown NIST test: {test_name}")


def _test_function(test_name: str, config: BatteryConfig) -> Callable[[np.ndarray], dict[str, float]]:
    match test_name:
        case "block_frequency":
            return lambda bits: suite.block_frequency(bits, config.block_frequency_block_length)
        case "non_overlapping_template":
            return lambda bits: suite.non_overlapping_template(
                bits, config.template_length, config.non_overlapping_blocks
            )
        case "overlapping_template":
            return lambda bits: suite.overlapping_template(
                bits, config.template_length, config.overlapping_block_length
            )
        case "approximate_entropy":
            return lambda bits: suite.approximate_entropy(bits, config.approximate_entropy_block_length)
        case "serial":
            return lambda bits: suite.serial(bits, config.serial_block_length)
        case "linear_complexity":
            return lambda bits: suite.linear_complexity(bits, config.linear_complexity_block_length)
        case "random_excursions":
            return lambda bits: suite.random_excursions(bits, config.random_excursions_min_cycles)
        case "random_excursions_variant":
            return lambda bits: suite.random_excursions_variant(bits, config.random_excursions_min_cycles)
        case name if name in TEST_NAMES:
            return getattr(suite, name)
    raise DomainError(f"unknown NIST test: {test_name}")


def run_test(
    test_name: str,
    bits: BitSequence | np.ndarray,
    config: BatteryConfig | None = None,
) -> dict[str, float]:
    """p-value per statistic for one sequence; raises InputSizeError below the test's minimum length."""
    config = config or BatteryConfig()
    array = bit_array(bits)
    minimum = minimum_length(test_name, config)
    if array.size < minimum:
        raise InputSizeError(test_name, minimum, int(array.size))
    return _test_function(test_name, config)(array)


def partition(bits: BitSequence | np.ndarray, length: int, count: int) -> list[np.ndarray]:
    """Up to ``count`` consecutive disjoint sequences of ``length`` bits."""
    array = bit_array(bits)
    available = min(count, array.size // length)
    if available < count:
        logger.warning("Only %d of %d sequences of %d bits available", available, count, length)
    return [array[i * length : (i + 1) * length] for i in range(available)]


def summarize_statistic(name: str, p_values: list[float], alpha: float) -> SubStatistic:
    count = len(p_values)
    passing = sum(1 for p in p_values if p >= alpha)
    threshold = proportion_threshold(count, alpha)
    uniformity = uniformity_p(p_values)
    return SubStatistic(
        name=name,
        p_values=p_values,
        sequence_count=count,
        proportion_passing=passing,
        threshold=threshold,
        uniformity_p=uniformity,
        passed=passing >= threshold and uniformity >= UNIFORMITY_THRESHOLD,
    )


def chance_failure_bound(family_size: int, sequence_count: int, alpha: float = 0.01) -> int:
    """Largest number of failing sub-statistics a family of ``family_size`` shows by chance.

    A sub-statistic fails its proportion check with probability
    P(Binomial(m, alpha) > m - threshold) and its uniformity check with
    probability UNIFORMITY_THRESHOLD; the bound is the 1 - UNIFORMITY_THRESHOLD
    quantile of the binomial count of failures over the family.
    """
    if family_size < 1 or sequence_count < 1:
        raise DomainError("family_size and sequence_count must be >= 1")
    threshold = proportion_threshold(sequence_count, alpha)
    proportion_failure = float(binom.sf(sequence_count - threshold, sequence_count, alpha))
    failure = 1.0 - (1.0 - proportion_failure) * (1.0 - UNIFORMITY_THRESHOLD)
    return int(binom.ppf(1.0 - UNIFORMITY_THRESHOLD, family_size, failure))


def family_passes(test_name: str, subs: list[SubStatistic], alpha: float) -> bool:
    """Pass rule over all sub-statistics of one test.

    Every sub-statistic must pass, except for the template family, which may
    show up to ``chance_failure_bound`` failing templates as long as no
    template's uniformity p falls below UNIFORMITY_THRESHOLD / family size.
    """
    if not subs:
        return False
    if test_name not in TEMPLATE_FAMILY_TESTS:
        return all(sub.passed for sub in subs)
    failing = sum(1 for sub in subs if not sub.passed)
    allowed = chance_failure_bound(len(subs), max(sub.sequence_count for sub in subs), alpha)
    worst_uniformity = min(sub.uniformity_p for sub in subs)
    return failing <= allowed and worst_uniformity >= UNIFORMITY_THRESHOLD / len(subs)

def evaluate_test(
    test_name: str,
    sequences: list[np.ndarray],
    config: BatteryConfig,
    executor: ThreadPoolExecutor | None = None,
) -> TestOutcome:
    length = sequences[0].size if sequences else config.sequence_layout(test_name)[0]
    outcome = TestOutcome(test_name=test_name, display_name=DISPLAY_NAMES[test_name], sequence_length_bits=length)
    if not sequences:
        return outcome.model_copy(update={"skipped": True, "skip_reason": "no complete sequence in the input"})

    def run_one(sequence: np.ndarray) -> dict[str, float]:
        return run_test(test_name, sequence, config)

    try:
        results = list(executor.map(run_one, sequences)) if executor else [run_one(s) for s in sequences]
    except (InputSizeError, DomainError) as exc:
        logger.info("Skipping %s: %s", test_name, exc)
        return outcome.model_copy(update={"skipped": True, "skip_reason": str(exc)})

    eligible = [result for result in results if result]
    skipped_sequences = len(results) - len(eligible)
    if skipped_sequences:
        logger.info("%s: %d of %d sequences not eligible", test_name, skipped_sequences, len(results))
    if not eligible:
        return outcome.model_copy(
            update={
                "skipped": True,
                "skip_reason": "no sequence met the eligibility rule",
                "skipped_sequences": skipped_sequences,
            }
        )

    names = list(eligible[0])
    subs = [summarize_statistic(name, [result[name] for result in eligible], config.alpha) for name in names]
    ranked = sorted(subs, key=lambda sub: (sub.proportion, sub.uniformity_p))
    if test_name in TEMPLATE_FAMILY_TESTS:
        representative = ranked[(len(ranked) - 1) // 2]
    else:
        representative = next((sub for sub in ranked if not sub.passed), ranked[0])
    return outcome.model_copy(
        update={
            "sequence_count": len(eligible),
            "sub_statistics": subs,
            "representative": representative.name,
            "proportion_passing": representative.proportion_passing,
            "threshold": representative.threshold,
            "uniformity_p": representative.uniformity_p,
            "min_uniformity_p": min(sub.uniformity_p for sub in subs),
            "worst_proportion": ranked[0].proportion,
            "skipped_sequences": skipped_sequences,
            "passed": family_passes(test_name, subs, config.alpha),
        }
    )


def run_battery(
    bits: BitSequence | np.ndarray,
    config: BatteryConfig | None = None,
    workers: int = 1,
) -> BatteryReport:
    """Partition ``bits`` per ``config`` and run every configured test in fixed order."""
    config = config or BatteryConfig()
    array = bit_array(bits)
    logger.info("Running NIST battery on %d bits (%d tests)", array.size, len(config.tests))

    partitions: dict[tuple[int, int], list[np.ndarray]] = {}
    outcomes: list[TestOutcome] = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        for test_name in TEST_NAMES:
            if test_name not in config.tests:
                continue
            layout = config.sequence_layout(test_name)
            if layout not in partitions:
                partitions[layout] = partition(array, *layout)
            outcome = evaluate_test(test_name, partitions[layout], config, executor)
            logger.info(
                "%s: p=%.6f %d/%d passed=%s",
                outcome.display_name,
                outcome.uniformity_p,
                outcome.proportion_passing,
                outcome.threshold,
                outcome.passed,
            )
            outcomes.append(outcome)

    applicable = [outcome for outcome in outcomes if not outcome.skipped]
    passed = bool(applicable) and all(outcome.passed for outcome in applicable)
    return BatteryReport(alpha=config.alpha, input_bits=int(array.size), outcomes=outcomes, passed=passed)
