import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from plasmon_qrng.characterization import (
    autocorrelation,
    block_entropy,
    block_histogram,
    characterize,
    estimate_pi,
    pair_frequencies,
    run_lengths,
    single_bit_proportions,
    write_characterization_outputs,
)
from plasmon_qrng.characterization.measures import block_values, entropy_of_counts
from plasmon_qrng.errors import DomainError
from plasmon_qrng.timetag import BitSequence


def _bits(text: str) -> BitSequence:
    return BitSequence.from_string(text)


def test_alternating_sequence_autocorrelation() -> None:
    result = autocorrelation(_bits("01" * 500), max_lag=31)

    assert len(result.coefficients) == 31
    assert result.lag(1) == pytest.approx(-1.0, abs=1e-9)
    assert result.lag(2) == pytest.approx(1.0, abs=1e-9)
    assert result.max_abs == pytest.approx(1.0)


def test_autocorrelation_matches_direct_formula(rng: np.random.Generator) -> None:
    x = (rng.random(5_000) < 0.4).astype(np.float64)
    mean = x.mean()

    result = autocorrelation(x.astype(np.uint8), max_lag=5)

    for k in range(1, 6):
        head = x[: x.size - k] - mean
        tail = x[k:] - mean
        assert result.lag(k) == pytest.approx(np.sum(head * tail) / np.sum(head * head), abs=1e-9)


def test_autocorrelation_of_random_bits_is_small(rng: np.random.Generator) -> None:
    n = 200_000
    result = autocorrelation(rng.integers(0, 2, n, dtype=np.uint8))

    assert result.max_abs < 5 / math.sqrt(n)


def test_autocorrelation_errors() -> None:
    with pytest.raises(DomainError, match="constant"):
        autocorrelation(_bits("1" * 100))
    with pytest.raises(DomainError):
        autocorrelation(_bits("01" * 10), max_lag=31)
    with pytest.raises(DomainError):
        autocorrelation(_bits("01" * 100), max_lag=0)


def test_block_histogram_of_two_extreme_blocks() -> None:
    histogram = block_histogram(_bits("00000000 11111111"))

    assert histogram.counts[0] == 1
    assert histogram.counts[255] == 1
    assert histogram.block_count == 2
    assert histogram.mean == 127.5


def test_block_values_drop_the_partial_block() -> None:
    assert block_values(_bits("101 110 01"), 3).tolist() == [5, 6]
    assert block_histogram(_bits("1011"), block_bits=2).counts == [0, 0, 1, 1]


def test_block_histogram_errors() -> None:
    with pytest.raises(DomainError):
        block_histogram(_bits("1010"), block_bits=8)
    with pytest.raises(DomainError):
        block_histogram(_bits("1010"), block_bits=0)


def test_single_bit_proportions() -> None:
    assert single_bit_proportions(_bits("1111")) == (0.0, 1.0)
    assert single_bit_proportions(_bits("0011")) == (0.5, 0.5)

    with pytest.raises(DomainError):
        single_bit_proportions(_bits(""))


def test_run_lengths_count_maximal_runs() -> None:
    result = run_lengths(_bits("000111"))

    assert result.zero_runs == [0, 0, 1]
    assert result.one_runs == [0, 0, 1]
    assert result.total_bits == 6
    assert result.fitted_slope_zeros.slope is None


def test_run_length_slope_of_fair_bits(rng: np.random.Generator) -> None:
    result = run_lengths(rng.integers(0, 2, 8_000_000, dtype=np.uint8))

    # run counts fall off as 2^-length for fair bits
    assert result.fitted_slope_zeros.slope == pytest.approx(-math.log10(2), abs=0.02)
    assert result.fitted_slope_ones.slope == pytest.approx(-math.log10(2), abs=0.02)
    assert result.total_bits == 8_000_000


def test_block_entropy_extremes() -> None:
    assert block_entropy(_bits("10110001" * 50)) == 0.0
    assert entropy_of_counts([7] * 256) == pytest.approx(8.0)

    with pytest.raises(DomainError):
        entropy_of_counts([0, 0])


def test_pi_from_a_single_origin_point() -> None:
    assert estimate_pi(np.zeros(32, dtype=np.uint8)) == 4.0
    assert estimate_pi(np.ones(32, dtype=np.uint8)) == 0.0

    with pytest.raises(DomainError):
        estimate_pi(np.zeros(31, dtype=np.uint8))


def test_pi_from_fair_bits(rng: np.random.Generator) -> None:
    bits = rng.integers(0, 2, 32 * 1_000_000, dtype=np.uint8)

    assert abs(estimate_pi(bits) - math.pi) < 0.009


def test_pair_frequencies_use_overlapping_pairs() -> None:
    pairs = pair_frequencies(_bits("0110"))

    assert pairs.pair_count == 3
    assert (pairs.p00, pairs.p01, pairs.p10, pairs.p11) == pytest.approx((0.0, 1 / 3, 1 / 3, 1 / 3))
    assert pair_frequencies(_bits("0101")).alternation_excess == pytest.approx(1.0)

    with pytest.raises(DomainError):
        pair_frequencies(_bits("1"))


def test_characterize_collects_every_measure(rng: np.random.Generator) -> None:
    bits = rng.integers(0, 2, 400_000, dtype=np.uint8)

    result = characterize(bits, label="prng", workers=3)

    summary = result.summary
    assert summary.label == "prng"
    assert summary.bit_count == 400_000
    assert summary.fraction_zeros + summary.fraction_ones == pytest.approx(1.0)
    assert summary.mean == pytest.approx(127.5, abs=1.5)
    assert summary.entropy > 7.99
    assert abs(summary.pi_estimate - math.pi) < 0.1
    assert summary.max_abs_autocorrelation == result.autocorrelation.max_abs
    assert len(result.histogram.counts) == 256
    assert result.reference is None


def test_characterize_is_independent_of_worker_count(rng: np.random.Generator) -> None:
    bits = rng.integers(0, 2, 50_000, dtype=np.uint8)

    assert characterize(bits, workers=1) == characterize(bits, workers=4)


def test_outputs_are_written_as_csv_and_json(tmp_path: Path, rng: np.random.Generator) -> None:
    result = characterize(rng.integers(0, 2, 20_000, dtype=np.uint8), max_lag=4)

    paths = write_characterization_outputs(result, tmp_path / "analysis")

    with paths["autocorrelation"].open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["lag", "coefficient"]
    assert [row[0] for row in rows[1:]] == ["1", "2", "3", "4"]
    assert float(rows[1][1]) == result.autocorrelation.lag(1)

    with paths["blocks"].open(newline="") as handle:
        blocks = list(csv.DictReader(handle))
    assert len(blocks) == 256
    assert sum(int(row["count"]) for row in blocks) == result.histogram.block_count

    with paths["runs"].open(newline="") as handle:
        runs = list(csv.DictReader(handle))
    assert sum(int(row["runlength"]) * (int(row["zeros"]) + int(row["ones"])) for row in runs) == 20_000

    payload = json.loads(paths["summary"].read_text(encoding="utf-8"))
    assert payload["kind"] == "characterization"
    assert payload["summary"]["bit_count"] == 20_000
