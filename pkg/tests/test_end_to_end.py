"""Full-length lab runs: 34 s of simulated detections through extraction, characterization and NIST."""

import math

import numpy as np
import pytest

from plasmon_qrng.characterization import autocorrelation, characterize, pair_frequencies
from plasmon_qrng.config import PipelineConfig
from plasmon_qrng.extractor import extract_pipeline
from plasmon_qrng.nist import TEST_NAMES, BatteryConfig, run_battery
from plasmon_qrng.pipeline import simulate_bits
from plasmon_qrng.profiles import ProfileCatalog

pytestmark = pytest.mark.slow

BATTERY_BITS = 80_000_000
CHUNK_BITS = 2_400_000
CHUNKS = 32


@pytest.fixture(scope="module")
def lab() -> PipelineConfig:
    return ProfileCatalog().require("lab")


@pytest.fixture(scope="module")
def raw_bits(lab: PipelineConfig) -> np.ndarray:
    return simulate_bits(lab).to_array()


@pytest.fixture(scope="module")
def extracted_bits(lab: PipelineConfig, raw_bits: np.ndarray) -> np.ndarray:
    bits, _ = extract_pipeline(raw_bits, lab.extractor, master_seed=lab.master_seed, workers=4)
    return bits.to_array()


def test_raw_lab_bits_are_anticorrelated(raw_bits: np.ndarray) -> None:
    assert raw_bits.size / 34.0 == pytest.approx(2.43e6, rel=0.02)

    pairs = pair_frequencies(raw_bits)
    assert pairs.alternation_excess > 5.0 / math.sqrt(pairs.pair_count)
    assert autocorrelation(raw_bits, max_lag=1).lag(1) < -5.0 / math.sqrt(raw_bits.size)


def test_extraction_of_anticorrelated_chunks(lab: PipelineConfig, raw_bits: np.ndarray) -> None:
    assert raw_bits.size >= CHUNKS * CHUNK_BITS
    config = lab.extractor.model_copy(update={"chunk_size_bits": CHUNK_BITS})

    _, report = extract_pipeline(raw_bits[: CHUNKS * CHUNK_BITS], config, master_seed=lab.master_seed, workers=4)

    assert len(report.chunks) == CHUNKS
    assert all(chunk.input_bits == CHUNK_BITS for chunk in report.chunks)
    assert 2.30e6 <= report.mean_output_bits <= 2.40e6
    assert 0.0 < report.output_bits_stderr < 1e-3 * report.mean_output_bits
    outputs = np.array([chunk.output_bits for chunk in report.chunks], dtype=np.float64)
    assert report.output_bits_stderr == pytest.approx(outputs.std(ddof=1) / math.sqrt(CHUNKS))


def test_characterization_of_extracted_lab_bits(extracted_bits: np.ndarray) -> None:
    assert extracted_bits.size >= BATTERY_BITS
    sample = extracted_bits[:BATTERY_BITS]

    summary = characterize(sample, label="extracted", workers=4).summary

    assert summary.mean == pytest.approx(127.5, abs=0.2)
    assert summary.entropy > 7.9999
    assert summary.run_slope_zeros.slope == pytest.approx(-math.log10(2), abs=0.01)
    assert summary.run_slope_ones.slope == pytest.approx(-math.log10(2), abs=0.01)
    assert summary.max_abs_autocorrelation < 5.0 / math.sqrt(sample.size)
    assert summary.pairs.alternation_excess == pytest.approx(0.0, abs=5.0 / math.sqrt(summary.pairs.pair_count))


def test_battery_passes_on_extracted_lab_bits(extracted_bits: np.ndarray) -> None:
    config = BatteryConfig()
    assert (config.sequence_length_bits, config.sequence_count) == (500_000, 160)
    assert (config.long_sequence_length_bits, config.long_sequence_count) == (1_000_000, 80)

    report = run_battery(extracted_bits[:BATTERY_BITS], config, workers=4)

    assert [outcome.test_name for outcome in report.outcomes] == list(TEST_NAMES)
    assert not [outcome.test_name for outcome in report.outcomes if outcome.skipped]
    assert [outcome.test_name for outcome in report.outcomes if not outcome.passed] == []
    assert report.passed
    for name in ("overlapping_template", "universal", "random_excursions", "random_excursions_variant"):
        assert report.outcome(name).sequence_count > 0
