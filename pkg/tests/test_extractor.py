import itertools
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from plasmon_qrng.extractor import (
    ExtractorConfig,
    extract_pipeline,
    measure_throughput,
    peres,
    peres_array,
    resolve_shuffle_seed,
    shuffle,
    von_neumann,
)
from plasmon_qrng.seeding import derive_seed
from plasmon_qrng.timetag import BitSequence


def _bits(text: str) -> BitSequence:
    return BitSequence.from_string(text)


def test_von_neumann_pairs() -> None:
    assert von_neumann(_bits("01100011")).to_string() == "01"
    assert len(von_neumann(_bits("0" * 64))) == 0
    assert von_neumann(_bits("01" * 10)).to_string() == "0" * 10
    assert von_neumann(_bits("101")).to_string() == "1"


def test_peres_hand_traced_example() -> None:
    assert peres(_bits("0110"), depth=2).to_string() == "01"
    assert peres(_bits("0110"), depth=5).to_string() == "01"


def test_peres_of_constant_input_is_empty() -> None:
    for depth in (1, 3, 16):
        assert len(peres(_bits("0" * 40), depth)) == 0
        assert len(peres(_bits("1" * 40), depth)) == 0


def test_peres_depth_one_is_von_neumann() -> None:
    bits = BitSequence.from_array(np.random.Generator(np.random.PCG64(4)).integers(0, 2, 1001))

    assert peres(bits, 1) == von_neumann(bits)


def test_peres_rejects_zero_depth() -> None:
    with pytest.raises(ValueError):
        peres(_bits("0110"), 0)


def _all_inputs(max_length: int):
    for length in range(max_length + 1):
        for values in itertools.product((0, 1), repeat=length):
            yield np.array(values, dtype=np.uint8)


@pytest.mark.parametrize("p_one", ["0.1", "0.3", "0.5023", "0.7"])
def test_peres_output_is_unbiased_given_its_length(p_one: str) -> None:
    # exact rational arithmetic, so equal probabilities compare exactly
    p = Fraction(p_one)
    for length in range(1, 13):
        probability_of: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
        for values in itertools.product((0, 1), repeat=length):
            ones = sum(values)
            output = peres_array(np.array(values, dtype=np.uint8), depth=12)
            probability_of[tuple(output.tolist())] += p**ones * (1 - p) ** (length - ones)

        by_length: dict[int, list[Fraction]] = defaultdict(list)
        for output, probability in probability_of.items():
            by_length[len(output)].append(probability)
        for output_length, probabilities in by_length.items():
            assert len(probabilities) == 2**output_length
            assert max(probabilities) == min(probabilities)


def test_peres_yield_never_shrinks_with_depth() -> None:
    for values in _all_inputs(12):
        lengths = [peres_array(values, depth).size for depth in range(1, 8)]
        assert lengths == sorted(lengths)


def test_von_neumann_output_is_a_prefix_of_peres_output() -> None:
    bits = BitSequence.from_array(np.random.Generator(np.random.PCG64(9)).integers(0, 2, 4096))

    first = von_neumann(bits).to_string()

    assert peres(bits, 8).to_string().startswith(first)


def test_peres_yield_on_unbiased_input(rng: np.random.Generator) -> None:
    unbiased = rng.integers(0, 2, 2_400_000, dtype=np.uint8)

    deep = peres_array(unbiased, 16).size / unbiased.size
    shallow = peres_array(unbiased[:240_000], 8).size / 240_000

    # the ideal rate at depth d is 1 - (3/4)^d
    assert deep >= 0.98
    assert shallow == pytest.approx(1 - 0.75**8, abs=0.01)


def test_shuffle_is_a_seeded_permutation() -> None:
    bits = BitSequence.from_array(np.random.Generator(np.random.PCG64(1)).integers(0, 2, 10_000))

    first = shuffle(bits, seed=42)
    second = shuffle(bits, seed=42)
    other = shuffle(bits, seed=43)

    assert first == second
    assert first != other
    assert first.count_ones() == bits.count_ones()
    assert len(shuffle(BitSequence.from_array([]), seed=42)) == 0


def test_shuffle_seed_comes_from_config_or_master_seed() -> None:
    assert resolve_shuffle_seed(ExtractorConfig(shuffle_seed=77), master_seed=5) == 77
    assert resolve_shuffle_seed(ExtractorConfig(), master_seed=5) == derive_seed(5, "extractor")


def test_pipeline_is_deterministic_across_worker_counts(rng: np.random.Generator) -> None:
    bits = BitSequence.from_array(rng.random(50_000) < 0.52)
    config = ExtractorConfig(chunk_size_bits=12_000, recursion_depth_limit=10)

    single, single_report = extract_pipeline(bits, config, master_seed=3, workers=1)
    pooled, pooled_report = extract_pipeline(bits, config, master_seed=3, workers=4)

    assert single == pooled
    assert single_report == pooled_report
    assert [chunk.input_bits for chunk in single_report.chunks] == [12_000] * 4 + [2_000]
    assert single_report.output_bits == sum(chunk.output_bits for chunk in single_report.chunks)
    assert single_report.input_bits == 50_000
    assert len({chunk.shuffle_seed for chunk in single_report.chunks}) == 5


def test_pipeline_without_shuffle_is_chunked_peres() -> None:
    bits = BitSequence.from_array(np.random.Generator(np.random.PCG64(2)).integers(0, 2, 3_000))
    config = ExtractorConfig(chunk_size_bits=1_000, recursion_depth_limit=6, shuffle=False)

    output, report = extract_pipeline(bits, config)

    array = bits.to_array()
    expected = np.concatenate([peres_array(array[start : start + 1_000], 6) for start in range(0, 3_000, 1_000)])
    assert np.array_equal(output.to_array(), expected)
    assert report.shuffle_algorithm == "none"
    assert report.shuffle_seed is None


def test_pipeline_short_chunk_yields_nothing() -> None:
    output, report = extract_pipeline(_bits("1"), ExtractorConfig())

    assert len(output) == 0
    assert report.yield_ratio == 0.0


def test_pipeline_chunk_yield_matches_the_ideal_rate(rng: np.random.Generator) -> None:
    bits = rng.random(4 * 600_000) < 0.5023
    config = ExtractorConfig(chunk_size_bits=600_000)

    _, report = extract_pipeline(bits, config, master_seed=11, workers=2)

    assert 0.97 * 600_000 <= report.mean_output_bits <= 600_000
    assert report.output_bits_stderr < 0.002 * 600_000


def test_throughput_is_reported_for_both_variants(rng: np.random.Generator) -> None:
    bits = rng.integers(0, 2, 20_000, dtype=np.uint8)

    rates = measure_throughput(bits, ExtractorConfig(chunk_size_bits=10_000))

    assert set(rates) == {"with_shuffle", "without_shuffle"}
    assert all(rate > 0 and not math.isnan(rate) for rate in rates.values())
