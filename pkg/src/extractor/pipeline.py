import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..seeding import PRNG_ALGORITHM, derive_seed, make_rng
from ..timetag.models import BitSequence, bit_array
from .models import ChunkReport, ExtractionReport, ExtractorConfig
from .peres import peres_array

logger = logging.getLogger(__name__)

SHUFFLE_ALGORITHM = f"{PRNG_ALGORITHM}/fisher-yates (numpy Generator.permutation)"


def shuffle(bits: BitSequence | np.ndarray, seed: int) -> BitSequence:
    """Uniform permutation of bit positions, deterministic per seed."""
    array = bit_array(bits)
    return BitSequence.from_array(_shuffled(array, seed))


def _shuffled(array: np.ndarray, seed: int) -> np.ndarray:
    if array.size < 2:
        return array.copy()
    return make_rng(seed).permutation(array)


def chunk_seed(base_seed: int, index: int) -> int:
    return derive_seed(base_seed, "extractor.chunk", index)


def resolve_shuffle_seed(config: ExtractorConfig, master_seed: int) -> int:
    if config.shuffle_seed is not None:
        return config.shuffle_seed
    return derive_seed(master_seed, "extractor")


def extract_pipeline(
    bits: BitSequence | np.ndarray,
    config: ExtractorConfig,
    master_seed: int = 0,
    workers: int = 1,
) -> tuple[BitSequence, ExtractionReport]:
    """Chunk, shuffle and Peres-extract; chunk outputs are concatenated in chunk order.

    Chunk i is shuffled with derive_seed(shuffle_seed, "extractor.chunk", i).
    """
    array = bit_array(bits)
    base_seed = resolve_shuffle_seed(config, master_seed) if config.shuffle else None
    bounds = [
        (index, start, min(start + config.chunk_size_bits, array.size))
        for index, start in enumerate(range(0, array.size, config.chunk_size_bits))
    ]

    def run_chunk(bound: tuple[int, int, int]) -> tuple[ChunkReport, np.ndarray]:
        index, start, stop = bound
        chunk = array[start:stop]
        seed = chunk_seed(base_seed, index) if base_seed is not None else None
        if seed is not None:
            chunk = _shuffled(chunk, seed)
        output = peres_array(chunk, config.recursion_depth_limit)
        report = ChunkReport(index=index, input_bits=int(stop - start), output_bits=int(output.size), shuffle_seed=seed)
        return report, output

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(run_chunk, bounds))

    chunks = [report for report, _ in results]
    outputs = [output for _, output in results]
    combined = np.concatenate(outputs) if outputs else np.empty(0, dtype=np.uint8)
    mean_output, stderr = _mean_and_stderr([chunk.output_bits for chunk in chunks])

    report = ExtractionReport(
        shuffle_algorithm=SHUFFLE_ALGORITHM if config.shuffle else "none",
        shuffle_seed=base_seed,
        recursion_depth_limit=config.recursion_depth_limit,
        chunk_size_bits=config.chunk_size_bits,
        chunks=chunks,
        input_bits=int(array.size),
        output_bits=int(combined.size),
        mean_output_bits=mean_output,
        output_bits_stderr=stderr,
    )
    logger.info(
        "Extracted %d bits from %d in %d chunks (yield %.5f)",
        report.output_bits,
        report.input_bits,
        len(chunks),
        report.yield_ratio,
    )
    return BitSequence.from_array(combined), report


def measure_throughput(
    bits: BitSequence | np.ndarray,
    config: ExtractorConfig,
    master_seed: int = 0,
) -> dict[str, float]:
    """Input bits per second with and without the shuffle stage (single worker)."""
    array = bit_array(bits)
    rates: dict[str, float] = {}
    for label, use_shuffle in (("with_shuffle", True), ("without_shuffle", False)):
        trial = config.model_copy(update={"shuffle": use_shuffle})
        start = time.perf_counter()
        extract_pipeline(array, trial, master_seed=master_seed, workers=1)
        elapsed = time.perf_counter() - start
        rates[label] = array.size / elapsed if elapsed > 0 else math.inf
    return rates


def _mean_and_stderr(values: list[int]) -> tuple[float, float]:
    if not values:
        return 0.0, 0.0
    data = np.asarray(values, dtype=np.float64)
    if data.size < 2:
        return float(data.mean()), 0.0
    return float(data.mean()), float(data.std(ddof=1) / math.sqrt(data.size))
