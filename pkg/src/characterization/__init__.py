"""Characterization battery: autocorrelation, block statistics, runs, entropy, pi."""

from .export import write_characterization_outputs
from .measures import (
    autocorrelation,
    block_entropy,
    block_histogram,
    characterize,
    estimate_pi,
    pair_frequencies,
    run_lengths,
    single_bit_proportions,
)
from .models import (
    AutocorrelationResult,
    BlockHistogram,
    CharacterizationResult,
    CharacterizationSummary,
    PairFrequencies,
    RunLengthResult,
    SlopeFit,
)

__all__ = [
    "AutocorrelationResult",
    "BlockHistogram",
    "CharacterizationResult",
    "CharacterizationSummary",
    "PairFrequencies",
    "RunLengthResult",
    "SlopeFit",
    "autocorrelation",
    "block_entropy",
    "block_histogram",
    "characterize",
    "estimate_pi",
    "pair_frequencies",
    "run_lengths",
    "single_bit_proportions",
    "write_characterization_outputs",
]
