"""Von Neumann / Peres debiasing with seeded shuffling."""

from .models import ChunkReport, ExtractionReport, ExtractorConfig
from .peres import peres, peres_array, von_neumann
from .pipeline import SHUFFLE_ALGORITHM, extract_pipeline, measure_throughput, resolve_shuffle_seed, shuffle

__all__ = [
    "SHUFFLE_ALGORITHM",
    "ChunkReport",
    "ExtractionReport",
    "ExtractorConfig",
    "extract_pipeline",
    "measure_throughput",
    "peres",
    "peres_array",
    "resolve_shuffle_seed",
    "shuffle",
    "von_neumann",
]
