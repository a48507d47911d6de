"""Stage orchestration: simulate, extract, postprocess, analyze, nist, report."""

from .models import RateBudget, SimulationReport, StageResult
from .runner import NIST_FAILED_EXIT_CODE, PipelineRunner
from .simulation import compensating_power, metadata_path, rate_budget, simulate, simulate_bits, simulate_window

__all__ = [
    "NIST_FAILED_EXIT_CODE",
    "PipelineRunner",
    "RateBudget",
    "SimulationReport",
    "StageResult",
    "compensating_power",
    "metadata_path",
    "rate_budget",
    "simulate",
    "simulate_bits",
    "simulate_window",
]
