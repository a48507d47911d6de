"""SP 800-22 battery with proportion and uniformity accounting."""

from .battery import (
    chance_failure_bound,
    evaluate_test,
    family_passes,
    minimum_length,
    partition,
    proportion_threshold,
    run_battery,
    run_test,
    uniformity_p,
)
from .models import TEST_NAMES, BatteryConfig, BatteryReport, SubStatistic, TestOutcome
from .suite import aperiodic_templates, berlekamp_massey

__all__ = [
    "TEST_NAMES",
    "BatteryConfig",
    "BatteryReport",
    "SubStatistic",
    "TestOutcome",
    "aperiodic_templates",
    "berlekamp_massey",
    "chance_failure_bound",
    "evaluate_test",
    "family_passes",
    "minimum_length",
    "partition",
    "proportion_threshold",
    "run_battery",
    "run_test",
    "uniformity_p",
]
