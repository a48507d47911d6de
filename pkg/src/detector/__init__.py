"""SPAD response: efficiency, dead time, dark counts, afterpulses, tick quantization."""

from .models import DetectionEvent, DetectionEvents, DetectorParams, EventOrigin
from .response import (
    add_afterpulses,
    add_dark_counts,
    apply_dead_time,
    apply_efficiency,
    last_kept_times,
    observed_rate,
    quantize,
)

__all__ = [
    "DetectionEvent",
    "DetectionEvents",
    "DetectorParams",
    "EventOrigin",
    "add_afterpulses",
    "add_dark_counts",
    "apply_dead_time",
    "apply_efficiency",
    "last_kept_times",
    "observed_rate",
    "quantize",
]
