from typing import Any

from pydantic import BaseModel, Field

from ..channel.models import RegimeReport

JsonValue = dict[str, Any] | list[Any] | str | int | float | bool | None


class StageResult(BaseModel):
    stage: str
    success: bool
    exit_code: int = 0
    outputs: dict[str, str] = Field(default_factory=dict)
    report: JsonValue = None
    text: str = ""
    timing_ms: int = 0


class RateBudget(BaseModel):
    photon_rate: float
    coherence_time: float
    mean_photons_per_coherence_time: float
    single_excitation_fraction: float
    surviving_rate: float
    channel_rates: list[float] = Field(description="True detection rate per detector before dead time")
    expected_rate: float
    observed_rate: float = Field(description="Non-paralyzable dead-time model r / (1 + r tau), summed over detectors")


class SimulationReport(BaseModel):
    kind: str = "simulation"
    tool_version: str = ""
    config_hash: str = ""
    config: dict[str, Any] = Field(default_factory=dict)
    master_seed: int
    prng_algorithm: str
    arrival_algorithm: str
    seed_derivation: str
    duration_s: float
    window_s: float
    windows: int
    budget: RateBudget
    regime: RegimeReport | None = None
    record_count: int = 0
    channel_counts: list[int] = Field(default_factory=lambda: [0, 0])
    origin_counts: dict[str, int] = Field(default_factory=dict)
    achieved_rate: float = 0.0
