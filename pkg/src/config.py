import hashlib
import json
import os
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError

from .channel.models import ChannelParams
from .detector.models import DetectorParams
from .errors import ConfigError
from .extractor.models import ExtractorConfig
from .nist.models import BatteryConfig
from .photon_source.models import SourceParams

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class RuntimeSettings:
    def __init__(self) -> None:
        self.log_level = os.getenv("QRNG_LOG_LEVEL", "INFO").upper()
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"QRNG_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {self.log_level}")
        self.workers = self._get_int_env("QRNG_WORKERS", "4", minimum=1)
        self.profile = os.getenv("QRNG_PROFILE", "lab")
        master_seed = os.getenv("QRNG_MASTER_SEED")
        self.master_seed = self._get_int_env("QRNG_MASTER_SEED", master_seed, minimum=0) if master_seed else None

    @staticmethod
    def _get_int_env(key: str, default: str, minimum: int) -> int:
        """Read an integer environment variable or raise a descriptive error."""
        raw = os.getenv(key, default)
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"Environment variable {key} must be an integer, got {raw!r}") from None
        if value < minimum:
            raise ConfigError(f"Environment variable {key} must be >= {minimum}, got {value}")
        return value


class PipelineConfig(BaseModel):
    source: SourceParams = Field(default_factory=SourceParams)
    channel: ChannelParams = Field(default_factory=ChannelParams)
    detector: DetectorParams = Field(default_factory=DetectorParams)
    extractor: ExtractorConfig = Field(default_factory=ExtractorConfig)
    battery: BatteryConfig = Field(default_factory=BatteryConfig)
    duration_s: float = Field(1.0, gt=0)
    window_s: float = Field(1.0, gt=0, description="Simulation window; seeds and carry-over are per window")
    master_seed: int = Field(0, ge=0, lt=2**64)


def parse_pipeline_config(raw: dict[str, Any], source: str = "<config>") -> PipelineConfig:
    try:
        return PipelineConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"{source}: invalid pipeline configuration\n{exc}") from exc


def load_pipeline_config(path: Path) -> PipelineConfig:
    """Load a JSON (``.json``) or YAML (``.yaml``/``.yml``) pipeline config."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config {path}: {exc}") from exc

    try:
        if path.suffix.lower() in {".yaml", ".yml"}:
            raw = yaml.safe_load(text) or {}
        else:
            raw = json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Failed to parse config {path}: {exc}") from exc

    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return parse_pipeline_config(raw, str(path))


def canonical_json(config: PipelineConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_hash(config: PipelineConfig) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()
