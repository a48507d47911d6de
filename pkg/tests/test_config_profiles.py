import json
from pathlib import Path

import pytest
import yaml

from plasmon_qrng.config import (
    PipelineConfig,
    RuntimeSettings,
    config_hash,
    load_pipeline_config,
    parse_pipeline_config,
)
from plasmon_qrng.errors import ConfigError
from plasmon_qrng.profiles import ProfileCatalog


def test_runtime_settings_defaults() -> None:
    settings = RuntimeSettings()

    assert settings.log_level == "INFO"
    assert settings.workers == 4
    assert settings.profile == "lab"
    assert settings.master_seed is None


def test_runtime_settings_read_environment(monkeypatch) -> None:
    monkeypatch.setenv("QRNG_LOG_LEVEL", "debug")
    monkeypatch.setenv("QRNG_WORKERS", "2")
    monkeypatch.setenv("QRNG_PROFILE", "ideal")
    monkeypatch.setenv("QRNG_MASTER_SEED", "17")

    settings = RuntimeSettings()

    assert settings.log_level == "DEBUG"
    assert settings.workers == 2
    assert settings.profile == "ideal"
    assert settings.master_seed == 17


@pytest.mark.parametrize(
    ("key", "value", "message"),
    [
        ("QRNG_WORKERS", "many", "must be an integer"),
        ("QRNG_WORKERS", "0", "must be >= 1"),
        ("QRNG_MASTER_SEED", "-3", "must be >= 0"),
        ("QRNG_LOG_LEVEL", "LOUD", "QRNG_LOG_LEVEL must be one of"),
    ],
)
def test_runtime_settings_reject_bad_values(monkeypatch, key: str, value: str, message: str) -> None:
    monkeypatch.setenv(key, value)

    with pytest.raises(ConfigError, match=message):
        RuntimeSettings()


def test_json_and_yaml_configs_load_identically(tmp_path: Path) -> None:
    raw = {
        "duration_s": 0.5,
        "master_seed": 9,
        "channel": {"transmit_prob": 0.3, "reflect_prob": 0.3, "loss_prob": 0.4},
    }
    json_path = tmp_path / "run.json"
    yaml_path = tmp_path / "run.yaml"
    json_path.write_text(json.dumps(raw), encoding="utf-8")
    yaml_path.write_text(yaml.safe_dump(raw), encoding="utf-8")

    from_json = load_pipeline_config(json_path)
    from_yaml = load_pipeline_config(yaml_path)

    assert from_json == from_yaml
    assert from_json.channel.loss_prob == 0.4
    assert from_json.detector.dead_time == 24e-9


def test_config_errors(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")

    with pytest.raises(ConfigError, match="Failed to parse"):
        load_pipeline_config(broken)
    with pytest.raises(ConfigError, match="must be a mapping"):
        load_pipeline_config(listing)
    with pytest.raises(ConfigError, match="Cannot read"):
        load_pipeline_config(tmp_path / "missing.json")
    with pytest.raises(ConfigError, match="invalid pipeline configuration"):
        parse_pipeline_config({"channel": {"transmit_prob": 0.9, "reflect_prob": 0.9}})
    with pytest.raises(ConfigError):
        parse_pipeline_config({"duration_s": 0})
    with pytest.raises(ConfigError):
        parse_pipeline_config({"battery": {"tests": ["dice"]}})


def test_config_hash_is_stable_and_sensitive() -> None:
    base = PipelineConfig()

    assert config_hash(base) == config_hash(PipelineConfig())
    assert len(config_hash(base)) == 64
    assert config_hash(base) != config_hash(base.model_copy(update={"master_seed": 1}))


def test_catalog_lists_packaged_profiles() -> None:
    hits = ProfileCatalog().list_profiles()

    assert [hit.id for hit in hits] == ["lab", "ideal", "noisy"]
    assert all(hit.summary and hit.when_to_use for hit in hits)
    assert hits[0].duration_s == 34.0


def test_catalog_reads_profiles_as_configs() -> None:
    catalog = ProfileCatalog()

    lab = catalog.read("lab")
    noisy = catalog.require("noisy")

    assert lab is not None
    assert lab.detector.tick_resolution == 25e-12
    assert lab.extractor.chunk_size_bits == 2_400_000
    assert noisy.detector.dark_rate == 500.0
    assert noisy.detector.afterpulse_prob == 0.01
    assert catalog.read("missing") is None
    with pytest.raises(ConfigError, match="Available profiles: ideal, lab, noisy"):
        catalog.require("missing")


def test_catalog_reports_unreadable_manifest(tmp_path: Path) -> None:
    manifest = tmp_path / "manifest.yaml"
    manifest.write_text("profiles: [\n", encoding="utf-8")

    with pytest.raises(ConfigError, match="Failed to load profile manifest"):
        ProfileCatalog(manifest)


def test_catalog_validates_profile_configs(tmp_path: Path) -> None:
    manifest = tmp_path / "manifest.yaml"
    manifest.write_text(
        yaml.safe_dump({"profiles": [{"id": "bad", "summary": "broken", "config": {"window_s": -1}}]}),
        encoding="utf-8",
    )

    with pytest.raises(ConfigError, match="bad"):
        ProfileCatalog(manifest).read("bad")
