from pathlib import Path
from typing import Any

import yaml

from ..config import PipelineConfig, parse_pipeline_config
from ..errors import ConfigError
from .models import ProfileDoc, ProfileHit

DEFAULT_MANIFEST = Path(__file__).with_name("manifest.yaml")


class ProfileCatalog:
    def __init__(self, manifest_path: Path = DEFAULT_MANIFEST) -> None:
        self.manifest_path = Path(manifest_path)
        self._docs: dict[str, ProfileDoc] = {}
        self._hit_metadata: dict[str, dict[str, Any]] = {}
        self._load_manifest()

    def _load_manifest(self) -> None:
        try:
            with self.manifest_path.open("r", encoding="utf-8") as manifest_file:
                raw = yaml.safe_load(manifest_file) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"Failed to load profile manifest {self.manifest_path}: {exc}") from exc

        docs: dict[str, ProfileDoc] = {}
        hit_metadata: dict[str, dict[str, Any]] = {}
        for profile in raw.get("profiles", []):
            profile_id = profile["id"]
            docs[profile_id] = ProfileDoc(
                id=profile_id,
                description=profile.get("description", ""),
                config=profile.get("config", {}),
            )
            hit_metadata[profile_id] = {
                "summary": profile.get("summary", ""),
                "when_to_use": profile.get("when_to_use", ""),
            }

        self._docs = docs
        self._hit_metadata = hit_metadata

    def list_profiles(self) -> list[ProfileHit]:
        return [self._doc_to_hit(doc, self._hit_metadata.get(doc.id)) for doc in self._docs.values()]

    def read(self, profile_id: str) -> PipelineConfig | None:
        doc = self._docs.get(profile_id)
        if doc is None:
            return None
        return parse_pipeline_config(doc.config, f"{self.manifest_path}:{profile_id}")

    def require(self, profile_id: str) -> PipelineConfig:
        config = self.read(profile_id)
        if config is None:
            available = ", ".join(sorted(self._docs))
            raise ConfigError(f"Unknown profile: {profile_id}. Available profiles: {available}")
        return config

    def _doc_to_hit(self, doc: ProfileDoc, metadata: dict[str, Any] | None = None) -> ProfileHit:
        metadata = metadata or {}
        summary = str(metadata.get("summary") or doc.description.split("\n", maxsplit=1)[0] or "")
        when_to_use = str(metadata.get("when_to_use") or summary or "Use when needed.")
        return ProfileHit(
            id=doc.id,
            summary=summary,
            when_to_use=when_to_use,
            duration_s=self.require(doc.id).duration_s,
        )
