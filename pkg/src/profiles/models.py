from typing import Any

from pydantic import BaseModel, Field


class ProfileHit(BaseModel):
    id: str
    summary: str
    when_to_use: str
    duration_s: float


class ProfileDoc(BaseModel):
    id: str
    description: str
    config: dict[str, Any] = Field(default_factory=dict)
