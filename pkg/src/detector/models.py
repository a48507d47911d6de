from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, NamedTuple

import numpy as np
from pydantic import BaseModel, Field


class EventOrigin(IntEnum):
    SIGNAL = 0
    DARK = 1
    AFTERPULSE = 2


class DetectorParams(BaseModel):
    efficiency: float = Field(1.0, ge=0, le=1)
    dead_time: float = Field(24e-9, ge=0, description="Non-paralyzable dead time (s)")
    dark_rate: float = Field(0.0, ge=0, description="Dark count rate per detector (1/s)")
    afterpulse_prob: float = Field(0.0, ge=0, le=1)
    afterpulse_delay: float = Field(50e-9, ge=0, description="Mean afterpulse delay (s)")
    tick_resolution: float = Field(25e-12, gt=0, description="Time-tagger resolution (s)")


class DetectionEvent(NamedTuple):
    channel: int
    true_time: float
    origin: EventOrigin = EventOrigin.SIGNAL


@dataclass(frozen=True)
class DetectionEvents:
    """Column-oriented event list; row i is one DetectionEvent."""

    times: np.ndarray
    channels: np.ndarray
    origins: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", np.asarray(self.times, dtype=np.float64))
        object.__setattr__(self, "channels", np.asarray(self.channels, dtype=np.uint8))
        object.__setattr__(self, "origins", np.asarray(self.origins, dtype=np.uint8))
        if not self.times.shape == self.channels.shape == self.origins.shape:
            raise ValueError("times, channels and origins must have equal length")

    def __len__(self) -> int:
        return int(self.times.size)

    def __getitem__(self, index: int) -> DetectionEvent:
        origin = EventOrigin(int(self.origins[index]))
        return DetectionEvent(int(self.channels[index]), float(self.times[index]), origin)

    @classmethod
    def empty(cls) -> "DetectionEvents":
        return cls(np.empty(0), np.empty(0), np.empty(0))

    @classmethod
    def from_events(cls, events: Iterable[DetectionEvent]) -> "DetectionEvents":
        rows = list(events)
        return cls(
            np.array([row.true_time for row in rows], dtype=np.float64),
            np.array([row.channel for row in rows], dtype=np.uint8),
            np.array([int(row.origin) for row in rows], dtype=np.uint8),
        )

    @classmethod
    def on_channel(cls, times: np.ndarray, channel: int, origin: EventOrigin) -> "DetectionEvents":
        times = np.asarray(times, dtype=np.float64)
        return cls(times, np.full(times.size, channel, dtype=np.uint8), np.full(times.size, origin, dtype=np.uint8))

    def select(self, mask_or_index: np.ndarray) -> "DetectionEvents":
        return DetectionEvents(self.times[mask_or_index], self.channels[mask_or_index], self.origins[mask_or_index])

    def sorted(self) -> "DetectionEvents":
        """Stable sort by time; equal times keep their input order."""
        return self.select(np.argsort(self.times, kind="stable"))

    def to_list(self) -> list[DetectionEvent]:
        return [self[index] for index in range(len(self))]

    @staticmethod
    def concat(parts: Iterable["DetectionEvents"]) -> "DetectionEvents":
        parts = [part for part in parts if len(part)]
        if not parts:
            return DetectionEvents.empty()
        return DetectionEvents(
            np.concatenate([part.times for part in parts]),
            np.concatenate([part.channels for part in parts]),
            np.concatenate([part.origins for part in parts]),
        )
