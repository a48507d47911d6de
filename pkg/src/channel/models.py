from enum import IntEnum

from pydantic import BaseModel, Field, model_validator

PROBABILITY_SUM_TOLERANCE = 1e-12


class SplitOutcome(IntEnum):
    TRANSMITTED_TO_0 = 0
    REFLECTED_TO_1 = 1
    LOST = 2


class ChannelParams(BaseModel):
    grating_efficiency: float = Field(0.12, ge=0, le=1)
    lead_in_length: float = Field(4.5, ge=0, description="Input grating to splitter distance (um)")
    decay_length: float = Field(8.5, gt=0, description="SPP propagation decay length (um)")
    transmit_prob: float = Field(0.5, ge=0, le=1)
    reflect_prob: float = Field(0.5, ge=0, le=1)
    loss_prob: float = Field(0.0, ge=0, le=1)
    output_survival: float = Field(1.0, ge=0, le=1, description="Post-split propagation and out-coupling, both arms")

    @model_validator(mode="after")
    def _check_trichotomy(self) -> "ChannelParams":
        total = self.transmit_prob + self.reflect_prob + self.loss_prob
        if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
            raise ValueError(f"transmit_prob + reflect_prob + loss_prob must equal 1, got {total!r}")
        return self

    @classmethod
    def with_asymmetry(cls, asymmetry: float, loss_prob: float = 0.0, **kwargs: float) -> "ChannelParams":
        """Split (1 - loss) as T = (1 - a)/2, R = (1 + a)/2 of the surviving share."""
        surviving = 1.0 - loss_prob
        return cls(
            transmit_prob=surviving * (1.0 - asymmetry) / 2.0,
            reflect_prob=surviving * (1.0 + asymmetry) / 2.0,
            loss_prob=loss_prob,
            **kwargs,
        )


class RegimeReport(BaseModel):
    arrival_ratio: float
    arrival_ratio_limit: float
    single_excitation_ok: bool
    dead_time_ratio: float
    dead_time_ratio_limit: float
    dead_time_ok: bool

    @property
    def ok(self) -> bool:
        return self.single_excitation_ok and self.dead_time_ok
