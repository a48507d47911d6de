from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field


class SourceParams(BaseModel):
    wavelength: float = Field(780e-9, gt=0, description="Laser wavelength (m)")
    linewidth: float = Field(9.74e12, gt=0, description="Frequency bandwidth (Hz)")
    power_at_reference: float = Field(1.23e-3, ge=0, description="Power before the attenuation optics (W)")
    transmission_factor: float = Field(2.78e-6, ge=0, le=1, description="Transmission of the attenuation optics")
    mean_photon_number: float = Field(0.0, ge=0, description="|alpha|^2; 0 means derive from rate and coherence time")
    input_power: float | None = Field(
        None,
        ge=0,
        description="Measured input power (W); overrides power_at_reference * transmission_factor when set",
    )


class PhotonNumberDistribution(BaseModel):
    mean: float
    probabilities: dict[int, float] = Field(default_factory=dict)
    tail_mass: float = 0.0

    def p(self, n: int) -> float:
        return self.probabilities.get(n, 0.0)


@dataclass(frozen=True)
class ArrivalTimes:
    times: np.ndarray
    duration: float
    rate: float
    seed: int | None = None
    algorithm: str = ""
    metadata: dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.times.size)
