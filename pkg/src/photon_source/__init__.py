"""Attenuated coherent-state source: photon statistics, rate budget, arrivals."""

from .arrivals import ARRIVAL_ALGORITHM, sample_poisson_arrivals
from .models import ArrivalTimes, PhotonNumberDistribution, SourceParams
from .physics import (
    LAB_INPUT_POWER,
    LAB_REFERENCE_POWER,
    LAB_TRANSMISSION_FACTOR,
    attenuated_power,
    coherence_time,
    mean_photons_per_coherence_time,
    photon_number_distribution,
    photon_rate,
    single_excitation_fraction,
    source_photon_rate,
)

__all__ = [
    "ARRIVAL_ALGORITHM",
    "LAB_INPUT_POWER",
    "LAB_REFERENCE_POWER",
    "LAB_TRANSMISSION_FACTOR",
    "ArrivalTimes",
    "PhotonNumberDistribution",
    "SourceParams",
    "attenuated_power",
    "coherence_time",
    "mean_photons_per_coherence_time",
    "photon_number_distribution",
    "photon_rate",
    "sample_poisson_arrivals",
    "single_excitation_fraction",
    "source_photon_rate",
]
