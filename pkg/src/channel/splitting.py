import math

import numpy as np

from ..errors import DomainError
from .models import PROBABILITY_SUM_TOLERANCE, ChannelParams, RegimeReport, SplitOutcome

ARRIVAL_RATIO_LIMIT = 1e-2
DEAD_TIME_RATIO_LIMIT = 1e-1


def propagation_transmission(length: float, decay_length: float) -> float:
    """Surviving fraction e^(-length / decay_length) after SPP propagation."""
    if not decay_length > 0:
        raise DomainError(f"decay_length must be > 0, got {decay_length}")
    if length < 0:
        raise DomainError(f"length must be >= 0, got {length}")
    return math.exp(-length / decay_length)


def input_survival_probability(params: ChannelParams) -> float:
    return params.grating_efficiency * propagation_transmission(params.lead_in_length, params.decay_length)


def outcome_probabilities(params: ChannelParams) -> tuple[float, float, float]:
    """(P(TransmittedTo0), P(ReflectedTo1), P(Lost)) for an excitation reaching the splitter."""
    _check_trichotomy(params)
    to_0 = params.transmit_prob * params.output_survival
    to_1 = params.reflect_prob * params.output_survival
    return to_0, to_1, max(0.0, 1.0 - to_0 - to_1)


def split_excitation(params: ChannelParams, rng: np.random.Generator) -> SplitOutcome:
    to_0, to_1, _ = outcome_probabilities(params)
    draw = rng.random()
    if draw < to_0:
        return SplitOutcome.TRANSMITTED_TO_0
    if draw < to_0 + to_1:
        return SplitOutcome.REFLECTED_TO_1
    return SplitOutcome.LOST


def split_excitations(params: ChannelParams, count: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised ``split_excitation``: one SplitOutcome value (uint8) per excitation."""
    to_0, to_1, _ = outcome_probabilities(params)
    draws = rng.random(count)
    outcomes = np.full(count, SplitOutcome.LOST, dtype=np.uint8)
    outcomes[draws < to_0 + to_1] = SplitOutcome.REFLECTED_TO_1
    outcomes[draws < to_0] = SplitOutcome.TRANSMITTED_TO_0
    return outcomes


def detected_stream_rate(photon_rate: float, params: ChannelParams) -> float:
    """Rate of excitations that survive input loss, splitting and output loss."""
    to_0, to_1, _ = outcome_probabilities(params)
    return photon_rate * input_survival_probability(params) * (to_0 + to_1)


def label_surviving_arrivals(count: int, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Channel labels for arrivals already thinned to the surviving stream.

    Conditioned on survival an excitation exits port 1 with probability R/(T+R);
    the symmetric output survival cancels.
    """
    _check_trichotomy(params)
    surviving = params.transmit_prob + params.reflect_prob
    if surviving <= 0:
        raise DomainError("no excitation can survive a splitter with transmit_prob + reflect_prob = 0")
    return (rng.random(count) < params.reflect_prob / surviving).astype(np.uint8)


def check_operating_regime(
    arrival_rate: float,
    coherence_time: float,
    expected_detection_rate_per_detector: float,
    dead_time: float,
) -> RegimeReport:
    if min(arrival_rate, coherence_time, expected_detection_rate_per_detector, dead_time) <= 0:
        raise DomainError("regime check inputs must all be positive")
    arrival_ratio = arrival_rate * coherence_time
    dead_time_ratio = expected_detection_rate_per_detector * dead_time
    return RegimeReport(
        arrival_ratio=arrival_ratio,
        arrival_ratio_limit=ARRIVAL_RATIO_LIMIT,
        single_excitation_ok=arrival_ratio < ARRIVAL_RATIO_LIMIT,
        dead_time_ratio=dead_time_ratio,
        dead_time_ratio_limit=DEAD_TIME_RATIO_LIMIT,
        dead_time_ok=dead_time_ratio < DEAD_TIME_RATIO_LIMIT,
    )


def _check_trichotomy(params: ChannelParams) -> None:
    total = params.transmit_prob + params.reflect_prob + params.loss_prob
    if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
        raise DomainError(f"transmit_prob + reflect_prob + loss_prob must equal 1, got {total!r}")
