import logging
import math
from pathlib import Path
from typing import Iterator

import numpy as np
from scipy.optimize import brentq

from ..channel import (
    ChannelParams,
    RegimeReport,
    check_operating_regime,
    detected_stream_rate,
    input_survival_probability,
    label_surviving_arrivals,
    outcome_probabilities,
)
from ..config import PipelineConfig
from ..detector import (
    DetectionEvents,
    DetectorParams,
    EventOrigin,
    add_afterpulses,
    add_dark_counts,
    apply_dead_time,
    apply_efficiency,
    last_kept_times,
    observed_rate,
    quantize,
)
from ..errors import DomainError
from ..photon_source import (
    ARRIVAL_ALGORITHM,
    SourceParams,
    coherence_time,
    mean_photons_per_coherence_time,
    sample_poisson_arrivals,
    single_excitation_fraction,
    source_photon_rate,
)
from ..photon_source.physics import PLANCK, SPEED_OF_LIGHT
from ..seeding import PRNG_ALGORITHM, child_rng, derive_seed
from ..timetag.codec import TimeTagWriter
from ..timetag.models import BitSequence
from .models import RateBudget, SimulationReport

logger = logging.getLogger(__name__)

SEED_DERIVATION = "sha256('<master_seed>:<module>:<window index>')[:8] little-endian"
CHANNELS = (0, 1)


def _channel_fractions(channel: ChannelParams) -> tuple[float, float]:
    """Probability that an injected photon is detected-eligible on port 0 / port 1."""
    to_0, to_1, _ = outcome_probabilities(channel)
    survival = input_survival_probability(channel)
    return survival * to_0, survival * to_1


def rate_budget(source: SourceParams, channel: ChannelParams, detector: DetectorParams) -> RateBudget:
    photons = source_photon_rate(source)
    tau = coherence_time(source.linewidth)
    mean = source.mean_photon_number or mean_photons_per_coherence_time(photons, tau)
    channel_rates = [
        photons * fraction * detector.efficiency + detector.dark_rate for fraction in _channel_fractions(channel)
    ]
    return RateBudget(
        photon_rate=photons,
        coherence_time=tau,
        mean_photons_per_coherence_time=mean,
        single_excitation_fraction=single_excitation_fraction(mean),
        surviving_rate=detected_stream_rate(photons, channel),
        channel_rates=channel_rates,
        expected_rate=sum(channel_rates),
        observed_rate=sum(observed_rate(rate, detector.dead_time) for rate in channel_rates),
    )


def compensating_power(
    target_rate: float,
    source: SourceParams,
    channel: ChannelParams,
    detector: DetectorParams,
) -> float:
    """Input power (W) that yields ``target_rate`` detections/s across both detectors after dead time."""
    fractions = [fraction * detector.efficiency for fraction in _channel_fractions(channel)]
    if target_rate < 0:
        raise DomainError(f"target_rate must be >= 0, got {target_rate}")
    if sum(fractions) <= 0:
        raise DomainError("no photon reaches a detector with this channel and detector")

    def observed(photons: float) -> float:
        return sum(observed_rate(photons * f + detector.dark_rate, detector.dead_time) for f in fractions)

    if target_rate <= observed(0.0):
        return 0.0
    ceiling = math.inf if detector.dead_time == 0 else len(fractions) / detector.dead_time
    if target_rate >= ceiling:
        raise DomainError(f"target_rate {target_rate:g}/s is at or above the dead-time ceiling {ceiling:g}/s")

    upper = target_rate / sum(fractions)
    while observed(upper) < target_rate:
        upper *= 2.0
    photons = brentq(lambda x: observed(x) - target_rate, 0.0, upper, xtol=1e-12 * upper, rtol=1e-14)
    return photons * PLANCK * SPEED_OF_LIGHT / source.wavelength


def _regime(budget: RateBudget, detector: DetectorParams) -> RegimeReport | None:
    per_detector = max(budget.channel_rates)
    if min(budget.photon_rate, budget.coherence_time, per_detector, detector.dead_time) <= 0:
        logger.debug("Regime check not applicable (zero rate or zero dead time)")
        return None
    report = check_operating_regime(budget.photon_rate, budget.coherence_time, per_detector, detector.dead_time)
    if not report.single_excitation_ok:
        logger.warning(
            "Single-excitation regime violated: rate * coherence time = %.3g (limit %.3g)",
            report.arrival_ratio,
            report.arrival_ratio_limit,
        )
    if not report.dead_time_ok:
        logger.warning(
            "Dead-time regime violated: detection rate * dead time = %.3g (limit %.3g)",
            report.dead_time_ratio,
            report.dead_time_ratio_limit,
        )
    return report


def simulate_window(
    config: PipelineConfig,
    index: int,
    start: float,
    duration: float,
    surviving_rate: float,
    carry_in: dict[int, float],
    pending: DetectionEvents,
) -> tuple[DetectionEvents, DetectionEvents]:
    """Detected events in [start, start + duration) and the afterpulses that fall after it."""
    master, detector = config.master_seed, config.detector
    end = start + duration

    arrivals = sample_poisson_arrivals(
        surviving_rate, duration, derive_seed(master, "photon_source.arrivals", index), start=start
    )
    labels = label_surviving_arrivals(len(arrivals), config.channel, child_rng(master, "channel.split", index))
    signal = DetectionEvents(arrivals.times, labels, np.full(len(arrivals), EventOrigin.SIGNAL, dtype=np.uint8))
    signal = apply_efficiency(signal, detector.efficiency, child_rng(master, "detector.efficiency", index))

    darks = [
        add_dark_counts(duration, detector.dark_rate, derive_seed(master, f"detector.dark.{ch}", index), ch, start)
        for ch in CHANNELS
    ]
    primaries = apply_dead_time(DetectionEvents.concat([signal, *darks]).sorted(), detector.dead_time, carry_in)

    spawned = add_afterpulses(
        primaries,
        detector.afterpulse_prob,
        detector.afterpulse_delay,
        derive_seed(master, "detector.afterpulse", index),
    )
    afterpulses = DetectionEvents.concat([pending, spawned.select(spawned.origins == EventOrigin.AFTERPULSE)])
    afterpulses = afterpulses.sorted()
    due = afterpulses.times < end
    union = DetectionEvents.concat([primaries, afterpulses.select(due)]).sorted()
    return apply_dead_time(union, detector.dead_time, carry_in), afterpulses.select(~due)


def window_count(config: PipelineConfig) -> int:
    return max(1, math.ceil(config.duration_s / config.window_s - 1e-9))


def iter_windows(config: PipelineConfig, surviving_rate: float) -> Iterator[DetectionEvents]:
    """Detected events window by window, with dead-time state and pending afterpulses carried over."""
    carry_in: dict[int, float] = {}
    pending = DetectionEvents.empty()
    for index in range(window_count(config)):
        start = index * config.window_s
        duration = min(config.window_s, config.duration_s - start)
        if duration <= 0:
            break
        events, pending = simulate_window(config, index, start, duration, surviving_rate, carry_in, pending)
        carry_in.update(last_kept_times(events))
        logger.debug("Window %d: %d events", index, len(events))
        yield events


def simulate_bits(config: PipelineConfig) -> BitSequence:
    """Raw bits of a simulated run without writing time tags; same bits as extract(simulate(config))."""
    budget = rate_budget(config.source, config.channel, config.detector)
    channels = [events.channels for events in iter_windows(config, budget.surviving_rate)]
    return BitSequence.from_array(np.concatenate(channels) if channels else np.empty(0, dtype=np.uint8))


def simulate(config: PipelineConfig, out_path: Path, tool_version: str = "", digest: str = "") -> SimulationReport:
    """Run source -> channel -> detector and stream the time tags to ``out_path``."""
    out_path = Path(out_path)
    budget = rate_budget(config.source, config.channel, config.detector)
    regime = _regime(budget, config.detector)
    windows = window_count(config)
    logger.info(
        "Simulating %.6g s in %d window(s): %.4g photons/s, %.4g detections/s expected",
        config.duration_s,
        windows,
        budget.photon_rate,
        budget.observed_rate,
    )

    channel_counts = np.zeros(len(CHANNELS), dtype=np.int64)
    origin_counts = np.zeros(len(EventOrigin), dtype=np.int64)
    with TimeTagWriter(out_path) as writer:
        for events in iter_windows(config, budget.surviving_rate):
            writer.write(quantize(events, config.detector.tick_resolution))
            channel_counts += np.bincount(events.channels, minlength=len(CHANNELS))[: len(CHANNELS)]
            origin_counts += np.bincount(events.origins, minlength=len(EventOrigin))
        record_count = writer.count

    report = SimulationReport(
        tool_version=tool_version,
        config_hash=digest,
        config=config.model_dump(mode="json"),
        master_seed=config.master_seed,
        prng_algorithm=PRNG_ALGORITHM,
        arrival_algorithm=ARRIVAL_ALGORITHM,
        seed_derivation=SEED_DERIVATION,
        duration_s=config.duration_s,
        window_s=config.window_s,
        windows=windows,
        budget=budget,
        regime=regime,
        record_count=record_count,
        channel_counts=channel_counts.tolist(),
        origin_counts={origin.name.lower(): int(origin_counts[origin]) for origin in EventOrigin},
        achieved_rate=record_count / config.duration_s,
    )
    logger.info("Wrote %d records to %s (%.4g /s)", record_count, out_path, report.achieved_rate)
    return report


def metadata_path(out_path: Path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".meta.json")
