"""Lossy plasmonic beamsplitter: conversion, propagation loss, splitting, regime checks."""

from .models import ChannelParams, RegimeReport, SplitOutcome
from .splitting import (
    ARRIVAL_RATIO_LIMIT,
    DEAD_TIME_RATIO_LIMIT,
    check_operating_regime,
    detected_stream_rate,
    input_survival_probability,
    label_surviving_arrivals,
    outcome_probabilities,
    propagation_transmission,
    split_excitation,
    split_excitations,
)

__all__ = [
    "ARRIVAL_RATIO_LIMIT",
    "DEAD_TIME_RATIO_LIMIT",
    "ChannelParams",
    "RegimeReport",
    "SplitOutcome",
    "check_operating_regime",
    "detected_stream_rate",
    "input_survival_probability",
    "label_surviving_arrivals",
    "outcome_probabilities",
    "propagation_transmission",
    "split_excitation",
    "split_excitations",
]
