import math

from scipy import constants
from scipy.stats import poisson

from ..errors import DomainError
from .models import PhotonNumberDistribution, SourceParams

# Lab figures. LAB_INPUT_POWER is the quoted input power; it is not the
# product of the other two (that product is 3.42 nW). Both are kept.
LAB_REFERENCE_POWER = 1.23e-3
LAB_TRANSMISSION_FACTOR = 2.78e-6
LAB_INPUT_POWER = 3.77e-9

TAIL_TOLERANCE = 1e-12

PLANCK = constants.h
SPEED_OF_LIGHT = constants.c


def photon_number_distribution(mean: float, cutoff: int | None = None) -> PhotonNumberDistribution:
    """Poisson photon-number distribution of a coherent state with ``mean`` = |alpha|^2.

    With ``cutoff=None`` the cutoff is the smallest n whose tail mass is below
    1e-12.
    """
    if mean < 0 or math.isnan(mean):
        raise DomainError(f"mean photon number must be >= 0, got {mean}")
    if cutoff is None:
        cutoff = _adaptive_cutoff(mean)
    if cutoff < 1:
        raise DomainError(f"cutoff must be >= 1, got {cutoff}")

    if mean == 0:
        probabilities = {n: (1.0 if n == 0 else 0.0) for n in range(cutoff + 1)}
        return PhotonNumberDistribution(mean=0.0, probabilities=probabilities, tail_mass=0.0)

    probabilities = {n: float(poisson.pmf(n, mean)) for n in range(cutoff + 1)}
    tail_mass = float(poisson.sf(cutoff, mean))
    return PhotonNumberDistribution(mean=mean, probabilities=probabilities, tail_mass=tail_mass)


def _adaptive_cutoff(mean: float) -> int:
    if mean == 0:
        return 1
    cutoff = 1
    while poisson.sf(cutoff, mean) >= TAIL_TOLERANCE:
        cutoff += 1
    return cutoff


def coherence_time(linewidth: float) -> float:
    """tau = sqrt(2 ln 2) / (pi * delta_nu)."""
    if not linewidth > 0:
        raise DomainError(f"linewidth must be > 0, got {linewidth}")
    return math.sqrt(2.0 * math.log(2.0)) / (math.pi * linewidth)


def photon_rate(input_power: float, wavelength: float) -> float:
    """R = lambda * P_in / (h c)."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    if input_power < 0:
        raise DomainError(f"input power must be >= 0, got {input_power}")
    return wavelength * input_power / (PLANCK * SPEED_OF_LIGHT)


def attenuated_power(reference_power: float, transmission_factor: float) -> float:
    if reference_power < 0:
        raise DomainError(f"reference power must be >= 0, got {reference_power}")
    if not 0.0 <= transmission_factor <= 1.0:
        raise DomainError(f"transmission factor must be in [0, 1], got {transmission_factor}")
    return reference_power * transmission_factor


def source_photon_rate(params: SourceParams) -> float:
    power = params.input_power
    if power is None:
        power = attenuated_power(params.power_at_reference, params.transmission_factor)
    return photon_rate(power, params.wavelength)


def mean_photons_per_coherence_time(rate: float, coherence: float) -> float:
    if rate < 0 or coherence < 0:
        raise DomainError("rate and coherence time must be non-negative")
    return rate * coherence


def single_excitation_fraction(mean: float) -> float:
    """p_1 / (1 - p_0): share of post-selected events that held exactly one photon."""
    if mean < 0:
        raise DomainError(f"mean photon number must be >= 0, got {mean}")
    if mean == 0:
        return 1.0
    return mean * math.exp(-mean) / -math.expm1(-mean)
