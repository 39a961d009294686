"""Safeguard detectors: a classical monitoring photodiode and a gated SPAD.

Wavelength-dependent responses are stored as log10 curves (log10 of A/W for
responsivity, log10 of the efficiency for the SPAD) and interpolated linearly
in that log domain.

Photon numbers use the photon energy ``h c / lambda`` with the unreduced
Planck constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInvertible
from .spectral import SpectralCurve, interpolate_db

PLANCK_J_S = 6.62607015e-34
SPEED_OF_LIGHT_M_S = 299_792_458.0

# afterpulse model defaults; not measured values
DEFAULT_AFTERPULSE_AMPLITUDE = 0.02
DEFAULT_TRAP_DECAY_S = 10e-6


def photon_energy_j(lambda_nm: float) -> float:
    return PLANCK_J_S * SPEED_OF_LIGHT_M_S / (lambda_nm * 1e-9)


def mean_photons(lambda_nm: float, power_w: float, duration_s: float) -> float:
    """Mean photon number in ``power_w`` delivered over ``duration_s``."""
    if lambda_nm < 0 or power_w < 0 or duration_s < 0:
        raise ValueError("wavelength, power and duration must be >= 0")
    if power_w == 0 or duration_s == 0:
        return 0.0
    return power_w * duration_s / photon_energy_j(lambda_nm)


def power_for_photons(lambda_nm: float, photons: float, duration_s: float) -> float:
    """Inverse of :func:`mean_photons` for the power."""
    return photons * photon_energy_j(lambda_nm) / duration_s


@dataclass(frozen=True)
class MonitoringDetector:
    responsivity_log10: SpectralCurve
    dark_current_a: float
    alarm_factor: float = 1.0

    def __post_init__(self):
        if not self.dark_current_a > 0:
            raise ValueError("dark current must be > 0")
        if not self.alarm_factor >= 1:
            raise ValueError("alarm factor must be >= 1")

    @classmethod
    def flat(cls, responsivity_a_w: float, dark_current_a: float, alarm_factor: float = 1.0,
             lo_nm: float = 400.0, hi_nm: float = 2500.0) -> "MonitoringDetector":
        return cls(SpectralCurve.flat(math.log10(responsivity_a_w), lo_nm, hi_nm, label="responsivity"),
                   dark_current_a, alarm_factor)

    def responsivity(self, lambda_nm: float, clamp: bool = False) -> float:
        return 10.0 ** interpolate_db(self.responsivity_log10, lambda_nm, clamp=clamp)

    @property
    def threshold_a(self) -> float:
        return self.alarm_factor * self.dark_current_a


def photocurrent(det: MonitoringDetector, lambda_nm: float, power_w: float,
                 clamp: bool = False) -> float:
    if power_w < 0:
        raise ValueError("optical power must be >= 0")
    return det.responsivity(lambda_nm, clamp=clamp) * power_w


def alarm_triggered(det: MonitoringDetector, lambda_nm: float, power_w: float,
                    clamp: bool = False) -> bool:
    # Equality alarms, so the defender gets the boundary case.  The product is
    # compared exactly: a rounded float product can land on the threshold for
    # powers just below the boundary.
    if power_w < 0:
        raise ValueError("optical power must be >= 0")
    rho = Fraction(det.responsivity(lambda_nm, clamp=clamp))
    return rho * Fraction(power_w) >= Fraction(det.alarm_factor) * Fraction(det.dark_current_a)


@dataclass(frozen=True)
class Spad:
    efficiency_log10: SpectralCurve
    dark_count_prob: float
    gate_fwhm_s: float
    gate_rate_hz: float
    afterpulse_amplitude: float = DEFAULT_AFTERPULSE_AMPLITUDE
    trap_decay_s: float = DEFAULT_TRAP_DECAY_S

    def __post_init__(self):
        if not 0 < self.dark_count_prob < 1:
            raise ValueError("dark count probability must lie in (0, 1)")
        if not self.gate_fwhm_s > 0:
            raise ValueError("gate width must be > 0")
        if not self.gate_rate_hz > 0:
            raise ValueError("gate rate must be > 0")
        if not self.afterpulse_amplitude >= 0:
            raise ValueError("afterpulse amplitude must be >= 0")
        if not self.trap_decay_s > 0:
            raise ValueError("trap decay time must be > 0")
        if not self.efficiency_log10.passive:
            object.__setattr__(self, "efficiency_log10", SpectralCurve(
                self.efficiency_log10.wavelengths_nm, self.efficiency_log10.values_db,
                label=self.efficiency_log10.label or "spad efficiency", passive=True))

    def efficiency(self, lambda_nm: float, clamp: bool = False) -> float:
        return 10.0 ** interpolate_db(self.efficiency_log10, lambda_nm, clamp=clamp)

    def gate_mean_photons(self, lambda_nm: float, average_power_w: float) -> float:
        """Mean photons inside one gate for quasi-CW light of the given average power."""
        return mean_photons(lambda_nm, average_power_w, self.gate_fwhm_s)


def click_probability(eta: float, d: float, mu: float) -> float:
    """``d + (1 - exp(-mu*eta)) * (1 - d)``."""
    if mu < 0:
        raise ValueError("mean photon number must be >= 0")
    return d + (-math.expm1(-mu * eta)) * (1.0 - d)


def detection_probability(spad: Spad, lambda_nm: float, mu: float, clamp: bool = False) -> float:
    """Total click probability in a gate holding ``mu`` photons on average."""
    return click_probability(spad.efficiency(lambda_nm, clamp=clamp), spad.dark_count_prob, mu)


def invert_efficiency(p_tot: float, d: float, mu: float) -> float:
    """Recover the efficiency from a measured click probability."""
    if mu <= 0:
        raise NotInvertible("mean photon number must be > 0")
    if not d < p_tot < 1:
        raise NotInvertible(
            f"click probability {p_tot:g} must lie strictly between dark level {d:g} and 1")
    return -math.log1p(-(p_tot - d) / (1.0 - d)) / mu


def afterpulse_probability(spad: Spad, lambda_nm: float, mu: float, gates_elapsed: int,
                           clamp: bool = False) -> float:
    """Afterpulse click probability ``gates_elapsed`` gates after a pulse of ``mu`` photons.

    Phenomenological: proportional to the absorbed photon number
    ``mu * eta(lambda)`` with a single exponentially decaying trap population,
    ``min(1, A * mu * eta * exp(-dt / tau_trap))``.  The wavelength enters only
    through the efficiency, so lower sensitivity means fewer afterpulses.
    """
    if mu < 0:
        raise ValueError("mean photon number must be >= 0")
    if gates_elapsed < 0:
        raise ValueError("gates_elapsed must be >= 0")
    absorbed = mu * spad.efficiency(lambda_nm, clamp=clamp)
    dt = gates_elapsed / spad.gate_rate_hz
    return min(1.0, spad.afterpulse_amplitude * absorbed * math.exp(-dt / spad.trap_decay_s))


def total_afterpulse_probability(spad: Spad, lambda_nm: float, mu: float,
                                 clamp: bool = False) -> float:
    """Expected afterpulse clicks summed over all following gates (k >= 1).

    Terms saturating at 1 are counted as 1; the unsaturated tail is a
    geometric series.
    """
    a = spad.afterpulse_amplitude * mu * spad.efficiency(lambda_nm, clamp=clamp)
    if a <= 0:
        return 0.0
    r = math.exp(-1.0 / (spad.gate_rate_hz * spad.trap_decay_s))
    # gates k >= 1 with a * r**k >= 1
    saturated = max(0, math.floor(math.log(a) / -math.log(r))) if a > 1 else 0
    return saturated + a * r ** (saturated + 1) / (1.0 - r)


def qber_contribution(signal_click_prob: float, noise_click_prob: float) -> float:
    """Error rate from uncorrelated noise clicks, which are wrong half the time."""
    for name, p in (("signal", signal_click_prob), ("noise", noise_click_prob)):
        if not 0 <= p < 1:
            raise ValueError(f"{name} click probability must lie in [0, 1)")
    if signal_click_prob == 0 and noise_click_prob == 0:
        raise ValueError("signal and noise click probabilities cannot both be 0")
    return 0.5 * noise_click_prob / (signal_click_prob + noise_click_prob)
