"""Wavelength-resolved Trojan-horse risk analysis for fiber-optic QKD subsystems."""
from .attack import (
    AttackOutcome,
    AttackPulse,
    SystemModel,
    evaluate_attack,
    helstrom_success,
    path_attenuation_db,
    photons_for_target_mu,
    scan_wavelengths,
)
from .components import Direction, reflectivity, transmittance, validate_against_datasheet
from .config import load_config
from .detectors import (
    afterpulse_probability,
    alarm_triggered,
    detection_probability,
    invert_efficiency,
    mean_photons,
    photocurrent,
    qber_contribution,
)
from .security import AttackObservation, ProtocolParams, breach_verdict, delta_y
from .spectral import (
    SpectralCurve,
    compose_serial,
    double_pass,
    emit_csv,
    interpolate_db,
    normalize_to_reference,
    parse_csv,
)

__version__ = "0.1.0"

__all__ = [
    "afterpulse_probability",
    "alarm_triggered",
    "AttackObservation",
    "AttackOutcome",
    "AttackPulse",
    "breach_verdict",
    "compose_serial",
    "delta_y",
    "detection_probability",
    "Direction",
    "double_pass",
    "emit_csv",
    "evaluate_attack",
    "helstrom_success",
    "interpolate_db",
    "invert_efficiency",
    "load_config",
    "mean_photons",
    "normalize_to_reference",
    "parse_csv",
    "path_attenuation_db",
    "photocurrent",
    "photons_for_target_mu",
    "ProtocolParams",
    "qber_contribution",
    "reflectivity",
    "scan_wavelengths",
    "SpectralCurve",
    "SystemModel",
    "transmittance",
    "validate_against_datasheet",
]
