"""Attacker-facing view of a system model.

A :class:`SystemModel` is an ordered optical path as seen from the quantum
channel.  Eve's probe travels forward through the elements before the
reflection site, is reflected there, and returns through the same elements in
the opposite direction.  Everything is summed in dB and converted to photon
numbers only at the end.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .components import (
    FRESNEL_OPEN_DB,
    Component,
    Connector,
    Coupler,
    DirectionLike,
    opposite,
    reflectivity,
    transmittance,
)
from .detectors import (
    MonitoringDetector,
    Spad,
    alarm_triggered,
    detection_probability,
    mean_photons,
    photocurrent,
    power_for_photons,
    qber_contribution,
    total_afterpulse_probability,
)
from .errors import ConfigError, EmptyGrid
from .security import ProtocolParams
from .spectral import db_to_linear, linear_to_db

# stands in for total extinction; never a measured value
EXTINCTION_DB = -400.0
DEFAULT_DAMAGE_THRESHOLD_PHOTONS = 1e13
DEFAULT_SIGNAL_CLICK_PROB = 1e-3
TIE_DB = 0.1


@dataclass(frozen=True)
class PathElement:
    id: str
    component: Component
    direction: DirectionLike


@dataclass(frozen=True)
class Monitoring:
    detector: MonitoringDetector
    tap: int


@dataclass(frozen=True)
class AttachedSpad:
    """A SPAD fed from path position ``tap`` through an extra flat ``branch_loss_db``."""

    spad: Spad
    tap: int
    branch_loss_db: float = 0.0


@dataclass(frozen=True)
class SystemModel:
    name: str
    path: tuple[PathElement, ...]
    reflection_site: int
    monitoring: Optional[Monitoring] = None
    spads: tuple[AttachedSpad, ...] = ()
    damage_threshold_photons: float = DEFAULT_DAMAGE_THRESHOLD_PHOTONS
    signal_click_prob: float = DEFAULT_SIGNAL_CLICK_PROB
    protocol: ProtocolParams = field(default_factory=ProtocolParams)

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "spads", tuple(self.spads))
        n = len(self.path)
        if n == 0:
            raise ConfigError("system path is empty")
        if not 0 <= self.reflection_site < n:
            raise ConfigError(f"reflection_site {self.reflection_site} outside path of length {n}")
        if self.monitoring is not None and not 0 <= self.monitoring.tap < n:
            raise ConfigError(f"monitoring tap {self.monitoring.tap} outside path of length {n}")
        for s in self.spads:
            if not 0 <= s.tap < n:
                raise ConfigError(f"spad tap {s.tap} outside path of length {n}")
        if not self.damage_threshold_photons > 0:
            raise ConfigError("damage_threshold_photons must be > 0")
        if not 0 <= self.signal_click_prob < 1:
            raise ConfigError("signal_click_prob must lie in [0, 1)")

    def replace_component(self, index: int, component: Component) -> "SystemModel":
        path = list(self.path)
        path[index] = replace(path[index], component=component)
        return replace(self, path=tuple(path))

    def insert(self, index: int, element: PathElement) -> "SystemModel":
        """New model with ``element`` placed before position ``index``; indices are shifted."""
        def shift(i: int) -> int:
            return i + 1 if i >= index else i

        path = list(self.path)
        path.insert(index, element)
        monitoring = self.monitoring and replace(self.monitoring, tap=shift(self.monitoring.tap))
        spads = tuple(replace(s, tap=shift(s.tap)) for s in self.spads)
        return replace(self, path=tuple(path), reflection_site=shift(self.reflection_site),
                       monitoring=monitoring, spads=spads)


def open_connector(sys: SystemModel, index: int) -> SystemModel:
    """Same system with the connector at ``index`` unmated (flat glass-air Fresnel reflection)."""
    comp = sys.path[index].component
    if not isinstance(comp, Connector):
        raise ConfigError(f"path element {index} ({sys.path[index].id}) is not a connector")
    return sys.replace_component(index, replace(comp, reflectivity_db=FRESNEL_OPEN_DB))


@dataclass(frozen=True)
class AttackPulse:
    lambda_nm: float
    peak_power_w: float
    width_s: float
    rep_rate_hz: float

    def __post_init__(self):
        for name in ("lambda_nm", "peak_power_w", "width_s", "rep_rate_hz"):
            if not getattr(self, name) > 0:
                raise ValueError(f"pulse {name} must be > 0")
        if self.width_s * self.rep_rate_hz > 1:
            raise ValueError("pulse width times repetition rate exceeds 1")

    @property
    def photons(self) -> float:
        return mean_photons(self.lambda_nm, self.peak_power_w, self.width_s)


@dataclass(frozen=True)
class AttackOutcome:
    lambda_nm: float
    mu_eve: float
    input_photons: float
    required_input_photons: float
    required_peak_power_w: float
    path_attenuation_db: float
    monitoring_alarm: bool
    monitor_photocurrent_a: float
    spad_click_prob: float
    afterpulse_elevation: float
    projected_qber: float
    exceeds_damage: bool
    discrimination_success: float
    feasible: bool


# --- path sums -----------------------------------------------------------------

def _forward_db(sys: SystemModel, upto: int, lambda_nm: float, clamp: bool) -> float:
    return sum(transmittance(e.component, e.direction, lambda_nm, clamp=clamp)
               for e in sys.path[:upto])


def _return_db(sys: SystemModel, upto: int, lambda_nm: float, clamp: bool) -> float:
    return sum(transmittance(e.component, opposite(e.direction), lambda_nm, clamp=clamp)
               for e in sys.path[:upto])


def path_attenuation_db(sys: SystemModel, lambda_nm: float, clamp: bool = False,
                        site: Optional[int] = None) -> float:
    """Round-trip attenuation from the channel to the reflection site and back.

    Forward transmittances of the elements before the site, plus the site's
    reflectivity, plus the same elements traversed in the opposite direction.
    Floored at :data:`EXTINCTION_DB`.
    """
    site = sys.reflection_site if site is None else site
    r = reflectivity(sys.path[site].component, lambda_nm, clamp=clamp)
    total = _forward_db(sys, site, lambda_nm, clamp) + r + _return_db(sys, site, lambda_nm, clamp)
    return max(total, EXTINCTION_DB)


def total_back_reflection_db(sys: SystemModel, lambda_nm: float, clamp: bool = False) -> float:
    """Incoherent sum of every configured reflection as seen from the channel."""
    total = 0.0
    for i, e in enumerate(sys.path):
        r = reflectivity(e.component, lambda_nm, clamp=clamp)
        if math.isfinite(r):
            total += db_to_linear(path_attenuation_db(sys, lambda_nm, clamp=clamp, site=i))
    return max(linear_to_db(total), EXTINCTION_DB)


def photons_for_target_mu(sys: SystemModel, lambda_nm: float, target_mu: float,
                          clamp: bool = False) -> float:
    """Photons Eve must inject so the back-reflection carries ``target_mu`` on average."""
    if not target_mu > 0:
        raise ValueError("target mu must be > 0")
    return target_mu / db_to_linear(path_attenuation_db(sys, lambda_nm, clamp=clamp))


def arm_loss_db(sys: SystemModel, tap: int, lambda_nm: float, clamp: bool = False) -> float:
    """Forward loss from the channel to a detector attached at path position ``tap``.

    A coupler at the tap position routes its tap arm to the detector;
    any other element is taken as the detector's entry point.
    """
    loss = _forward_db(sys, tap, lambda_nm, clamp)
    comp = sys.path[tap].component
    if isinstance(comp, Coupler):
        loss += comp.tap_db
    return loss


# --- discrimination ---------------------------------------------------------------

def helstrom_success(mu: float, phase_separation_rad: float) -> float:
    """Minimum-error success probability for two equiprobable coherent states.

    The states share mean photon number ``mu`` and differ in phase by
    ``phase_separation_rad``; their overlap is ``exp(-2 mu (1 - cos theta))``.
    """
    if mu < 0:
        raise ValueError("mean photon number must be >= 0")
    overlap_sq = math.exp(-2.0 * mu * (1.0 - math.cos(phase_separation_rad)))
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - overlap_sq)))


# --- evaluation -----------------------------------------------------------------

def projected_qber(q0: float, signal_click_prob: float, noise_click_prob: float) -> float:
    """QBER once extra uncorrelated clicks are mixed into the signal clicks."""
    if noise_click_prob >= 1:
        return 0.5
    if noise_click_prob == 0:
        return q0
    s = signal_click_prob
    return q0 * s / (s + noise_click_prob) + qber_contribution(s, noise_click_prob)


def evaluate_attack(sys: SystemModel, pulse: AttackPulse, target_mu: float, *,
                    phase_separation_rad: float = math.pi / 2, clamp: bool = False) -> AttackOutcome:
    """Verdict for one probe pulse.

    ``exceeds_damage`` is raised when either the pulse itself or the pulse
    that would meet ``target_mu`` carries more photons than the damage
    threshold.  SPAD afterpulsing is averaged per gate over the pulse train,
    with Eve's pulses assumed to fall outside the detection gates.
    """
    lam = pulse.lambda_nm
    att = path_attenuation_db(sys, lam, clamp=clamp)
    input_photons = pulse.photons
    mu_eve = input_photons * db_to_linear(att)
    required = photons_for_target_mu(sys, lam, target_mu, clamp=clamp)

    alarm = False
    current = 0.0
    if sys.monitoring is not None:
        p_mon = pulse.peak_power_w * db_to_linear(arm_loss_db(sys, sys.monitoring.tap, lam, clamp))
        current = photocurrent(sys.monitoring.detector, lam, p_mon, clamp=clamp)
        alarm = alarm_triggered(sys.monitoring.detector, lam, p_mon, clamp=clamp)

    click = 0.0
    elevation = 0.0
    for s in sys.spads:
        mu_spad = input_photons * db_to_linear(arm_loss_db(sys, s.tap, lam, clamp) + s.branch_loss_db)
        click = max(click, detection_probability(s.spad, lam, mu_spad, clamp=clamp))
        per_gate = (pulse.rep_rate_hz / s.spad.gate_rate_hz) * total_afterpulse_probability(
            s.spad, lam, mu_spad, clamp=clamp)
        elevation = max(elevation, per_gate)
    qber = projected_qber(sys.protocol.q0, sys.signal_click_prob, min(elevation, 1.0))

    damage = max(input_photons, required) > sys.damage_threshold_photons
    feasible = (not alarm and not damage
                and mu_eve >= target_mu * (1 - 1e-9)
                and qber < sys.protocol.q_abort)
    return AttackOutcome(
        lambda_nm=lam,
        mu_eve=mu_eve,
        input_photons=input_photons,
        required_input_photons=required,
        required_peak_power_w=power_for_photons(lam, required, pulse.width_s),
        path_attenuation_db=att,
        monitoring_alarm=alarm,
        monitor_photocurrent_a=current,
        spad_click_prob=click,
        afterpulse_elevation=elevation,
        projected_qber=qber,
        exceeds_damage=damage,
        discrimination_success=helstrom_success(mu_eve, phase_separation_rad),
        feasible=feasible,
    )


@dataclass(frozen=True)
class ScanEntry:
    lambda_nm: float
    outcome: AttackOutcome
    rank: Optional[int]  # None for infeasible points


def budget_matched_pulse(sys: SystemModel, template: AttackPulse, lambda_nm: float,
                         target_mu: float, clamp: bool = False) -> AttackPulse:
    """``template`` moved to ``lambda_nm`` with its peak power set to meet ``target_mu`` exactly."""
    required = photons_for_target_mu(sys, lambda_nm, target_mu, clamp=clamp)
    return replace(template, lambda_nm=lambda_nm,
                   peak_power_w=power_for_photons(lambda_nm, required, template.width_s))


def rank_outcomes(outcomes: Sequence[AttackOutcome]) -> list[ScanEntry]:
    feasible = sorted((o for o in outcomes if o.feasible),
                      key=lambda o: (o.required_input_photons, o.lambda_nm))
    ranked: list[AttackOutcome] = []
    i = 0
    while i < len(feasible):
        # outcomes within TIE_DB of the group leader count as tied; lower wavelength wins
        lead = linear_to_db(feasible[i].required_input_photons)
        j = i + 1
        while j < len(feasible) and linear_to_db(feasible[j].required_input_photons) - lead <= TIE_DB:
            j += 1
        ranked.extend(sorted(feasible[i:j], key=lambda o: o.lambda_nm))
        i = j
    rest = sorted((o for o in outcomes if not o.feasible), key=lambda o: o.lambda_nm)
    return ([ScanEntry(o.lambda_nm, o, k) for k, o in enumerate(ranked, start=1)]
            + [ScanEntry(o.lambda_nm, o, None) for o in rest])


def scan_wavelengths(sys: SystemModel, lambda_grid: Sequence[float], pulse_template: AttackPulse,
                     target_mu: float, *, match_budget: bool = True,
                     phase_separation_rad: float = math.pi / 2, clamp: bool = False,
                     workers: Optional[int] = None) -> list[ScanEntry]:
    """Evaluate every grid wavelength and rank the feasible ones by photon budget.

    With ``match_budget`` the template's peak power is rescaled at each
    wavelength so the back-reflection carries exactly ``target_mu``.
    """
    grid = [float(x) for x in lambda_grid]
    if not grid:
        raise EmptyGrid("wavelength grid is empty")

    def one(lam: float) -> AttackOutcome:
        if match_budget:
            pulse = budget_matched_pulse(sys, pulse_template, lam, target_mu, clamp=clamp)
        else:
            pulse = replace(pulse_template, lambda_nm=lam)
        return evaluate_attack(sys, pulse, target_mu,
                               phase_separation_rad=phase_separation_rad, clamp=clamp)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, grid))
    else:
        outcomes = [one(lam) for lam in grid]
    return rank_outcomes(outcomes)
