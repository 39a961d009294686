"""Optical components with direction-dependent spectral behaviour."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import InvalidDirection
from .spectral import SpectralCurve, interpolate_db

FRESNEL_OPEN_DB = -14.0  # flat glass-air interface, ~4 %
DEFAULT_CONNECTOR_INSERTION_DB = -0.3
NO_REFLECTION = -math.inf


class DefaultedValueWarning(UserWarning):
    """A value that enters the numbers was filled in from a non-measured default."""


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"

    def opposite(self) -> "Direction":
        return Direction.REVERSE if self is Direction.FORWARD else Direction.FORWARD


PortPair = tuple[int, int]
DirectionLike = Union[Direction, PortPair]


def opposite(direction: DirectionLike) -> DirectionLike:
    """Direction of the return trip through the same element."""
    if isinstance(direction, Direction):
        return direction.opposite()
    a, b = direction
    return (b, a)


def parse_direction(text: str) -> DirectionLike:
    """``"forward"``, ``"reverse"`` or a circulator hop like ``"1->2"``."""
    t = str(text).strip().lower()
    if t in ("forward", "reverse"):
        return Direction(t)
    if "->" in t:
        a, _, b = t.partition("->")
        try:
            pair = (int(a), int(b))
        except ValueError:
            raise InvalidDirection(f"bad port pair {text!r}") from None
        _check_pair(pair)
        return pair
    raise InvalidDirection(f"unknown direction {text!r}")


def format_direction(direction: DirectionLike) -> str:
    if isinstance(direction, Direction):
        return direction.value
    return f"{direction[0]}->{direction[1]}"


def _check_pair(pair: PortPair) -> None:
    a, b = pair
    if a not in (1, 2, 3) or b not in (1, 2, 3) or a == b:
        raise InvalidDirection(f"invalid circulator port pair {a}->{b}")


def _passive(curve: SpectralCurve, what: str) -> SpectralCurve:
    if not curve.passive:
        curve = SpectralCurve(curve.wavelengths_nm, curve.values_db,
                              label=curve.label or what, passive=True)
    return curve


def _nonpositive(value: float, what: str) -> float:
    value = float(value)
    if not value <= 0:
        raise ValueError(f"{what} must be <= 0 dB, got {value:g}")
    return value


# --- component kinds ----------------------------------------------------------
#
# Every kind carries an optional back-reflection curve.  Connectors use their
# own ``reflectivity_db`` instead.

@dataclass(frozen=True)
class Isolator:
    forward: SpectralCurve
    reverse: SpectralCurve
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        object.__setattr__(self, "forward", _passive(self.forward, "isolator forward"))
        object.__setattr__(self, "reverse", _passive(self.reverse, "isolator reverse"))


@dataclass(frozen=True)
class Circulator:
    transmissions: Mapping[PortPair, SpectralCurve]
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        checked = {}
        for pair, curve in dict(self.transmissions).items():
            pair = tuple(pair)
            _check_pair(pair)
            checked[pair] = _passive(curve, f"circulator {pair[0]}->{pair[1]}")
        object.__setattr__(self, "transmissions", checked)


@dataclass(frozen=True)
class Connector:
    reflectivity_db: Union[float, SpectralCurve] = FRESNEL_OPEN_DB
    insertion_db: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.reflectivity_db, SpectralCurve):
            object.__setattr__(self, "reflectivity_db",
                               _passive(self.reflectivity_db, "connector reflectivity"))
        else:
            object.__setattr__(self, "reflectivity_db",
                               _nonpositive(self.reflectivity_db, "connector reflectivity"))
        if self.insertion_db is not None:
            object.__setattr__(self, "insertion_db",
                               _nonpositive(self.insertion_db, "connector insertion loss"))

    @property
    def effective_insertion_db(self) -> float:
        if self.insertion_db is None:
            warnings.warn(DefaultedValueWarning(
                f"connector insertion loss defaulted to {DEFAULT_CONNECTOR_INSERTION_DB} dB"),
                stacklevel=3)
            return DEFAULT_CONNECTOR_INSERTION_DB
        return self.insertion_db


@dataclass(frozen=True)
class Coupler:
    tap_ratio_db: float
    through_ratio_db: float
    excess_loss_db: float = 0.0
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        for name in ("tap_ratio_db", "through_ratio_db", "excess_loss_db"):
            object.__setattr__(self, name, _nonpositive(getattr(self, name), f"coupler {name}"))
        total = 10 ** (self.tap_ratio_db / 10) + 10 ** (self.through_ratio_db / 10)
        if total > 1 + 1e-12:
            raise ValueError(f"coupler split ratios sum to {total:.6g} > 1")

    @property
    def through_db(self) -> float:
        return self.through_ratio_db + self.excess_loss_db

    @property
    def tap_db(self) -> float:
        return self.tap_ratio_db + self.excess_loss_db


@dataclass(frozen=True)
class Filter:
    """Rectangular band-pass: passband loss within ``center ± fwhm/2``, suppression elsewhere."""

    center_nm: float
    passband_fwhm_nm: float
    passband_loss_db: float
    stopband_suppression_db: float
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        _nonpositive(self.passband_loss_db, "filter passband loss")
        _nonpositive(self.stopband_suppression_db, "filter stopband suppression")
        if self.passband_fwhm_nm <= 0:
            raise ValueError("filter passband width must be positive")
        if self.stopband_suppression_db > self.passband_loss_db:
            raise ValueError("stopband suppression must not exceed passband loss")


@dataclass(frozen=True)
class FiberSegment:
    attenuation_db_per_km: SpectralCurve
    length_km: float
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        if self.length_km < 0:
            raise ValueError("fiber length must be >= 0")
        object.__setattr__(self, "attenuation_db_per_km",
                           _passive(self.attenuation_db_per_km, "fiber attenuation"))


@dataclass(frozen=True)
class GenericLoss:
    loss: SpectralCurve
    reflection: Optional[SpectralCurve] = None

    def __post_init__(self):
        object.__setattr__(self, "loss", _passive(self.loss, "generic loss"))


Component = Union[Isolator, Circulator, Connector, Coupler, Filter, FiberSegment, GenericLoss]

KINDS = {
    "isolator": Isolator,
    "circulator": Circulator,
    "connector": Connector,
    "coupler": Coupler,
    "filter": Filter,
    "fiber": FiberSegment,
    "generic_loss": GenericLoss,
}


def kind_of(comp: Component) -> str:
    for name, cls in KINDS.items():
        if isinstance(comp, cls):
            return name
    raise TypeError(f"not a component: {comp!r}")


# --- queries --------------------------------------------------------------------

def _value(curve_or_value, lambda_nm: float, clamp: bool) -> float:
    if isinstance(curve_or_value, SpectralCurve):
        return interpolate_db(curve_or_value, lambda_nm, clamp=clamp)
    return float(curve_or_value)


def transmittance(comp: Component, direction: DirectionLike, lambda_nm: float,
                  clamp: bool = False) -> float:
    """Transmission in dB through ``comp`` travelling in ``direction``.

    Reciprocal kinds (connector, coupler main arm, filter, fiber, generic loss)
    accept either two-port direction and return the same value.
    """
    if isinstance(comp, Circulator):
        if isinstance(direction, Direction):
            raise InvalidDirection("circulator needs a port pair direction, e.g. 1->2")
        pair = tuple(direction)
        _check_pair(pair)
        if pair not in comp.transmissions:
            raise InvalidDirection(f"circulator has no transmission curve for {pair[0]}->{pair[1]}")
        return interpolate_db(comp.transmissions[pair], lambda_nm, clamp=clamp)
    if not isinstance(direction, Direction):
        raise InvalidDirection(f"{kind_of(comp)} takes forward/reverse, not a port pair")
    if isinstance(comp, Isolator):
        curve = comp.forward if direction is Direction.FORWARD else comp.reverse
        return interpolate_db(curve, lambda_nm, clamp=clamp)
    if isinstance(comp, Connector):
        return comp.effective_insertion_db
    if isinstance(comp, Coupler):
        return comp.through_db
    if isinstance(comp, Filter):
        if abs(float(lambda_nm) - comp.center_nm) <= comp.passband_fwhm_nm / 2:
            return float(comp.passband_loss_db)
        return float(comp.stopband_suppression_db)
    if isinstance(comp, FiberSegment):
        return interpolate_db(comp.attenuation_db_per_km, lambda_nm, clamp=clamp) * comp.length_km
    if isinstance(comp, GenericLoss):
        return interpolate_db(comp.loss, lambda_nm, clamp=clamp)
    raise TypeError(f"not a component: {comp!r}")


def reflectivity(comp: Component, lambda_nm: float, clamp: bool = False) -> float:
    """Back-reflection in dB, or ``-inf`` when the component has none configured."""
    if isinstance(comp, Connector):
        return _value(comp.reflectivity_db, lambda_nm, clamp)
    if comp.reflection is None:
        return NO_REFLECTION
    return interpolate_db(comp.reflection, lambda_nm, clamp=clamp)


# --- datasheet checks -------------------------------------------------------------

@dataclass(frozen=True)
class DatasheetClaim:
    design_lambda_nm: float
    min_isolation_db: float = 0.0
    max_insertion_db: float = math.inf
    min_return_loss_db: float = 0.0

    def __post_init__(self):
        if self.design_lambda_nm <= 0:
            raise ValueError("design wavelength must be positive")
        for name in ("min_isolation_db", "max_insertion_db", "min_return_loss_db"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} is a magnitude and must be >= 0")


@dataclass(frozen=True)
class Violation:
    quantity: str
    claimed_db: float
    measured_db: float
    detail: str = ""

    def __str__(self) -> str:
        extra = f" ({self.detail})" if self.detail else ""
        return (f"{self.quantity}: claimed {self.claimed_db:g} dB, "
                f"measured {self.measured_db:.3g} dB{extra}")


def _forward_and_reverse(comp: Component) -> tuple[list[tuple[str, DirectionLike]], list[tuple[str, DirectionLike]]]:
    if isinstance(comp, Circulator):
        fwd = [(f"{a}->{b}", (a, b)) for (a, b) in ((1, 2), (2, 3)) if (a, b) in comp.transmissions]
        rev = [(f"{a}->{b}", (a, b)) for (a, b) in ((2, 1), (3, 2)) if (a, b) in comp.transmissions]
        return fwd, rev
    if isinstance(comp, Isolator):
        return [("forward", Direction.FORWARD)], [("reverse", Direction.REVERSE)]
    return [("forward", Direction.FORWARD)], []


def validate_against_datasheet(comp: Component, claim: DatasheetClaim) -> list[Violation]:
    """Compare measured curves against datasheet magnitudes at the design wavelength.

    Isolation applies to the blocking directions (isolator reverse, circulator
    2->1 and 3->2), insertion loss to the favoured ones.  Return loss is only
    checked where a reflection is configured.
    """
    lam = claim.design_lambda_nm
    fwd, rev = _forward_and_reverse(comp)
    out: list[Violation] = []
    for name, d in rev:
        measured = transmittance(comp, d, lam)
        if abs(measured) < claim.min_isolation_db:
            out.append(Violation("isolation", claim.min_isolation_db, abs(measured), f"{name} at {lam:g} nm"))
    for name, d in fwd:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DefaultedValueWarning)
            measured = transmittance(comp, d, lam)
        if abs(measured) > claim.max_insertion_db:
            out.append(Violation("insertion loss", claim.max_insertion_db, abs(measured), f"{name} at {lam:g} nm"))
    r = reflectivity(comp, lam)
    if math.isfinite(r) and abs(r) < claim.min_return_loss_db:
        out.append(Violation("return loss", claim.min_return_loss_db, abs(r), f"at {lam:g} nm"))
    return out
