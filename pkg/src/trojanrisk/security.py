"""Protocol-level breach verdict for an attack observed through QBER and y statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidObservation

DEFAULT_Q_ABORT = 0.11


@dataclass(frozen=True)
class ProtocolParams:
    q0: float = 0.01
    y0: float = 0.70
    q_abort: float = DEFAULT_Q_ABORT
    delta_y_max: float = 0.15

    def __post_init__(self):
        if not 0 <= self.q0 < self.q_abort < 0.5:
            raise InvalidObservation(
                f"need 0 <= q0 < q_abort < 0.5, got q0={self.q0:g}, q_abort={self.q_abort:g}")
        if not 0 < self.y0 <= 1:
            raise InvalidObservation(f"y0 must lie in (0, 1], got {self.y0:g}")
        if not self.delta_y_max > 0:
            raise InvalidObservation(f"delta_y_max must be > 0, got {self.delta_y_max:g}")


@dataclass(frozen=True)
class AttackObservation:
    q1: float
    y1: float
    eve_knowledge_fraction: float
    pa_subtraction_fraction: float

    def __post_init__(self):
        if not 0 <= self.q1 < 0.5:
            raise InvalidObservation(f"q1 must lie in [0, 0.5), got {self.q1:g}")
        if not self.y1 >= 0:
            raise InvalidObservation(f"y1 must be >= 0, got {self.y1:g}")
        for name in ("eve_knowledge_fraction", "pa_subtraction_fraction"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise InvalidObservation(f"{name} must lie in [0, 1], got {v:g}")


@dataclass(frozen=True)
class BreachVerdict:
    undetected: bool
    pa_defeated: bool
    breach: bool
    delta_y: float
    qber_margin: float  # q_abort - q1
    delta_y_margin: float  # delta_y_max - delta_y
    pa_margin: float  # eve knowledge - PA subtraction

    @property
    def margins(self) -> dict[str, float]:
        return {"qber": self.qber_margin, "delta_y": self.delta_y_margin, "pa": self.pa_margin}


def delta_y(y0: float, y1: float) -> float:
    if not y0 > 0:
        raise InvalidObservation("y0 must be > 0")
    return abs(y1 / y0 - 1.0)


def breach_verdict(params: ProtocolParams, obs: AttackObservation) -> BreachVerdict:
    """Does the attack stay below both alarms and leave Eve more than PA removes?

    All comparisons are strict, so a tie counts as detected / not defeated.
    """
    dy = delta_y(params.y0, obs.y1)
    undetected = obs.q1 < params.q_abort and dy < params.delta_y_max
    pa_defeated = obs.eve_knowledge_fraction > obs.pa_subtraction_fraction
    return BreachVerdict(
        undetected=undetected,
        pa_defeated=pa_defeated,
        breach=undetected and pa_defeated,
        delta_y=dy,
        qber_margin=params.q_abort - obs.q1,
        delta_y_margin=params.delta_y_max - dy,
        pa_margin=obs.eve_knowledge_fraction - obs.pa_subtraction_fraction,
    )


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bb84_asymptotic_secret_fraction(q: float) -> float:
    """``1 - 2 h2(q)``: asymptotic one-way BB84 key fraction for QBER ``q``.

    A textbook figure for orientation only; it is not the privacy
    amplification quantity of any particular finite-size or multi-pair proof.
    """
    return 1.0 - 2.0 * binary_entropy(q)


def bb84_asymptotic_pa_fraction(q: float) -> float:
    """``h2(q)``: the privacy-amplification share in the same asymptotic BB84 picture."""
    return binary_entropy(q)
