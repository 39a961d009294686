"""Synthesized spectral fixtures and example system configs.

The shipped curves are not measurements.  Each is a monotone cubic (PCHIP)
through a short list of anchor points, sampled on a 5 nm grid.  Anchors are
tagged ``quoted`` when they reproduce a published number and ``assumed``
when they only fix the shape between quoted values.  PCHIP cannot overshoot
its anchors, so passive curves stay at or below 0 dB.

Regenerate the package data with::

    python -m trojanrisk.fixtures [OUTDIR]
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .spectral import SpectralCurve, emit_csv, normalize_to_reference

DATA_DIR = Path(__file__).parent / "data"
GRID_STEP_NM = 5.0

Q, A = "quoted", "assumed"


@dataclass(frozen=True)
class FixtureCurve:
    name: str
    description: str
    lo_nm: float
    hi_nm: float
    anchors: tuple[tuple[float, float, str], ...]
    passive: bool = True

    def curve(self) -> SpectralCurve:
        x = np.array([a[0] for a in self.anchors])
        y = np.array([a[1] for a in self.anchors])
        grid = np.arange(self.lo_nm, self.hi_nm + GRID_STEP_NM / 2, GRID_STEP_NM)
        values = PchipInterpolator(x, y, extrapolate=False)(grid)
        # snap to the anchors so they hold exactly at grid points
        for ax, ay, _ in self.anchors:
            values[np.isclose(grid, ax)] = ay
        return SpectralCurve(grid, values, label=self.name, passive=self.passive)

    def comments(self) -> list[str]:
        lines = [
            f"{self.name}: {self.description}",
            "synthesized fixture, not a measurement: monotone cubic (PCHIP) through the anchors below, "
            f"sampled every {GRID_STEP_NM:g} nm",
        ]
        lines += [f"anchor {x:g} nm = {y:g} ({tag})" for x, y, tag in self.anchors]
        return lines


ISO1_FORWARD = FixtureCurve(
    "iso1_forward", "isolator 1, forward transmittance (dB)", 1000, 1800,
    ((1000, -4.0, A), (1100, -2.5, A), (1200, -1.6, A), (1300, -1.0, A), (1400, -0.6, A),
     (1550, -0.5, Q), (1700, -0.6, A), (1800, -0.9, A)))
ISO1_REVERSE = FixtureCurve(
    "iso1_reverse", "isolator 1, reverse transmittance (dB)", 1000, 1800,
    ((1000, -30.0, A), (1100, -25.0, A), (1200, -21.0, A), (1300, -19.0, A), (1350, -19.8, A),
     (1400, -23.0, A), (1450, -29.0, A), (1500, -38.0, A), (1530, -46.0, A), (1550, -50.0, Q),
     (1570, -46.0, A), (1600, -39.0, A), (1650, -33.0, A), (1700, -31.0, A), (1750, -30.0, A),
     (1800, -30.0, A)))
ISO2_FORWARD = FixtureCurve(
    "iso2_forward", "isolator 2, forward transmittance (dB); shape away from 1550 nm assumed",
    1000, 1800,
    ((1000, -5.0, A), (1100, -3.0, A), (1200, -1.8, A), (1300, -1.1, A), (1400, -0.6, A),
     (1550, -0.5, Q), (1700, -0.6, A), (1800, -0.9, A)))
ISO2_REVERSE = FixtureCurve(
    "iso2_reverse", "isolator 2, reverse transmittance (dB); only the 1550 nm double pass is quoted",
    1000, 1800,
    ((1000, -28.0, A), (1100, -24.0, A), (1200, -22.0, A), (1300, -21.0, A), (1400, -25.0, A),
     (1450, -30.0, A), (1500, -37.0, A), (1530, -42.0, A), (1550, -44.5, Q), (1570, -41.0, A),
     (1600, -36.0, A), (1700, -30.0, A), (1800, -28.0, A)))
ISO3_FORWARD = FixtureCurve(
    "iso3_forward", "isolator 3, forward transmittance (dB)", 1000, 1800,
    ((1000, -12.0, A), (1100, -10.0, A), (1200, -9.0, A), (1300, -8.0, A), (1350, -4.0, A),
     (1400, -0.6, A), (1550, -0.5, Q), (1700, -0.7, A), (1800, -1.0, A)))
ISO3_REVERSE = FixtureCurve(
    "iso3_reverse", "isolator 3, reverse transmittance (dB)", 1000, 1800,
    ((1000, -30.0, A), (1100, -27.0, A), (1200, -24.0, A), (1300, -20.0, A), (1350, -16.0, A),
     (1400, -14.4, Q), (1450, -20.0, A), (1500, -28.0, A), (1550, -35.0, Q), (1600, -30.0, A),
     (1700, -26.0, A), (1800, -25.0, A)))

CIRC_1_2 = FixtureCurve(
    "circ_1to2", "circulator port 1 -> 2 (dB)", 1000, 1800,
    ((1000, -6.0, A), (1100, -4.5, A), (1200, -3.5, A), (1300, -3.0, Q), (1400, -2.3, A),
     (1550, -2.0, Q), (1650, -2.0, A), (1750, -2.1, A), (1800, -2.4, A)))
CIRC_2_3 = FixtureCurve(
    "circ_2to3", "circulator port 2 -> 3 (dB)", 1000, 1800,
    ((1000, -7.0, A), (1100, -5.4, A), (1200, -4.3, A), (1300, -3.8, A), (1400, -3.1, A),
     (1550, -2.8, Q), (1650, -2.8, A), (1750, -2.9, A), (1800, -3.2, A)))
CIRC_2_1 = FixtureCurve(
    "circ_2to1", "circulator port 2 -> 1, isolation direction (dB)", 1000, 1800,
    ((1000, -36.0, A), (1100, -31.0, A), (1200, -26.0, A), (1300, -22.0, Q), (1350, -24.0, A),
     (1400, -30.0, A), (1450, -36.0, A), (1500, -45.0, A), (1550, -55.0, A), (1600, -50.0, A),
     (1650, -42.0, A), (1700, -36.0, A), (1750, -34.0, A), (1800, -34.0, A)))
CIRC_3_2 = FixtureCurve(
    "circ_3to2", "circulator port 3 -> 2, isolation direction (dB)", 1000, 1800,
    ((1000, -37.0, A), (1100, -32.0, A), (1200, -27.0, A), (1300, -24.0, A), (1350, -25.0, A),
     (1400, -31.0, A), (1450, -37.0, A), (1500, -46.0, A), (1550, -52.0, A), (1600, -49.0, A),
     (1650, -42.0, A), (1700, -37.0, A), (1750, -35.0, A), (1800, -35.0, A)))
CIRC_1_3 = FixtureCurve(
    "circ_1to3", "circulator port 1 -> 3, nominally blocked (dB)", 1000, 1800,
    ((1000, -62.0, A), (1200, -60.0, A), (1400, -55.0, A), (1450, -45.0, A), (1500, -41.0, A),
     (1550, -40.0, Q), (1650, -40.0, Q), (1700, -42.0, A), (1750, -50.0, A), (1800, -56.0, A)))
CIRC_3_1 = FixtureCurve(
    "circ_3to1", "circulator port 3 -> 1, nominally blocked (dB)", 1000, 1800,
    ((1000, -63.0, A), (1200, -61.0, A), (1400, -56.0, A), (1450, -46.0, A), (1500, -42.0, A),
     (1550, -41.0, A), (1650, -41.0, A), (1700, -43.0, A), (1750, -51.0, A), (1800, -57.0, A)))

SMF_ATTENUATION = FixtureCurve(
    "smf_attenuation", "single-mode fiber attenuation (dB/km, as a negative number)", 1000, 1800,
    ((1000, -1.5, A), (1100, -0.8, A), (1200, -0.5, A), (1310, -0.35, A), (1385, -1.0, A),
     (1450, -0.25, A), (1550, -0.2, A), (1625, -0.22, A), (1700, -0.35, A), (1800, -0.8, A)))
ALICE_INTERNAL = FixtureCurve(
    "alice_internal", "Alice, one-way loss from isolator to the open coupler port (dB)", 1000, 1800,
    ((1000, -12.0, A), (1100, -10.0, A), (1300, -8.5, A), (1550, -8.0, A), (1700, -9.0, A),
     (1800, -10.0, A)))
BOB_BS_ASSEMBLY = FixtureCurve(
    "bob_bs_assembly", "Bob, polarizing/50-50 beamsplitter assembly one-way loss (dB)", 1000, 1800,
    ((1000, -8.0, A), (1100, -7.0, A), (1150, -7.5, A), (1170, -12.0, A), (1190, -7.5, A),
     (1250, -6.8, A), (1400, -6.4, A), (1550, -6.2, A), (1650, -6.3, A), (1700, -6.5, A),
     (1800, -7.0, A)))
BOB_PM = FixtureCurve(
    "bob_pm", "Bob, phase modulator one-way loss (dB)", 1000, 1800,
    ((1000, -9.0, A), (1100, -7.0, A), (1300, -5.0, A), (1550, -4.2, A), (1650, -4.8, A),
     (1700, -5.5, A), (1800, -6.5, A)))

SPAD_EFFICIENCY = FixtureCurve(
    "spad_efficiency_log10", "gated InGaAs SPAD, log10 of detection efficiency", 900, 2000,
    ((900, -2.0, A), (950, -1.4, A), (1000, -1.15, A), (1100, -1.0, A), (1310, -0.9, A),
     (1450, -0.95, A), (1550, -1.0, Q), (1600, -1.3, A), (1650, -2.2, A), (1700, -4.0, A),
     (1720, -4.30103, Q), (1750, -4.6, A), (1800, -5.0, A), (1900, -5.6, A), (2000, -6.0, A)))
MONITOR_RESPONSIVITY = FixtureCurve(
    "monitor_responsivity_log10", "InGaAs PIN monitor photodiode, log10 of responsivity in A/W",
    800, 2000,
    ((800, -1.5, A), (900, -0.5, A), (1000, -0.3, A), (1310, -0.05, A), (1550, -0.02, A),
     (1650, -0.1, A), (1700, -0.7, A), (1750, -2.0, A), (1800, -4.0, A), (1900, -6.0, A),
     (2000, -7.0, A)))
SUPERCONTINUUM = FixtureCurve(
    "supercontinuum", "supercontinuum source as seen by the OSA (absolute, dBm per bin)", 1000, 1750,
    ((1000, -30.0, A), (1060, -18.0, A), (1100, -24.0, A), (1200, -22.0, A), (1300, -21.0, A),
     (1380, -23.0, A), (1400, -27.0, A), (1420, -23.0, A), (1500, -22.0, A), (1550, -22.0, A),
     (1650, -25.0, A), (1700, -30.0, A), (1750, -38.0, A)),
    passive=False)

CURVES = (ISO1_FORWARD, ISO1_REVERSE, ISO2_FORWARD, ISO2_REVERSE, ISO3_FORWARD, ISO3_REVERSE,
          CIRC_1_2, CIRC_2_3, CIRC_2_1, CIRC_3_2, CIRC_1_3, CIRC_3_1, SMF_ATTENUATION,
          ALICE_INTERNAL, BOB_BS_ASSEMBLY, BOB_PM, SPAD_EFFICIENCY, MONITOR_RESPONSIVITY)


def raw_iso1_reverse() -> SpectralCurve:
    """What the OSA would record through iso1 reverse: device plus source, on the source grid."""
    sc = SUPERCONTINUUM.curve()
    iso = ISO1_REVERSE.curve()
    values = sc.values_db + np.interp(sc.wavelengths_nm, iso.wavelengths_nm, iso.values_db)
    return SpectralCurve(sc.wavelengths_nm, values, label="raw_iso1_reverse")


# --- system configs -----------------------------------------------------------

def _iso(cid: str, n: int, isolation: float = 40.0, insertion: float = 1.0) -> dict:
    return {"id": cid, "kind": "isolator", "forward": f"iso{n}_forward.csv",
            "reverse": f"iso{n}_reverse.csv",
            "datasheet": {"design_lambda_nm": 1550, "min_isolation_db": isolation,
                          "max_insertion_db": insertion, "min_return_loss_db": 55}}


CIRCULATOR = {
    "id": "circ", "kind": "circulator",
    "transmissions": {"1->2": "circ_1to2.csv", "2->3": "circ_2to3.csv", "2->1": "circ_2to1.csv",
                      "3->2": "circ_3to2.csv", "1->3": "circ_1to3.csv", "3->1": "circ_3to1.csv"},
    "datasheet": {"design_lambda_nm": 1550, "min_isolation_db": 40, "max_insertion_db": 1.1,
                  "min_return_loss_db": 60},
}

ALICE_TOY = {
    "name": "alice_toy",
    "components": [
        {"id": "internal", "kind": "generic_loss", "loss": -23.0},
        {"id": "open_port", "kind": "connector", "reflectivity_db": -14.0, "insertion_db": 0.0},
    ],
    "path": [{"id": "internal", "direction": "forward"}, {"id": "open_port", "direction": "forward"}],
    "reflection_site": 1,
    "damage_threshold_photons": 1e13,
    "attack": {"target_mu": 4},
}

ALICE_TOY_ISOLATED = {
    "name": "alice_toy_isolated",
    "components": [
        {"id": "iso", "kind": "isolator", "forward": 0.0, "reverse": -50.0},
        {"id": "internal", "kind": "generic_loss", "loss": -23.0},
        {"id": "open_port", "kind": "connector", "reflectivity_db": -14.0, "insertion_db": 0.0},
    ],
    "path": [{"id": "iso", "direction": "forward"}, {"id": "internal", "direction": "forward"},
             {"id": "open_port", "direction": "forward"}],
    "reflection_site": 2,
    "damage_threshold_photons": 1e13,
    "attack": {"target_mu": 4},
}

_ALICE_ISO1_COMPONENTS = [
    {"id": "entrance", "kind": "connector", "reflectivity_db": -45.0, "insertion_db": -0.3},
    _iso("iso1", 1),
    {"id": "patch", "kind": "fiber", "attenuation_db_per_km": "smf_attenuation.csv", "length_km": 0.01},
    {"id": "internal", "kind": "generic_loss", "loss": "alice_internal.csv"},
    {"id": "open_port", "kind": "connector", "reflectivity_db": -14.0, "insertion_db": -0.3},
]

ALICE_ISO1 = {
    "name": "alice_iso1",
    "curves_dir": "../curves",
    "components": _ALICE_ISO1_COMPONENTS,
    "path": [{"id": c["id"], "direction": "forward"} for c in _ALICE_ISO1_COMPONENTS],
    "reflection_site": 4,
    "damage_threshold_photons": 1e13,
    "attack": {"target_mu": 4, "width_s": 1e-9, "rep_rate_hz": 1e6},
}

_FBG = {"id": "fbg", "kind": "filter", "center_nm": 1550, "passband_fwhm_nm": 4,
        "passband_loss_db": -1.0, "stopband_suppression_db": -60.0}
ALICE_ISO1_FILTERED = dict(
    ALICE_ISO1, name="alice_iso1_filtered",
    components=_ALICE_ISO1_COMPONENTS[:2] + [_FBG] + _ALICE_ISO1_COMPONENTS[2:],
    path=[{"id": c["id"], "direction": "forward"}
          for c in _ALICE_ISO1_COMPONENTS[:2] + [_FBG] + _ALICE_ISO1_COMPONENTS[2:]],
    reflection_site=5,
)

# 90 % of the incoming light goes to the monitor, as in a watchdog tap
_TAP = {"id": "monitor_tap", "kind": "coupler", "tap_ratio_db": -0.46, "through_ratio_db": -10.0,
        "excess_loss_db": -0.1}
ALICE_ISO1_MONITORED = dict(
    ALICE_ISO1, name="alice_iso1_monitored",
    components=_ALICE_ISO1_COMPONENTS[:2] + [_TAP] + _ALICE_ISO1_COMPONENTS[2:],
    path=[{"id": c["id"], "direction": "forward"}
          for c in _ALICE_ISO1_COMPONENTS[:2] + [_TAP] + _ALICE_ISO1_COMPONENTS[2:]],
    reflection_site=5,
    monitoring={"detector": {"responsivity_log10": "monitor_responsivity_log10.csv",
                             "dark_current_a": 1e-8, "alarm_factor": 1.0},
                "tap": 2},
)

_BOB_COMPONENTS = [
    {"id": "entrance", "kind": "connector", "reflectivity_db": -44.0, "insertion_db": -0.3},
    {"id": "patch", "kind": "fiber", "attenuation_db_per_km": "smf_attenuation.csv", "length_km": 0.005},
    {"id": "bs_assembly", "kind": "generic_loss", "loss": "bob_bs_assembly.csv"},
    {"id": "pm_in", "kind": "connector", "reflectivity_db": -40.0, "insertion_db": -0.3},
    {"id": "pm", "kind": "generic_loss", "loss": "bob_pm.csv"},
    {"id": "port6", "kind": "connector", "reflectivity_db": -35.0, "insertion_db": -0.3},
]
BOB = {
    "name": "bob",
    "curves_dir": "../curves",
    "components": _BOB_COMPONENTS,
    "path": [{"id": c["id"], "direction": "forward"} for c in _BOB_COMPONENTS],
    "reflection_site": 5,
    "spads": [
        {"efficiency_log10": "spad_efficiency_log10.csv", "dark_count_prob": 1e-5,
         "gate_fwhm_s": 2.5e-9, "gate_rate_hz": 1e6, "afterpulse_amplitude": 0.02,
         "trap_decay_s": 1e-5, "tap": 1, "branch_loss_db": -24.7},
    ],
    "damage_threshold_photons": 1e13,
    "signal_click_prob": 1e-3,
    "protocol": {"q0": 0.01, "y0": 0.70, "q_abort": 0.11, "delta_y_max": 0.15},
    "attack": {"target_mu": 3, "width_s": 1e-9, "rep_rate_hz": 1e3},
}
BOB_PORT6_OPEN = dict(
    BOB, name="bob_port6_open",
    components=_BOB_COMPONENTS[:-1] + [dict(_BOB_COMPONENTS[-1], reflectivity_db=-14.0)],
)

SYSTEMS = {
    "alice_toy": ALICE_TOY,
    "alice_toy_isolated": ALICE_TOY_ISOLATED,
    "alice_iso1": ALICE_ISO1,
    "alice_iso1_filtered": ALICE_ISO1_FILTERED,
    "alice_iso1_monitored": ALICE_ISO1_MONITORED,
    "components": {
        "name": "components",
        "curves_dir": "../curves",
        "components": [_iso("iso1", 1), _iso("iso2", 2), _iso("iso3", 3), CIRCULATOR],
        "path": [{"id": "iso1", "direction": "forward"}],
        "reflection_site": 0,
    },
    "bob": BOB,
    "bob_port6_open": BOB_PORT6_OPEN,
}


def build(outdir: Path | str = DATA_DIR) -> None:
    outdir = Path(outdir)
    (outdir / "curves").mkdir(parents=True, exist_ok=True)
    (outdir / "systems").mkdir(parents=True, exist_ok=True)
    (outdir / "raw").mkdir(parents=True, exist_ok=True)
    for fx in CURVES:
        (outdir / "curves" / f"{fx.name}.csv").write_text(emit_csv(fx.curve(), fx.comments()), encoding="utf-8")
    raw = raw_iso1_reverse()
    (outdir / "raw" / "raw_iso1_reverse.csv").write_text(emit_csv(raw, [
        "raw_iso1_reverse: iso1_reverse fixture plus supercontinuum fixture (synthesized OSA trace)"]),
        encoding="utf-8")
    (outdir / "raw" / "supercontinuum.csv").write_text(
        emit_csv(SUPERCONTINUUM.curve(), SUPERCONTINUUM.comments()), encoding="utf-8")
    golden = normalize_to_reference(raw, SUPERCONTINUUM.curve())
    (outdir / "raw" / "iso1_reverse_normalized.golden.csv").write_text(emit_csv(golden), encoding="utf-8")
    for name, doc in SYSTEMS.items():
        (outdir / "systems" / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def curve_path(name: str) -> Path:
    return DATA_DIR / "curves" / f"{name}.csv"


def system_path(name: str) -> Path:
    return DATA_DIR / "systems" / f"{name}.json"


if __name__ == "__main__":
    build(sys.argv[1] if len(sys.argv) > 1 else DATA_DIR)
