"""Text reports and plot-ready CSV tables for the command-line front end."""
from __future__ import annotations

import csv
import io
import warnings
from collections import OrderedDict
from typing import Iterable, Sequence

from .attack import ScanEntry
from .components import DefaultedValueWarning, format_direction, kind_of
from .security import BreachVerdict
from .spectral import ClampWarning, linear_to_db

SCAN_COLUMNS = (
    "rank", "lambda_nm", "path_attenuation_db", "required_photons", "required_peak_power_w",
    "mu_eve", "monitoring_alarm", "monitor_photocurrent_a", "spad_click_prob",
    "afterpulse_elevation", "projected_qber", "exceeds_damage", "discrimination_success", "feasible",
)


def _num(x: float) -> str:
    return repr(float(x))


def scan_csv(entries: Sequence[ScanEntry]) -> str:
    """One row per wavelength: ranked feasible points first, then infeasible ones by wavelength."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for e in entries:
        o = e.outcome
        w.writerow([
            "" if e.rank is None else e.rank, _num(o.lambda_nm), _num(o.path_attenuation_db),
            _num(o.required_input_photons), _num(o.required_peak_power_w), _num(o.mu_eve),
            int(o.monitoring_alarm), _num(o.monitor_photocurrent_a), _num(o.spad_click_prob),
            _num(o.afterpulse_elevation), _num(o.projected_qber), int(o.exceeds_damage),
            _num(o.discrimination_success), int(o.feasible),
        ])
    return buf.getvalue()


def summarize_warnings(records: Iterable[warnings.WarningMessage]) -> list[str]:
    """Collapse recorded warnings into report lines; clamping is grouped per curve."""
    clamps: "OrderedDict[tuple, list[float]]" = OrderedDict()
    other: "OrderedDict[str, None]" = OrderedDict()
    for r in records:
        msg = r.message
        if isinstance(msg, ClampWarning):
            clamps.setdefault((msg.label, msg.lo, msg.hi), []).append(msg.lambda_nm)
        elif isinstance(msg, (DefaultedValueWarning, UserWarning)):
            other.setdefault(str(msg), None)
    lines = []
    for (label, lo, hi), lams in clamps.items():
        uniq = sorted(set(lams))
        lines.append(
            f"clamped {len(uniq)} wavelength(s) on curve {label or '<unnamed>'!r} "
            f"(grid [{lo:g}, {hi:g}] nm): {uniq[0]:g}..{uniq[-1]:g} nm")
    lines.extend(other)
    return lines


def _fmt_table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip() for r in rows]


def scan_report(entries: Sequence[ScanEntry], *, command: str, config_path: str, digest: str,
                system, attack: dict, grid: Sequence[float], warning_lines: Sequence[str],
                violations: Sequence[str] = (), timestamp: str | None = None) -> str:
    out = ["trojanrisk scan report", f"command: {command}", f"config: {config_path}",
           f"config sha256: {digest}"]
    if timestamp:
        out.append(f"generated: {timestamp}")
    out.append(f"system: {system.name}")
    for i, e in enumerate(system.path):
        mark = "  <- reflection site" if i == system.reflection_site else ""
        out.append(f"  [{i}] {e.id} ({kind_of(e.component)}, {format_direction(e.direction)}){mark}")
    out.append("attack: " + ", ".join(f"{k}={v:g}" for k, v in attack.items()))
    out.append(f"grid: {len(grid)} wavelength(s), {min(grid):g}..{max(grid):g} nm")
    out.append("")

    feasible = [e for e in entries if e.rank is not None]
    out.append(f"feasible wavelengths: {len(feasible)} of {len(entries)}")
    if feasible:
        best = feasible[0].outcome
        out.append(
            f"best feasible wavelength: {best.lambda_nm:g} nm "
            f"(path {best.path_attenuation_db:.2f} dB, {best.required_input_photons:.3g} photons, "
            f"peak {best.required_peak_power_w:.3g} W)")
        ref = next((e.outcome for e in entries if e.lambda_nm == 1550.0), None)
        if ref is not None and best.lambda_nm != 1550.0:
            gain = linear_to_db(ref.required_input_photons / best.required_input_photons)
            out.append(f"photon-budget advantage over 1550 nm: {gain:.1f} dB")
    else:
        out.append("best feasible wavelength: none")
    out.append("")

    rows = [["rank", "lambda_nm", "atten_db", "req_photons", "req_peak_W", "alarm",
             "afterpulse", "qber", "damage", "feasible"]]
    for e in entries:
        o = e.outcome
        rows.append([
            "-" if e.rank is None else str(e.rank), f"{o.lambda_nm:g}", f"{o.path_attenuation_db:.2f}",
            f"{o.required_input_photons:.3e}", f"{o.required_peak_power_w:.3e}",
            "yes" if o.monitoring_alarm else "no", f"{o.afterpulse_elevation:.3e}",
            f"{o.projected_qber:.4f}", "yes" if o.exceeds_damage else "no",
            "yes" if o.feasible else "no",
        ])
    out.extend(_fmt_table(rows))
    out.append("")
    notes = list(warning_lines) + [f"datasheet violation: {v}" for v in violations]
    out.append("warnings:" if notes else "warnings: none")
    out.extend(f"  - {n}" for n in notes)
    return "\n".join(out) + "\n"


def verdict_report(v: BreachVerdict, params, obs) -> str:
    lines = [
        f"breach: {'YES' if v.breach else 'no'}",
        f"undetected: {'yes' if v.undetected else 'no'}",
        f"  qber q1={obs.q1:g} vs q_abort={params.q_abort:g}  margin {v.qber_margin:+.4f}",
        f"  delta_y={v.delta_y:.4f} vs delta_y_max={params.delta_y_max:g}  margin {v.delta_y_margin:+.4f}",
        f"privacy amplification defeated: {'yes' if v.pa_defeated else 'no'}",
        f"  eve={obs.eve_knowledge_fraction:g} vs pa={obs.pa_subtraction_fraction:g}  margin {v.pa_margin:+.4f}",
    ]
    return "\n".join(lines) + "\n"
