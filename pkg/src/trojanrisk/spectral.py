"""Sampled spectral curves and their dB-domain algebra.

A :class:`SpectralCurve` maps wavelength (nm) to a value in dB. Everything
that varies with wavelength in this package (transmittance, isolation,
reflectivity, detector response) is carried by one.  Curves are immutable.
Evaluation between samples is linear in dB; queries outside the sampled
range raise :class:`~trojanrisk.errors.OutOfRange` unless ``clamp=True``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateWavelength,
    MalformedRow,
    NoOverlap,
    OutOfRange,
    TooFewPoints,
)

CSV_HEADER = "wavelength_nm,value_db"


class ClampWarning(UserWarning):
    """Emitted whenever a query outside a curve's grid was clamped to its edge."""

    def __init__(self, label: str, lambda_nm: float, lo: float, hi: float):
        self.label = label
        self.lambda_nm = lambda_nm
        self.lo = lo
        self.hi = hi
        super().__init__(
            f"curve {label or '<unnamed>'!r}: {lambda_nm:g} nm clamped to grid [{lo:g}, {hi:g}] nm"
        )


def _frozen(values: Iterable[float]) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    wavelengths_nm: np.ndarray
    values_db: np.ndarray
    label: str = ""
    passive: bool = False

    def __post_init__(self):
        wl = _frozen(self.wavelengths_nm)
        val = _frozen(self.values_db)
        object.__setattr__(self, "wavelengths_nm", wl)
        object.__setattr__(self, "values_db", val)
        if wl.ndim != 1 or val.shape != wl.shape:
            raise ValueError("wavelengths and values must be 1-D and of equal length")
        if wl.size < 2:
            raise TooFewPoints(f"curve {self.label!r} needs at least 2 points, got {wl.size}")
        if not (np.all(np.isfinite(wl)) and np.all(np.isfinite(val))):
            raise ValueError(f"curve {self.label!r} contains non-finite values")
        if np.any(np.diff(wl) <= 0):
            raise ValueError(f"curve {self.label!r}: wavelengths must be strictly increasing")
        if self.passive and np.any(val > 0):
            bad = float(wl[np.argmax(val)])
            raise ValueError(
                f"passive curve {self.label!r} exceeds 0 dB (max {val.max():g} dB at {bad:g} nm)"
            )

    @classmethod
    def flat(cls, value_db: float, lo_nm: float = 400.0, hi_nm: float = 2500.0,
             label: str = "", passive: bool = False) -> "SpectralCurve":
        return cls([lo_nm, hi_nm], [value_db, value_db], label=label, passive=passive)

    @property
    def lo(self) -> float:
        return float(self.wavelengths_nm[0])

    @property
    def hi(self) -> float:
        return float(self.wavelengths_nm[-1])

    def __len__(self) -> int:
        return int(self.wavelengths_nm.size)

    def __call__(self, lambda_nm: float, clamp: bool = False) -> float:
        return interpolate_db(self, lambda_nm, clamp=clamp)

    def with_label(self, label: str) -> "SpectralCurve":
        return SpectralCurve(self.wavelengths_nm, self.values_db, label=label, passive=self.passive)

    def allclose(self, other: "SpectralCurve", atol: float = 1e-9) -> bool:
        return (
            self.wavelengths_nm.shape == other.wavelengths_nm.shape
            and np.allclose(self.wavelengths_nm, other.wavelengths_nm, rtol=0, atol=atol)
            and np.allclose(self.values_db, other.values_db, rtol=0, atol=atol)
        )

    def __repr__(self) -> str:
        return (f"SpectralCurve(label={self.label!r}, n={len(self)}, "
                f"range=[{self.lo:g}, {self.hi:g}] nm)")


def interpolate_db(curve: SpectralCurve, lambda_nm: float, clamp: bool = False) -> float:
    """Evaluate ``curve`` at ``lambda_nm`` by linear interpolation in dB.

    Exact at grid points.  Outside the grid, raises ``OutOfRange`` or, with
    ``clamp=True``, returns the edge value and emits a :class:`ClampWarning`.
    """
    lam = float(lambda_nm)
    if not math.isfinite(lam):
        raise OutOfRange(f"wavelength {lambda_nm!r} is not finite")
    if lam < curve.lo or lam > curve.hi:
        if not clamp:
            raise OutOfRange(
                f"{lam:g} nm is outside curve {curve.label or '<unnamed>'!r} "
                f"range [{curve.lo:g}, {curve.hi:g}] nm"
            )
        warnings.warn(ClampWarning(curve.label, lam, curve.lo, curve.hi), stacklevel=2)
        return float(curve.values_db[0] if lam < curve.lo else curve.values_db[-1])
    return float(np.interp(lam, curve.wavelengths_nm, curve.values_db))


def _overlap(curves: Sequence[SpectralCurve]) -> tuple[float, float]:
    lo = max(c.lo for c in curves)
    hi = min(c.hi for c in curves)
    if lo >= hi:
        ranges = ", ".join(f"{c.label or '<unnamed>'} [{c.lo:g}, {c.hi:g}]" for c in curves)
        raise NoOverlap(f"curve grids do not overlap: {ranges}")
    return lo, hi


def normalize_to_reference(raw: SpectralCurve, reference: SpectralCurve,
                           label: str | None = None) -> SpectralCurve:
    """Relative trace ``raw - reference`` in dB on the raw grid inside the overlap."""
    lo, hi = _overlap([raw, reference])
    keep = (raw.wavelengths_nm >= lo) & (raw.wavelengths_nm <= hi)
    wl = raw.wavelengths_nm[keep]
    if wl.size < 2:
        raise NoOverlap(
            f"raw grid [{raw.lo:g}, {raw.hi:g}] and reference grid "
            f"[{reference.lo:g}, {reference.hi:g}] share fewer than 2 raw samples"
        )
    ref = np.interp(wl, reference.wavelengths_nm, reference.values_db)
    return SpectralCurve(wl, raw.values_db[keep] - ref,
                         label=label if label is not None else f"{raw.label} normalized")


def compose_serial(curves: Sequence[SpectralCurve], label: str | None = None) -> SpectralCurve:
    """Pointwise dB sum on the union of grid points inside the common overlap."""
    curves = list(curves)
    if not curves:
        raise ValueError("compose_serial needs at least one curve")
    if len(curves) == 1:
        return curves[0] if label is None else curves[0].with_label(label)
    lo, hi = _overlap(curves)
    grid = np.unique(np.concatenate([c.wavelengths_nm for c in curves]))
    grid = grid[(grid >= lo) & (grid <= hi)]
    total = np.zeros_like(grid)
    for c in curves:
        total = total + np.interp(grid, c.wavelengths_nm, c.values_db)
    passive = all(c.passive for c in curves)
    return SpectralCurve(grid, total,
                         label=label if label is not None else " + ".join(c.label for c in curves),
                         passive=passive)


def double_pass(forward: SpectralCurve, reverse: SpectralCurve,
                label: str | None = None) -> SpectralCurve:
    """Net transmittance of a forward traversal followed by a reverse one."""
    return compose_serial([forward, reverse],
                          label=label if label is not None else f"double pass ({forward.label}, {reverse.label})")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        return -math.inf
    return 10.0 * math.log10(x)


# --- CSV -------------------------------------------------------------------

def parse_csv(text: str, label: str = "", passive: bool = False) -> SpectralCurve:
    """Parse ``wavelength_nm,value_db`` text.  Rows may come in any order."""
    rows: list[tuple[float, float]] = []
    header_seen = False
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line.replace(" ", "") != CSV_HEADER:
                raise MalformedRow(f"line {lineno}: expected header {CSV_HEADER!r}, got {line!r}")
            header_seen = True
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise MalformedRow(f"line {lineno}: expected 2 fields, got {len(parts)}: {line!r}")
        try:
            wl, val = float(parts[0]), float(parts[1])
        except ValueError:
            raise MalformedRow(f"line {lineno}: non-numeric field in {line!r}") from None
        if not (math.isfinite(wl) and math.isfinite(val)):
            raise MalformedRow(f"line {lineno}: non-finite value in {line!r}")
        rows.append((wl, val))
    if not header_seen:
        raise MalformedRow(f"missing header {CSV_HEADER!r}")
    if len(rows) < 2:
        raise TooFewPoints(f"curve {label!r} has {len(rows)} data rows, need at least 2")
    rows.sort(key=lambda r: r[0])
    for (a, _), (b, _) in zip(rows, rows[1:]):
        if a == b:
            raise DuplicateWavelength(f"duplicate wavelength {a:g} nm in curve {label!r}")
    wl, val = zip(*rows)
    return SpectralCurve(wl, val, label=label, passive=passive)


def emit_csv(curve: SpectralCurve, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(CSV_HEADER)
    lines.extend(f"{float(w)!r},{float(v)!r}" for w, v in zip(curve.wavelengths_nm, curve.values_db))
    return "\n".join(lines) + "\n"


def read_csv(path, label: str | None = None, passive: bool = False) -> SpectralCurve:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_csv(text, label=label if label is not None else path.stem, passive=passive)


def write_csv(curve: SpectralCurve, path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(emit_csv(curve, comments), encoding="utf-8", newline="\n")
