"""JSON system-config loader.

Top-level keys::

    name                      text, optional
    curves_dir                directory for CSV curve paths, relative to the config file
    components                array of {"id", "kind", ...kind fields, "reflection"?, "datasheet"?}
    path                      array of {"id", "direction"}; direction is "forward",
                              "reverse" or a circulator hop like "1->2"
    reflection_site           index into path
    monitoring                {"detector": {...}, "tap": index} or null
    spads                     array of {"efficiency_log10", "dark_count_prob", "gate_fwhm_s",
                              "gate_rate_hz", "afterpulse_amplitude"?, "trap_decay_s"?,
                              "tap", "branch_loss_db"?}
    damage_threshold_photons  photons per pulse at the entrance
    signal_click_prob         Bob's per-gate signal click probability, optional
    protocol                  {"q0", "y0", "q_abort", "delta_y_max"}, optional
    attack                    {"target_mu", "width_s", "rep_rate_hz", "phase_separation_rad"}, optional

A curve is given as a CSV path (relative to ``curves_dir``), a number (flat
over 400-2500 nm) or an inline ``{"wavelengths_nm": [...], "values_db": [...]}``.
Unknown keys are rejected.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import components as C
from .attack import (
    DEFAULT_DAMAGE_THRESHOLD_PHOTONS,
    DEFAULT_SIGNAL_CLICK_PROB,
    AttachedSpad,
    Monitoring,
    PathElement,
    SystemModel,
)
from .detectors import DEFAULT_AFTERPULSE_AMPLITUDE, DEFAULT_TRAP_DECAY_S, MonitoringDetector, Spad
from .errors import ConfigError, InputError
from .security import ProtocolParams
from .spectral import SpectralCurve, read_csv

TOP_KEYS = {"name", "curves_dir", "components", "path", "reflection_site", "monitoring", "spads",
            "damage_threshold_photons", "signal_click_prob", "protocol", "attack"}
COMMON_COMPONENT_KEYS = {"id", "kind", "reflection", "datasheet"}
KIND_KEYS = {
    "isolator": ({"forward", "reverse"}, set()),
    "circulator": ({"transmissions"}, set()),
    "connector": (set(), {"reflectivity_db", "insertion_db"}),
    "coupler": ({"tap_ratio_db", "through_ratio_db"}, {"excess_loss_db"}),
    "filter": ({"center_nm", "passband_fwhm_nm", "passband_loss_db", "stopband_suppression_db"}, set()),
    "fiber": ({"attenuation_db_per_km", "length_km"}, set()),
    "generic_loss": ({"loss"}, set()),
}
DATASHEET_KEYS = {"design_lambda_nm", "min_isolation_db", "max_insertion_db", "min_return_loss_db"}
MONITOR_KEYS = {"responsivity_log10", "dark_current_a", "alarm_factor"}
SPAD_REQUIRED = {"efficiency_log10", "dark_count_prob", "gate_fwhm_s", "gate_rate_hz", "tap"}
SPAD_OPTIONAL = {"afterpulse_amplitude", "trap_decay_s", "branch_loss_db"}
PROTOCOL_KEYS = {"q0", "y0", "q_abort", "delta_y_max"}
ATTACK_KEYS = {"target_mu", "width_s", "rep_rate_hz", "phase_separation_rad"}


@dataclass(frozen=True)
class AttackDefaults:
    target_mu: float = 4.0
    width_s: float = 1e-9
    rep_rate_hz: float = 1e3
    phase_separation_rad: float = math.pi / 2


@dataclass(frozen=True)
class LoadedConfig:
    system: SystemModel
    attack: AttackDefaults
    claims: dict[str, C.DatasheetClaim] = field(default_factory=dict)
    components: dict[str, C.Component] = field(default_factory=dict)
    digest: str = ""
    source: Optional[Path] = None


def _check_keys(obj: Any, required: set[str], optional: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - optional
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing key(s) {sorted(missing)}")
    return obj


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _index(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer index, got {value!r}")
    return value


class _CurveLoader:
    def __init__(self, curves_dir: Path):
        self.curves_dir = curves_dir
        self._cache: dict[Path, SpectralCurve] = {}

    def __call__(self, spec: Any, where: str, label: str) -> SpectralCurve:
        if isinstance(spec, str):
            path = (self.curves_dir / spec).resolve()
            if path not in self._cache:
                try:
                    self._cache[path] = read_csv(path, label=Path(spec).stem)
                except OSError as exc:
                    raise InputError(f"{where}: cannot read curve {path}: {exc.strerror}") from None
            return self._cache[path]
        if isinstance(spec, (int, float)) and not isinstance(spec, bool):
            return SpectralCurve.flat(float(spec), label=label)
        if isinstance(spec, dict):
            _check_keys(spec, {"wavelengths_nm", "values_db"}, set(), where)
            try:
                return SpectralCurve(spec["wavelengths_nm"], spec["values_db"], label=label)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{where}: {exc}") from None
        raise ConfigError(f"{where}: a curve must be a CSV path, a number or an inline object")


def _component(obj: dict, curve: _CurveLoader, where: str) -> tuple[str, C.Component, Optional[C.DatasheetClaim]]:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError(f"{where}: component needs a 'kind'")
    kind = obj["kind"]
    if kind not in KIND_KEYS:
        raise ConfigError(f"{where}: unknown component kind {kind!r}")
    req, opt = KIND_KEYS[kind]
    _check_keys(obj, req | {"id", "kind"}, opt | {"reflection", "datasheet"}, where)
    cid = obj["id"]
    if not isinstance(cid, str) or not cid:
        raise ConfigError(f"{where}: component id must be a non-empty string")
    where = f"component {cid!r}"

    def c(key: str) -> SpectralCurve:
        return curve(obj[key], f"{where}.{key}", f"{cid} {key}")

    reflection = curve(obj["reflection"], f"{where}.reflection", f"{cid} reflection") \
        if obj.get("reflection") is not None else None
    try:
        if kind == "isolator":
            comp = C.Isolator(c("forward"), c("reverse"), reflection=reflection)
        elif kind == "circulator":
            trans = obj["transmissions"]
            if not isinstance(trans, dict):
                raise ConfigError(f"{where}.transmissions: expected an object of port pairs")
            pairs = {}
            for key, spec in trans.items():
                pair = C.parse_direction(key)
                if isinstance(pair, C.Direction):
                    raise ConfigError(f"{where}.transmissions: {key!r} is not a port pair")
                pairs[pair] = curve(spec, f"{where}.transmissions[{key}]", f"{cid} {key}")
            comp = C.Circulator(pairs, reflection=reflection)
        elif kind == "connector":
            if reflection is not None:
                raise ConfigError(f"{where}: connectors use 'reflectivity_db', not 'reflection'")
            r = obj.get("reflectivity_db", C.FRESNEL_OPEN_DB)
            r = _number(r, f"{where}.reflectivity_db") if not isinstance(r, (str, dict)) \
                else curve(r, f"{where}.reflectivity_db", f"{cid} reflectivity")
            il = obj.get("insertion_db")
            comp = C.Connector(r, None if il is None else _number(il, f"{where}.insertion_db"))
        elif kind == "coupler":
            comp = C.Coupler(_number(obj["tap_ratio_db"], where), _number(obj["through_ratio_db"], where),
                             _number(obj.get("excess_loss_db", 0.0), where), reflection=reflection)
        elif kind == "filter":
            comp = C.Filter(*(_number(obj[k], f"{where}.{k}") for k in
                              ("center_nm", "passband_fwhm_nm", "passband_loss_db", "stopband_suppression_db")),
                            reflection=reflection)
        elif kind == "fiber":
            comp = C.FiberSegment(c("attenuation_db_per_km"), _number(obj["length_km"], where),
                                  reflection=reflection)
        else:
            comp = C.GenericLoss(c("loss"), reflection=reflection)
    except ConfigError:
        raise
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None

    claim = None
    if obj.get("datasheet") is not None:
        ds = _check_keys(obj["datasheet"], {"design_lambda_nm"}, DATASHEET_KEYS, f"{where}.datasheet")
        try:
            claim = C.DatasheetClaim(**{k: _number(v, f"{where}.datasheet.{k}") for k, v in ds.items()})
        except ValueError as exc:
            raise ConfigError(f"{where}.datasheet: {exc}") from None
    return cid, comp, claim


def system_from_dict(doc: dict, base_dir: Path | str = ".", digest: str = "",
                     source: Optional[Path] = None) -> LoadedConfig:
    _check_keys(doc, {"components", "path", "reflection_site"}, TOP_KEYS, "config")
    base_dir = Path(base_dir)
    curves_dir = base_dir / doc.get("curves_dir", ".")
    curve = _CurveLoader(curves_dir)

    if not isinstance(doc["components"], list) or not doc["components"]:
        raise ConfigError("config.components: expected a non-empty array")
    comps: dict[str, C.Component] = {}
    claims: dict[str, C.DatasheetClaim] = {}
    for i, obj in enumerate(doc["components"]):
        cid, comp, claim = _component(obj, curve, f"components[{i}]")
        if cid in comps:
            raise ConfigError(f"duplicate component id {cid!r}")
        comps[cid] = comp
        if claim is not None:
            claims[cid] = claim

    if not isinstance(doc["path"], list):
        raise ConfigError("config.path: expected an array")
    path = []
    for i, step in enumerate(doc["path"]):
        _check_keys(step, {"id", "direction"}, set(), f"path[{i}]")
        if step["id"] not in comps:
            raise ConfigError(f"path[{i}]: unknown component id {step['id']!r}")
        direction = C.parse_direction(step["direction"])
        comp = comps[step["id"]]
        if isinstance(comp, C.Circulator) != (not isinstance(direction, C.Direction)):
            raise C.InvalidDirection(
                f"path[{i}]: direction {step['direction']!r} does not fit a {C.kind_of(comp)}")
        if isinstance(comp, C.Circulator):
            for d in (direction, C.opposite(direction)):
                if d not in comp.transmissions:
                    raise C.InvalidDirection(
                        f"path[{i}]: circulator {step['id']!r} has no curve for {C.format_direction(d)}")
        path.append(PathElement(step["id"], comp, direction))

    monitoring = None
    if doc.get("monitoring") is not None:
        m = _check_keys(doc["monitoring"], {"detector", "tap"}, set(), "config.monitoring")
        d = _check_keys(m["detector"], {"responsivity_log10", "dark_current_a"}, MONITOR_KEYS,
                        "config.monitoring.detector")
        try:
            det = MonitoringDetector(
                curve(d["responsivity_log10"], "monitoring.responsivity_log10", "monitor responsivity"),
                _number(d["dark_current_a"], "monitoring.dark_current_a"),
                _number(d.get("alarm_factor", 1.0), "monitoring.alarm_factor"))
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise ConfigError(f"config.monitoring: {exc}") from None
        monitoring = Monitoring(det, _index(m["tap"], "monitoring.tap"))

    spads = []
    for i, s in enumerate(doc.get("spads") or []):
        where = f"spads[{i}]"
        _check_keys(s, SPAD_REQUIRED, SPAD_OPTIONAL, where)
        try:
            spad = Spad(
                curve(s["efficiency_log10"], f"{where}.efficiency_log10", "spad efficiency"),
                _number(s["dark_count_prob"], where), _number(s["gate_fwhm_s"], where),
                _number(s["gate_rate_hz"], where),
                _number(s.get("afterpulse_amplitude", DEFAULT_AFTERPULSE_AMPLITUDE), where),
                _number(s.get("trap_decay_s", DEFAULT_TRAP_DECAY_S), where))
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise ConfigError(f"{where}: {exc}") from None
        spads.append(AttachedSpad(spad, _index(s["tap"], f"{where}.tap"),
                                  _number(s.get("branch_loss_db", 0.0), where)))

    protocol = ProtocolParams()
    if doc.get("protocol") is not None:
        p = _check_keys(doc["protocol"], set(), PROTOCOL_KEYS, "config.protocol")
        try:
            protocol = ProtocolParams(**{k: _number(v, f"protocol.{k}") for k, v in p.items()})
        except InputError as exc:
            raise ConfigError(f"config.protocol: {exc}") from None

    attack = AttackDefaults()
    if doc.get("attack") is not None:
        a = _check_keys(doc["attack"], set(), ATTACK_KEYS, "config.attack")
        attack = AttackDefaults(**{k: _number(v, f"attack.{k}") for k, v in a.items()})

    name = doc.get("name", source.stem if source else "system")
    system = SystemModel(
        name=str(name),
        path=tuple(path),
        reflection_site=_index(doc["reflection_site"], "config.reflection_site"),
        monitoring=monitoring,
        spads=tuple(spads),
        damage_threshold_photons=_number(doc.get("damage_threshold_photons",
                                                 DEFAULT_DAMAGE_THRESHOLD_PHOTONS), "damage_threshold_photons"),
        signal_click_prob=_number(doc.get("signal_click_prob", DEFAULT_SIGNAL_CLICK_PROB), "signal_click_prob"),
        protocol=protocol,
    )
    return LoadedConfig(system, attack, claims, comps, digest, source)


def load_config(path: Path | str, curves_dir: Path | str | None = None) -> LoadedConfig:
    """Load a system config; ``curves_dir`` overrides the document's own setting."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    digest = hashlib.sha256(raw).hexdigest()
    if curves_dir is not None:
        doc = dict(doc, curves_dir=str(Path(curves_dir).resolve()))
    return system_from_dict(doc, base_dir=path.parent, digest=digest, source=path)
