"""``trojanrisk`` command-line entry point.

Exit codes: 0 success, 2 input error, 3 config-semantic error,
4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import shlex
import sys
import warnings
from pathlib import Path

import numpy as np

from . import report
from .attack import AttackPulse, scan_wavelengths
from .components import DatasheetClaim, validate_against_datasheet
from .config import load_config
from .errors import ConfigError, EmptyGrid, InputError
from .security import AttackObservation, ProtocolParams, bb84_asymptotic_pa_fraction, breach_verdict
from .spectral import double_pass, emit_csv, normalize_to_reference, read_csv

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 2, 3, 4


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _emit_warnings(records) -> None:
    for line in report.summarize_warnings(records):
        print(f"warning: {line}", file=sys.stderr)


def _timestamp(args) -> str | None:
    if not args.timestamp:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def cmd_normalize(args) -> int:
    raw = read_csv(args.raw)
    ref = read_csv(args.reference)
    _write(emit_csv(normalize_to_reference(raw, ref)), args.out)
    return EXIT_OK


def cmd_doublepass(args) -> int:
    fwd = read_csv(args.forward)
    rev = read_csv(args.reverse)
    _write(emit_csv(double_pass(fwd, rev)), args.out)
    return EXIT_OK


def _grid(args) -> list[float]:
    if args.wavelengths:
        try:
            grid = [float(x) for x in args.wavelengths.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad --wavelengths list {args.wavelengths!r}") from None
    else:
        if args.step <= 0:
            raise EmptyGrid("--step must be > 0")
        n = int(np.floor((args.lambda_max - args.lambda_min) / args.step + 1e-9)) + 1
        grid = [args.lambda_min + i * args.step for i in range(n)] if n > 0 else []
    if not grid:
        raise EmptyGrid("wavelength grid is empty")
    return grid


def _scan(args):
    cfg = load_config(args.config, curves_dir=args.curves_dir)
    grid = _grid(args)
    a = cfg.attack
    target_mu = args.target_mu if args.target_mu is not None else a.target_mu
    width = args.width_s if args.width_s is not None else a.width_s
    rep = args.rep_rate_hz if args.rep_rate_hz is not None else a.rep_rate_hz
    template = AttackPulse(grid[0], 1e-3, width, rep)
    entries = scan_wavelengths(cfg.system, grid, template, target_mu,
                               phase_separation_rad=a.phase_separation_rad,
                               clamp=args.clamp, workers=args.workers)
    violations = []
    for cid, claim in cfg.claims.items():
        try:
            violations += [f"{cid}: {v}" for v in validate_against_datasheet(cfg.components[cid], claim)]
        except InputError:
            violations.append(f"{cid}: design wavelength {claim.design_lambda_nm:g} nm outside its curves")
    return entries, dict(target_mu=target_mu, width_s=width, rep_rate_hz=rep), grid, violations, cfg


def cmd_scan(args) -> int:
    with warnings.catch_warnings(record=True) as records:
        warnings.simplefilter("always")
        entries, attack, grid, violations, cfg = _scan(args)
    text = report.scan_report(
        entries, command=args.command_echo, config_path=str(args.config), digest=cfg.digest,
        system=cfg.system, attack=attack, grid=grid,
        warning_lines=report.summarize_warnings(records), violations=violations,
        timestamp=_timestamp(args))
    table = report.scan_csv(entries)
    if args.out:
        _write(table, args.out)
        _write(text, args.report)
    else:
        sys.stdout.write(table)
        if args.report:
            _write(text, args.report)
        else:
            sys.stderr.write(text)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    base = ProtocolParams()
    if args.config:
        base = load_config(args.config, curves_dir=args.curves_dir).system.protocol
    params = ProtocolParams(
        q0=base.q0 if args.q0 is None else args.q0,
        y0=base.y0 if args.y0 is None else args.y0,
        q_abort=base.q_abort if args.q_abort is None else args.q_abort,
        delta_y_max=base.delta_y_max if args.delta_y_max is None else args.delta_y_max,
    )
    if args.pa is None and not args.pa_bb84:
        raise InputError("give --pa or --pa-bb84")
    pa = bb84_asymptotic_pa_fraction(args.q1) if args.pa is None else args.pa
    obs = AttackObservation(args.q1, args.y1, args.eve, pa)
    text = report.verdict_report(breach_verdict(params, obs), params, obs)
    if args.pa is None:
        text += "note: pa from the asymptotic BB84 h2(q1) share, not a multi-pair security proof\n"
    ts = _timestamp(args)
    if ts:
        text = f"generated: {ts}\n" + text
    sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config, curves_dir=args.curves_dir)
    ids = [args.component] if args.component else sorted(cfg.claims)
    if args.component and args.component not in cfg.components:
        raise ConfigError(f"no component {args.component!r} in {args.config}")
    overrides = {k: getattr(args, k) for k in
                 ("design_lambda_nm", "min_isolation_db", "max_insertion_db", "min_return_loss_db")
                 if getattr(args, k) is not None}
    if not ids:
        print("no datasheet claims configured")
        return EXIT_OK
    lines = []
    for cid in ids:
        claim = cfg.claims.get(cid)
        if claim is None and "design_lambda_nm" not in overrides:
            raise ConfigError(f"component {cid!r} has no datasheet block; pass --design-nm")
        fields = dict(claim.__dict__) if claim else {}
        fields.update(overrides)
        found = validate_against_datasheet(cfg.components[cid], DatasheetClaim(**fields))
        lines.append(f"{cid}: {'ok' if not found else f'{len(found)} violation(s)'}")
        lines.extend(f"  - {v}" for v in found)
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--clamp", action="store_true", default=argparse.SUPPRESS,
                        help="clamp out-of-grid queries to the curve edge (reported as warnings)")
    common.add_argument("--curves-dir", default=argparse.SUPPRESS,
                        help="directory for CSV curves referenced by the config")
    common.add_argument("--timestamp", action="store_true", default=argparse.SUPPRESS,
                        help="stamp reports with the current UTC time")

    p = argparse.ArgumentParser(prog="trojanrisk", parents=[common],
                                description="Wavelength-resolved Trojan-horse risk analysis.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("normalize", parents=[common], help="normalize a raw trace to a reference trace")
    s.add_argument("raw")
    s.add_argument("reference")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("doublepass", parents=[common], help="compose forward and reverse transmittance")
    s.add_argument("forward")
    s.add_argument("reverse")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.set_defaults(func=cmd_doublepass)

    s = sub.add_parser("scan", parents=[common], help="rank attack wavelengths for a system config")
    s.add_argument("config")
    s.add_argument("--lambda-min", type=float, default=1100.0)
    s.add_argument("--lambda-max", type=float, default=1750.0)
    s.add_argument("--step", type=float, default=5.0)
    s.add_argument("--wavelengths", help="comma-separated list, overrides min/max/step")
    s.add_argument("--target-mu", type=float)
    s.add_argument("--width-s", type=float)
    s.add_argument("--rep-rate-hz", type=float)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("-o", "--out", help="ranked CSV table (default stdout, report then goes to stderr)")
    s.add_argument("--report", help="text report path (default stdout)")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("evaluate", parents=[common], help="breach verdict from QBER and y statistics")
    s.add_argument("--config", help="system config whose protocol block supplies defaults")
    s.add_argument("--q0", type=float)
    s.add_argument("--y0", type=float)
    s.add_argument("--q-abort", type=float)
    s.add_argument("--delta-y-max", type=float)
    s.add_argument("--q1", type=float, required=True)
    s.add_argument("--y1", type=float, required=True)
    s.add_argument("--eve", type=float, required=True, help="Eve's knowledge fraction")
    s.add_argument("--pa", type=float, help="fraction subtracted in privacy amplification")
    s.add_argument("--pa-bb84", action="store_true",
                   help="use the asymptotic BB84 h2(q1) share when --pa is not given")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("validate", parents=[common], help="check components against datasheet claims")
    s.add_argument("config")
    s.add_argument("--component")
    s.add_argument("--design-nm", dest="design_lambda_nm", type=float)
    s.add_argument("--min-isolation", dest="min_isolation_db", type=float)
    s.add_argument("--max-insertion", dest="max_insertion_db", type=float)
    s.add_argument("--min-return-loss", dest="min_return_loss_db", type=float)
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("clamp", False), ("curves_dir", None), ("timestamp", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    args.command_echo = shlex.join(["trojanrisk", *argv])
    try:
        with warnings.catch_warnings(record=True) as records:
            warnings.simplefilter("always")
            code = args.func(args)
        _emit_warnings(records)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # invariant violations and anything unforeseen
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
