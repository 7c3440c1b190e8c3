"""``octolat`` command line: verify suites, export kernels, apply Hardy-type operators."""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

from octolat import audits, hardy, io, spectral
from octolat.errors import FormatError
from octolat.lattice import GridSpec
from octolat.report import AuditReport, dump_stream, grid_echo

EXIT_OK = 0
EXIT_HARD_FAIL = 1
EXIT_CONFIG = 2
EXIT_SIZE_CAP = 3
EXIT_FORMAT = 4

DEFAULT_MAX_POINTS = 6**8
_DEFAULTS = audits.VerifyConfig()


class _ConfigError(Exception):
    pass


def max_points():
    raw = os.environ.get("OCTOLAT_MAX_POINTS")
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        return int(raw)
    except ValueError as exc:
        raise _ConfigError(f"OCTOLAT_MAX_POINTS must be an integer, got {raw!r}") from exc


def _report_stream(path):
    return open(path, "w") if path else contextlib.nullcontext(sys.stdout)


# --- verify ----------------------------------------------------------------------

def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fp:
            data = json.load(fp)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _ConfigError("config file must hold a JSON object")
    return data


def build_config(args):
    """Merge defaults, the JSON config file and explicit flags (in increasing priority)."""
    merged = _load_config(args.config)
    for key in ("size", "h", "seed"):
        val = getattr(args, key)
        if val is not None:
            merged[key] = val
    if args.timing:
        merged["timing"] = True
    try:
        return audits.VerifyConfig.from_mapping(merged)
    except (TypeError, ValueError) as exc:
        raise _ConfigError(str(exc)) from exc


def cmd_verify(args):
    cfg = build_config(args)
    reports = audits.run(args.suite, cfg)
    with _report_stream(args.report) as fp:
        dump_stream(reports, fp)
    failed = [r.claim for r in reports if r.passed is False]
    if failed:
        print(f"hard failures: {', '.join(dict.fromkeys(failed))}", file=sys.stderr)
        return EXIT_HARD_FAIL
    return EXIT_OK


# --- fundsol ---------------------------------------------------------------------

def cmd_fundsol(args):
    spec = GridSpec.torus(args.size, args.h)
    cap = max_points()
    if spec.npoints > cap:
        print(f"{spec.npoints} lattice points exceed the cap of {cap} (set OCTOLAT_MAX_POINTS)", file=sys.stderr)
        return EXIT_SIZE_CAP
    E, sing = spectral.fundsol(spec, args.direction, args.variant)
    # the printed kernel is zeroed only at the zero node
    nodes = sing.nodes if sing is not None else ((0,) * len(spec.sizes),)
    fmt = args.format or ("csv" if str(args.out).endswith(".csv") else "bin")
    if fmt == "bin":
        io.write_kernel_bin(args.out, E, args.variant, args.direction, nodes)
    else:
        io.write_kernel_csv(args.out, E, args.variant, args.direction, nodes)
    return EXIT_OK


# --- project ---------------------------------------------------------------------

def _expected_layer(sign):
    return 1 if sign == "+" else -1


def cmd_project(args):
    try:
        bd = io.read_boundary_csv(args.inp, layer=args.layer)
    except FormatError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    want = _expected_layer(args.sign)
    if bd.layer != want:
        print(f"operator {args.op}{args.sign} expects data on layer {want}, got {bd.layer}", file=sys.stderr)
        return EXIT_FORMAT
    multiplier = None if args.multiplier == "printed" else args.multiplier
    details = {"op": args.op, "sign": args.sign, "multiplier": args.multiplier, "input_sup": bd.sup_norm()}
    residual = None
    passed = None
    result = None
    if args.op == "H":
        result = hardy.apply_H(bd, args.sign, args.parenthesization, multiplier)
    elif args.op == "P":
        result = hardy.apply_P(bd, args.sign, args.parenthesization, multiplier)
    elif args.op == "A":
        result = hardy.apply_extension(bd, args.sign)
    else:
        passed, residual = hardy.hardy_membership(bd, args.sign, args.tol, args.parenthesization, multiplier)
        details["tol"] = args.tol
    if result is not None:
        details["output_sup"] = result.sup_norm()
        details["output_layer"] = result.layer
        if args.out:
            io.write_boundary_csv(args.out, result)
    report = AuditReport(
        claim=f"project-{args.op}{args.sign}",
        residual_max=residual,
        residual_mean=residual,
        variant={"parenthesization": args.parenthesization},
        grid=grid_echo(bd.sizes, bd.h, "torus"),
        passed=passed,
        details=details,
    )
    with _report_stream(args.report) as fp:
        dump_stream([report], fp)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="octolat", description=__doc__, formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    # flags default to None so the config file can fill them; defaults are spelled out in the help
    v = sub.add_parser("verify", help="run verification suites and emit JSON-lines audit reports",
                       description="Flags override the --config file, which overrides built-in defaults. "
                                   f"Config keys: {', '.join(audits.VerifyConfig.keys())}.")
    v.add_argument("--suite", choices=audits.SUITES + ("all",), default="all", help="suite to run (default: all)")
    v.add_argument("--size", type=int, default=None, help=f"torus size per axis (default: {_DEFAULTS.size})")
    v.add_argument("--h", type=float, default=None, help=f"lattice constant (default: {_DEFAULTS.h})")
    v.add_argument("--seed", type=int, default=None, help=f"master seed (default: {_DEFAULTS.seed})")
    v.add_argument("--config", default=None, help="JSON object with config keys")
    v.add_argument("--report", default=None, help="write reports here instead of stdout")
    v.add_argument("--timing", action="store_true", help="fill in wall_time_s (makes output non-reproducible)")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fundsol", help="compute a fundamental solution on a torus and write it to disk", formatter_class=fmt)
    f.add_argument("--size", type=int, default=4)
    f.add_argument("--h", type=float, default=1.0)
    f.add_argument("--direction", choices=("+", "-"), default="+")
    f.add_argument("--variant", choices=("paper", "exact"), default="exact")
    f.add_argument("--out", required=True)
    f.add_argument("--format", choices=("bin", "csv"), default=None, help="default: from the --out suffix, else bin")
    f.set_defaults(func=cmd_fundsol)

    p = sub.add_parser("project", help="apply H, P, A or the membership test to boundary data", formatter_class=fmt)
    p.add_argument("--in", dest="inp", required=True, help="boundary-data CSV")
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p.add_argument("--op", choices=("H", "P", "A", "membership"), default="P")
    p.add_argument("--out", default=None, help="output CSV (not written for membership)")
    p.add_argument("--layer", type=int, choices=(-1, 0, 1), default=None, help="override the file's layer tag")
    p.add_argument("--parenthesization", choices=hardy.PARENTHESIZATIONS, default="left-nested")
    p.add_argument("--multiplier", choices=("printed", "hilbert-e7", "identity"), default="printed")
    p.add_argument("--tol", type=float, default=1e-8, help="membership tolerance (relative)")
    p.add_argument("--report", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
