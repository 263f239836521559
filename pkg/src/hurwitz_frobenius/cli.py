"""
Command-line front end.

    hurwitz-frobenius analyze DESCRIPTOR.json [--phi TAG]
    hurwitz-frobenius sweep SPEC.json [--jobs N]
    hurwitz-frobenius verify [--seed S] [--suite genus0|genus1|all] [--fd-step H] [--tol-scale F]

Complex numbers are written as [re, im]. Errors go to stderr as one JSON
object; exit codes: 2 parse/spec error, 3 non-simple stratum, 4 incompatible
primary differential, 1 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import frobenius as fb
from .descriptor import DescriptorError, decode_complex, encode, parse_descriptor, to_descriptor
from .errors import (DegenerateError, DomainError, IncompatibleDifferentialError,
                     NonSimpleStratumError, SearchFailure)
from .verification import FDConfig, run_suite

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_STRATUM = 3
EXIT_PHI = 4
SWEEP_OUTPUTS = ("G", "log_tau_B", "log_tau_I", "flat_coords", "lambdas")
STRATUM_ERRORS = (NonSimpleStratumError, SearchFailure, DegenerateError)


class CLIError(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code = code
        self.kind = kind


def dumps(obj):
    return json.dumps(encode(obj), separators=(", ", ": "), allow_nan=True)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(EXIT_PARSE, "io_error", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_PARSE, "parse_error", f"invalid JSON: {exc}") from exc


def _parse(d):
    try:
        return parse_descriptor(d)
    except DescriptorError as exc:
        raise CLIError(EXIT_PARSE, "parse_error", str(exc)) from exc


def _flat_or_none(cover):
    try:
        return fb.flat_coordinates(cover)
    except DomainError:
        return None


def analyze_record(cover, phi=None):
    """FrobeniusData of ``cover`` as an ordered JSON-ready dict."""
    fd = fb.frobenius_data(cover, phi)
    return encode({
        "covering": to_descriptor(cover),
        "phi": fd.phi,
        "lambdas": fd.lambdas,
        "eta_diag": fd.eta_diag,
        "gamma": fd.gamma,
        "V": fd.V,
        "H": fd.H,
        "Bq": fd.Bq,
        "log_tau_B": fd.log_tau_B,
        "log_tau_I": fd.log_tau_I,
        "log_J": fd.log_J,
        "G": fd.G,
        "G_closed": fd.G_closed,
        "h_factors": fd.h_factors,
        "f_factors": fd.f_factors,
        "flat_coords": _flat_or_none(cover),
    })


def cmd_analyze(args):
    cover = _parse(_load_json(args.descriptor))
    try:
        rec = analyze_record(cover, args.phi)
    except IncompatibleDifferentialError as exc:
        raise CLIError(EXIT_PHI, "incompatible_phi", str(exc)) from exc
    except STRATUM_ERRORS as exc:
        raise CLIError(EXIT_STRATUM, "non_simple_stratum", str(exc)) from exc
    print(dumps(rec))
    return 0


def parse_sweep_spec(spec):
    """(template covering, parameter index, grid values, outputs)."""
    if not isinstance(spec, dict):
        raise DescriptorError("sweep spec must be a JSON object")
    template = parse_descriptor(spec.get("template"))
    name = spec.get("parameter")
    names = template.param_names()
    if name not in names:
        raise DescriptorError(f"parameter {name!r} not in {names}")
    steps = spec.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise DescriptorError("'steps' must be an integer >= 2")
    start = decode_complex(spec.get("start"), "start")
    end = decode_complex(spec.get("end"), "end")
    outputs = spec.get("outputs", ["G"])
    if not isinstance(outputs, list) or not outputs or any(o not in SWEEP_OUTPUTS for o in outputs):
        raise DescriptorError(f"'outputs' must be a non-empty subset of {list(SWEEP_OUTPUTS)}")
    grid = start + (end - start) * np.arange(steps) / (steps - 1)
    return template, names.index(name), grid, outputs


def sweep_point(template, index, value, outputs, i):
    rec = {"index": i, "value": value}
    p = list(template.params)
    p[index] = value
    try:
        cover = template.with_params(p)
        fd = fb.frobenius_data(cover)
        vals = {
            "G": fd.G,
            "log_tau_B": fd.log_tau_B,
            "log_tau_I": fd.log_tau_I,
            "lambdas": fd.lambdas,
        }
        for o in outputs:
            rec[o] = _flat_or_none(cover) if o == "flat_coords" else vals[o]
    except STRATUM_ERRORS + (DomainError,) as exc:
        return encode({"index": i, "value": value, "skip": True, "reason": str(exc)})
    return encode(rec)


def cmd_sweep(args):
    spec = _load_json(args.spec)
    try:
        template, index, grid, outputs = parse_sweep_spec(spec)
    except DescriptorError as exc:
        raise CLIError(EXIT_PARSE, "spec_error", str(exc)) from exc
    if args.jobs < 1:
        raise CLIError(EXIT_PARSE, "spec_error", "--jobs must be positive")
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futs = [pool.submit(sweep_point, template, index, complex(v), outputs, i)
                for i, v in enumerate(grid)]
        for f in futs:
            print(dumps(f.result()), flush=True)
    return 0


def cmd_verify(args):
    try:
        cfg = FDConfig(step=args.fd_step)
    except ValueError as exc:
        raise CLIError(EXIT_PARSE, "parse_error", str(exc)) from exc
    if not args.tol_scale > 0:
        raise CLIError(EXIT_PARSE, "parse_error", "--tol-scale must be positive")
    report = run_suite(args.suite, seed=args.seed, cfg=cfg, tol_scale=args.tol_scale)
    print(dumps(report.to_dict()))
    return 0 if report.passed else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error(EXIT_PARSE, "usage_error", message)
        sys.exit(EXIT_PARSE)


def build_parser():
    p = _Parser(prog="hurwitz-frobenius", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", help="Frobenius data of one covering")
    a.add_argument("descriptor")
    a.add_argument("--phi", choices=fb.PHI_TAGS, default=None)
    a.set_defaults(func=cmd_analyze)
    s = sub.add_parser("sweep", help="evaluate along a one-parameter line")
    s.add_argument("spec")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    v = sub.add_parser("verify", help="run the finite-difference verification suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--suite", choices=("genus0", "genus1", "all"), default="all")
    v.add_argument("--fd-step", type=float, default=FDConfig.step)
    v.add_argument("--tol-scale", type=float, default=1.0)
    v.set_defaults(func=cmd_verify)
    return p


def _emit_error(code, kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        _emit_error(exc.code, exc.kind, str(exc))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
