"""Command-line front end: ``weylflow {verify,integrate,orbit,relations,map-trajectory}``.

Exit codes: 0 all checks pass, 1 a check/relation failed or a pole was hit,
2 usage error, 3 numeric integration did not complete.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .backlund import (DEFAULT_SEED, GENERATORS, PASS, FAIL, VerificationReport,
                       apply_word_point, generator, invariance_suite, parse_word,
                       relations_suite, verify_diagram_automorphism, verify_first_integrals,
                       verify_hamiltonian_form, verify_invariant_divisors, verify_reduction,
                       verify_relation)
from .errors import (AllSamplesPoles, DomainError, ExhaustedResampling, ParseError,
                     PoleHit, WeylflowError)
from .flow import IntegrationConfig, integrate, map_trajectory, monitor_invariants
from .model import ParameterVector, build_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SUITES = ("all", "invariance", "integrals", "divisors", "hamiltonian", "reduction",
          "relations", "automorphisms")

WORD_HELP = ("space-separated generator names (s0..s4, pi1..pi3); words act right to "
             "left, so 's1 s2' applies s2 first, as in functional composition")


class UsageError(Exception):
    pass


def default_seed():
    raw = os.environ.get("WEYLFLOW_SEED")
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"WEYLFLOW_SEED must be an integer, got {raw!r}") from None


# -- literal parsing -------------------------------------------------------------

def parse_number(text):
    """``p/q`` or integer literals stay exact; decimals become floats."""
    s = text.strip()
    if not s:
        raise UsageError("empty number")
    try:
        if any(c in s for c in ".eE") or s.lower() in ("inf", "-inf", "nan"):
            return float(s)
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_vector(text, n=None, what="vector"):
    vals = [parse_number(p) for p in text.split(",")]
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated values, got {len(vals)}")
    if any(isinstance(v, float) for v in vals):
        vals = [float(v) for v in vals]
    return vals


def parse_alpha(text, allow_unnormalized):
    vals = parse_vector(text, 5, "--alpha")
    try:
        return ParameterVector(tuple(vals), normalized=not allow_unnormalized)
    except ValueError as exc:
        raise UsageError(f"{exc}; pass --allow-unnormalized to override") from None


def fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


# -- report output -------------------------------------------------------------------

def write_reports(reports, path):
    if not path:
        return
    payload = [r.to_dict() for r in sorted(reports, key=lambda r: r.check_id)]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def print_reports(reports, out):
    for r in sorted(reports, key=lambda r: r.check_id):
        print(f"{r.status.upper():4s}  {r.check_id}", file=out)


# -- subcommands -----------------------------------------------------------------------

def cmd_verify(args, out):
    seed = args.seed if args.seed is not None else default_seed()
    suite, plain = args.suite, args.plain_mode
    reports = []
    if suite in ("all", "invariance"):
        reports += invariance_suite(plain)
    if suite in ("all", "integrals"):
        reports.append(verify_first_integrals(plain=plain))
    if suite in ("all", "divisors"):
        reports.append(verify_invariant_divisors())
    if suite in ("all", "hamiltonian"):
        reports.append(verify_hamiltonian_form(1))
    if suite in ("all", "reduction"):
        reports.append(verify_reduction(plain))
    if suite in ("all", "relations"):
        reports += relations_suite(seed=seed, n_samples=args.samples)
    if suite in ("all", "automorphisms"):
        reports += [verify_diagram_automorphism(j, args.samples, seed) for j in (1, 2, 3)]
    print_reports(reports, out)
    npass = sum(r.passed for r in reports)
    print(f"{npass}/{len(reports)} checks passed", file=out)
    write_reports(reports, args.json)
    return EXIT_OK if npass == len(reports) else EXIT_FAIL


def _config(args):
    try:
        return IntegrationConfig(rtol=args.rtol, atol=args.atol, max_step=args.max_step,
                                 blowup_threshold=args.blowup, max_steps=args.max_steps,
                                 n_grid=args.n_grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _run_report(traj):
    rows = (("termination", traj.termination, traj.completed),
            ("samples", str(len(traj)), True),
            ("final time", fmt(traj.times[-1]), True),
            ("accepted steps", str(traj.stats.get("naccept")), True),
            ("backend", str(traj.stats.get("backend")), True))
    return VerificationReport(f"integrate.{traj.system}", PASS if traj.completed else FAIL,
                              "numeric", tuple((a, b) for a, b, _ in rows))


def cmd_integrate(args, out):
    sys_def = build_system(args.system)
    alpha = parse_alpha(args.alpha, args.allow_unnormalized)
    y0 = parse_vector(args.init, sys_def.dimension, "--init")
    t0, t1 = float(parse_number(args.t0)), float(parse_number(args.t1))
    cfg = _config(args)
    try:
        traj = integrate(sys_def, alpha, y0, t0, t1, cfg)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        traj.write_csv(args.out)
    reports = [_run_report(traj)]
    print(f"termination: {traj.termination} at {traj.time_var} = {traj.times[-1]:.17g} "
          f"({len(traj)} samples, {traj.stats['naccept']} steps)", file=out)
    if sys_def.name == "autonomous":
        drift = monitor_invariants(traj)
        for k, v in drift.drift.items():
            print(f"max drift {k}: {v:.3e}", file=out)
        reports.append(drift.to_report())
    write_reports(reports, args.json)
    return EXIT_OK if traj.completed else EXIT_NUMERIC


def cmd_orbit(args, out):
    variant = args.variant
    names = _parse_word(args.word)
    alpha = parse_alpha(args.alpha, args.allow_unnormalized)
    sys_def = build_system("piii" if variant == "reduced" else "autonomous")
    point = parse_vector(args.point, sys_def.dimension, "--point")
    time = parse_number(args.time)
    exact = alpha.exact and all(isinstance(v, Fraction) for v in point + [time])
    if not exact:
        point, time = [float(v) for v in point], float(time)
        alpha = ParameterVector(alpha.as_floats(), normalized=False)
    word = " ".join(names)
    try:
        state, new_alpha, new_time = apply_word_point(names, point, alpha, time, variant)
    except PoleHit as exc:
        print(f"pole: {exc}", file=out)
        write_reports([VerificationReport(f"orbit.{word.replace(' ', '.')}", FAIL,
                                          "exact" if exact else "numeric",
                                          (("pole", str(exc)),
                                           ("divisor", exc.divisor)))], args.json)
        return EXIT_FAIL
    rows = []
    for v, val in zip(sys_def.phase_vars, state):
        rows.append((f"{v}'", fmt(val)))
    rows.append(("alpha'", "(" + ", ".join(fmt(a) for a in new_alpha) + ")"))
    rows.append((f"{sys_def.time_var}'", fmt(new_time)))
    for k, v in rows:
        print(f"{k} = {v}", file=out)
    write_reports([VerificationReport(f"orbit.{word.replace(' ', '.')}", PASS,
                                      "exact" if exact else "numeric", tuple(rows))], args.json)
    return EXIT_OK


def _parse_word(word):
    try:
        names = parse_word(word)
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    if not names:
        raise UsageError("empty word")
    return names


def cmd_relations(args, out):
    names = _parse_word(args.word)
    seed = args.seed if args.seed is not None else default_seed()
    try:
        report = verify_relation(names, expected=args.expect, mode=args.mode,
                                 n_samples=args.samples, seed=seed, variant=args.variant)
    except ExhaustedResampling as exc:
        print(f"error: {exc}", file=out)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print_reports([report], out)
    for ident, residual in report.details:
        if residual:
            print(f"  {ident}: {residual}", file=out)
    write_reports([report], args.json)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_map_trajectory(args, out):
    if args.map not in GENERATORS:
        raise UsageError(f"unknown generator {args.map!r}; expected one of {GENERATORS}")
    sys_def = build_system("piii")
    alpha = parse_alpha(args.alpha, args.allow_unnormalized)
    y0 = parse_vector(args.init, 4, "--init")
    t0, t1 = float(parse_number(args.t0)), float(parse_number(args.t1))
    cfg = _config(args)
    try:
        traj = integrate(sys_def, alpha, y0, t0, t1, cfg)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if not traj.completed:
        print(f"source run terminated early: {traj.termination}", file=out)
        write_reports([_run_report(traj)], args.json)
        return EXIT_NUMERIC
    try:
        image, eq = map_trajectory(traj, generator(args.map), sys_def, cfg)
    except AllSamplesPoles as exc:
        print(f"pole: {exc}", file=out)
        return EXIT_FAIL
    if args.out:
        image.write_csv(args.out)
    report = eq.to_report(args.tol)
    print(f"{report.status.upper()}  {report.check_id}: discrepancy {eq.discrepancy:.3e} "
          f"over {eq.n_compared} samples ({eq.n_dropped} dropped at poles)", file=out)
    write_reports([_run_report(traj), report], args.json)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- parser ------------------------------------------------------------------------------

def _add_numeric(p):
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--max-step", type=float, default=math.inf)
    p.add_argument("--max-steps", type=int, default=10 ** 6)
    p.add_argument("--blowup", type=float, default=1e8, help="max-norm blowup threshold")
    p.add_argument("--n-grid", type=int, default=257, help="number of output samples")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="weylflow",
        description="Exact verification and numerical integration of the coupled "
                    "Painleve III systems with D4(1) Backlund symmetry.",
        epilog="Numbers are exact p/q literals unless they contain a decimal point or "
               "exponent. Vectors that start with '-' need the '=' form, e.g. "
               "--init=-1,2,3,4. " + WORD_HELP + ".")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run symbolic verification suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--plain-mode", action="store_true",
                   help="compare without using the parameter constraint")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=None, help="default: $WEYLFLOW_SEED or 42")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="integrate a system and write a CSV trajectory")
    p.add_argument("--system", choices=("autonomous", "piii"), required=True)
    p.add_argument("--alpha", required=True, help="five comma-separated parameters")
    p.add_argument("--init", required=True, help="comma-separated initial state")
    p.add_argument("--t0", required=True)
    p.add_argument("--t1", required=True)
    p.add_argument("--out", metavar="CSV")
    p.add_argument("--allow-unnormalized", action="store_true")
    p.add_argument("--json", metavar="PATH")
    _add_numeric(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("orbit", help="apply a word of generators to a point",
                       description=WORD_HELP)
    p.add_argument("--word", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--time", default="1")
    p.add_argument("--variant", choices=("reduced", "autonomous"), default="reduced")
    p.add_argument("--allow-unnormalized", action="store_true")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("relations", help="check that a word acts as the identity",
                       description=WORD_HELP)
    p.add_argument("--word", required=True)
    p.add_argument("--expect", default="identity", choices=("identity",))
    p.add_argument("--mode", choices=("sampled", "symbolic"), default="sampled")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=None, help="default: $WEYLFLOW_SEED or 42")
    p.add_argument("--variant", choices=("reduced", "autonomous"), default="reduced")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("map-trajectory",
                       help="integrate piii, map the run by a generator, re-integrate")
    p.add_argument("--map", required=True, help="generator name, e.g. s1 or pi3")
    p.add_argument("--alpha", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--t0", default="1")
    p.add_argument("--t1", default="2")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", metavar="CSV", help="write the image trajectory")
    p.add_argument("--allow-unnormalized", action="store_true")
    p.add_argument("--json", metavar="PATH")
    _add_numeric(p)
    p.set_defaults(func=cmd_map_trajectory)
    return parser


def _version():
    from . import __version__
    return __version__


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"weylflow {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeylflowError as exc:
        print(f"weylflow {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"weylflow {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
