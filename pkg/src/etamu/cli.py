"""Command-line front end.

    etamu aber --scenario fig1 [--out PATH] [--grid 0:30:1] [--seed N] [--budget 0.1]
    etamu acc --scenario fig5
    etamu validate [pdf|noise|kernel|special_cases|hoyt_arbitration|all]
    etamu fit log2 saturating 1e-3:1e3 --out log2.fit

Exit codes: 0 success, 1 failed validation, 2 configuration error,
3 numerical failure.
"""
import argparse
import math
import os
import sys

from . import __version__, kvtext
from . import scenario as scn
from ._backend import BACKEND
from .approx import fit_expsum, measure_max_abs_err, preset_qa, to_record
from .errors import ConvergenceError, CurveEvaluationError, DomainError, QuadratureError
from .metrics import aber, acc
from .oracle import aber_quadrature, acc_quadrature
from .validation import SUITES, format_report, run_suite

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
NUMERIC_ERRORS = (ConvergenceError, QuadratureError, CurveEvaluationError, OverflowError, ZeroDivisionError)


class ConfigError(Exception):
    pass


def _num(x):
    return "%.17g" % x


def _rel_diff(closed, ref):
    if closed == ref:
        return 0.0
    if ref == 0.0:
        return math.inf
    return abs(closed - ref) / abs(ref)


def _load_scenario(args):
    ref = args.scenario
    try:
        if os.path.exists(ref):
            sc = scn.load(ref)
        elif os.sep not in ref and (ref if ref.endswith(".scn") else ref + ".scn") in scn.shipped_names():
            sc = scn.shipped(ref)
        else:
            raise ConfigError(f"scenario not found: {ref}")
        grid = scn.parse_grid(args.grid) if args.grid else None
        return scn.with_overrides(sc, grid=grid, seed=args.seed, budget=args.budget)
    except (DomainError, OSError, UnicodeDecodeError) as exc:
        raise ConfigError(str(exc)) from exc


def _write(path, text):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _sweep(kind, sc, out_path):
    spec0 = sc.fading_spec()
    if kind == "aber":
        mod, noise = sc.modulation(), sc.noise()
        fit = sc.noise_approximation()
        closed_fn = lambda s: aber(s, mod, fit)
        ref_fn = lambda s: aber_quadrature(s, mod, noise)
        clamp = lambda v: min(max(v, 0.0), 1.0)
    else:
        fit = sc.capacity_approximation()
        closed_fn = lambda s: acc(s, fit)
        ref_fn = lambda s: acc_quadrature(s)
        clamp = lambda v: max(v, 0.0)
    rows, flagged, worst = [], [], 0.0
    for db in sc.grid.points():
        s = spec0.with_mean_snr(10.0 ** (db / 10.0))
        try:
            closed = closed_fn(s)
            ref = ref_fn(s)
        except NUMERIC_ERRORS as exc:
            raise CurveEvaluationError(db, exc) from exc
        if not (math.isfinite(closed) and math.isfinite(ref)):
            raise CurveEvaluationError(db, "non-finite value")
        rd = _rel_diff(closed, ref)
        worst = max(worst, rd)
        if rd > sc.budget:
            flagged.append(db)
        rows.append(f"{_num(db)},{_num(clamp(closed))},{_num(ref)},{_num(rd)}")
    header = f"snr_db,{kind}_closed,{kind}_quadrature,rel_diff"
    _write(out_path, header + "\n" + "\n".join(rows) + "\n")
    meta = [
        ("command", kind),
        ("version", __version__),
        ("backend", BACKEND),
        ("rows", str(len(rows))),
        ("max_rel_diff", _num(worst)),
        ("budget", _num(sc.budget)),
        ("flagged_db", ";".join(_num(d) for d in flagged)),
        ("approx.name", fit.name),
        ("approx.max_abs_err", _num(fit.max_abs_err)),
    ]
    meta += [("scenario." + k, v) for k, v in kvtext.parse(scn.dumps(sc)).items()]
    _write(out_path + ".meta", kvtext.dump(meta, "run metadata"))
    flag_txt = ", ".join(_num(d) for d in flagged) if flagged else "none"
    print(
        f"{kind} {sc.name}: {len(rows)} rows, max rel_diff {worst:.3e}, "
        f"{len(flagged)} flagged over budget {sc.budget:g} (dB: {flag_txt}) -> {out_path}"
    )
    return EXIT_OK


def cmd_aber(args):
    sc = _load_scenario(args)
    out = args.out or sc.out_aber or f"{sc.name}_aber.csv"
    return _sweep("aber", sc, out)


def cmd_acc(args):
    sc = _load_scenario(args)
    out = args.out or sc.out_acc or f"{sc.name}_acc.csv"
    return _sweep("acc", sc, out)


def cmd_validate(args):
    checks = run_suite(args.suite, fast=args.fast)
    print(format_report(checks))
    hoyt = [c for c in checks if c.suite == "hoyt_arbitration" and "supported" in c.name]
    for c in hoyt:
        print("hoyt arbitration:", c.name)
    failed = any(not c.info and not c.passed for c in checks)
    return EXIT_VALIDATION if failed else EXIT_OK


def _parse_domain(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"domain must look like lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"domain must be numeric, got {text!r}") from None
    return lo, hi


def cmd_fit(args):
    if args.domain:
        lo, hi = _parse_domain(args.domain)
    else:
        lo, hi = (1e-3, 1e3) if args.kind == "saturating" else (0.1, 40.0)
    try:
        fit = fit_expsum(args.target, args.kind, n_terms=args.terms, lo=lo, hi=hi, n_grid=args.points)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    out = args.out or f"{args.target}_{args.kind}.fit"
    _write(out, to_record(fit))
    print(f"fit {fit.name}: max_abs_err {fit.max_abs_err:.6g} on [{lo:g}, {hi:g}] -> {out}")
    if fit.target.startswith("qa"):
        a = float(fit.target[2:].strip("()"))
        if a in (0.5, 1.0, 1.5, 2.0, 2.5):
            pre = preset_qa(a)
            print(f"tabulated preset a={a:g}: max_abs_err {measure_max_abs_err(pre, fit.target, lo, hi):.6g} on the same grid")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="etamu", description="Error rate and capacity of eta-mu fading channels with MRC.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("aber", cmd_aber, "error-rate sweep"), ("acc", cmd_acc, "capacity sweep")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--scenario", required=True, help="scenario file, or a bundled name such as fig1")
        sp.add_argument("--out", help="CSV output path")
        sp.add_argument("--grid", help="SNR grid start:stop:step in dB, overrides the scenario")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget", type=float, help="relative difference above which rows are flagged")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("validate", help="run self-check suites")
    sp.add_argument("suite", nargs="?", default="all", choices=sorted(SUITES) + ["all"])
    sp.add_argument("--fast", action="store_true", help="smaller sample sizes")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("fit", help="fit an exponential sum and store the record")
    sp.add_argument("target", help="log2, or qa<a> such as qa2")
    sp.add_argument("kind", choices=["decaying", "saturating"])
    sp.add_argument("domain", nargs="?", help="fit interval lo:hi")
    sp.add_argument("--out")
    sp.add_argument("--terms", type=int, default=4)
    sp.add_argument("--points", type=int, default=200)
    sp.set_defaults(func=cmd_fit)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numerical failure: {exc} (residual {exc.residual})", file=sys.stderr)
        return EXIT_NUMERIC
    except CurveEvaluationError as exc:
        print(f"numerical failure at {exc.snr_db:g} dB: {exc.cause}", file=sys.stderr)
        return EXIT_NUMERIC
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
