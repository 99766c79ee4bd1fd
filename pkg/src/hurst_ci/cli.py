"""Command line front end: ``hurst-ci simulate|estimate|kappa|table|coverage``.

Exit status is 0 on success, 2 when every requested interval was infeasible
and 1 on errors.  ``--config FILE`` loads a JSON object whose keys override the
corresponding flags.  The default worker count comes from ``HURST_CI_WORKERS``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


def _floats(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def _clean(obj):
    # JSON has no NaN/inf; emit null instead
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return _clean(obj.item())
    return obj


def _emit(obj):
    print(json.dumps(_clean(obj), indent=2))


def _filter_arg(name, m=1):
    from .filter_bank import builtin_filter, dilate

    return dilate(builtin_filter(name), int(m)) if int(m) > 1 else builtin_filter(name)


# ---------------------------------------------------------------------------

def cmd_simulate(args):
    from .fbm_sim import SimConfig, path_to_csv, simulate

    path = simulate(SimConfig(H=args.H, C=args.C, n=args.n, seed=args.seed), rep=args.rep)
    if args.out in (None, "-"):
        path_to_csv(path, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            path_to_csv(path, fh)
    return EXIT_OK


def cmd_estimate(args):
    from .experiments import interval_for
    from .fbm_sim import path_from_csv

    if args.input == "-":
        path = path_from_csv(sys.stdin)
    else:
        with open(args.input) as fh:
            path = path_from_csv(fh)
    filt = _filter_arg(args.filter, args.m)
    d = _floats(args.d) if args.d else None
    ci = interval_for(args.method, path, filt, args.alpha, args.M, args.C, args.h_star, d)
    _emit(ci.to_dict())
    return EXIT_OK if ci.feasible else EXIT_INFEASIBLE


def cmd_kappa(args):
    from .filter_bank import filter_source, kappa, sup_l1_norm

    out = []
    for name in args.filter:
        for m in _ints(args.m):
            f = _filter_arg(name, m)
            h_star, sup = sup_l1_norm(f)
            out.append({"filter": name, "m": m, "p": f.order, "l": f.ell, "kappa": kappa(f),
                        "argmax_H": h_star, "sup_l1": sup, "source": filter_source(name)})
    _emit(out)
    return EXIT_OK


def cmd_table(args):
    from .experiments import ExperimentConfig, run_table

    cfg = ExperimentConfig(
        table=args.id, reps=args.reps, n_list=_ints(args.n), H_list=_floats(args.H), C=args.C,
        filters=args.filters.split(","), M_list=_ints(args.M), alpha=args.alpha, seed=args.seed,
        workers=args.workers, out_dir=args.out_dir,
    )
    rows, csv_path, json_path = run_table(args.id, cfg)
    _emit({"table": args.id, "rows": len(rows), "csv": str(csv_path), "json": str(json_path)})
    return EXIT_OK


def cmd_coverage(args):
    from .experiments import run_coverage

    filt = _filter_arg(args.filter, args.m) if args.m > 1 else args.filter
    rec = run_coverage(args.method, filt, args.n, args.H, args.C, args.alpha, args.reps, args.seed,
                       args.workers, args.M, args.h_star)
    _emit(rec.to_dict())
    return EXIT_OK if rec.feasible_rate > 0 else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .experiments import default_workers

    p = argparse.ArgumentParser(prog="hurst-ci", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON file whose keys override the flags")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate one fBm path to CSV")
    s.add_argument("--H", type=float, required=True)
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rep", type=int, default=0)
    s.add_argument("--out", help="output CSV (default: stdout)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("estimate", help="confidence interval for H from a CSV path")
    s.add_argument("--input", required=True)
    s.add_argument("--filter", default="i2")
    s.add_argument("--m", type=int, default=1, help="dilation of the filter")
    s.add_argument("--method", default="ci-known",
                   choices=["ci-known", "ci-unknown", "bnp", "clt-known", "clt-unknown"])
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--M", type=int, default=2)
    s.add_argument("--C", type=float, default=1.0, help="known scale (known-scale methods)")
    s.add_argument("--d", help="comma separated design vector, e.g. --d=-1,1 (default: centred log m)")
    s.add_argument("--h-star", dest="h_star", type=float, default=0.8)
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("kappa", help="sup of the l1 norm of the correlation and kappa")
    s.add_argument("--filter", nargs="+", default=["i2"])
    s.add_argument("--m", default="1", help="comma separated dilations")
    s.set_defaults(func=cmd_kappa)

    s = sub.add_parser("table", help="regenerate a reference table as CSV + JSON")
    s.add_argument("--id", required=True, choices=["1", "2", "3", "4", "5", "6", "fig1", "bnp"])
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--n", default="50,100,500,1000,10000")
    s.add_argument("--H", default="0.2,0.5,0.8")
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--filters", default="i2,d4")
    s.add_argument("--M", default="2,5")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int, default=default_workers())
    s.add_argument("--out-dir", dest="out_dir", default="results")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("coverage", help="Monte-Carlo coverage of one procedure")
    s.add_argument("--method", default="ci-known",
                   choices=["ci-known", "ci-unknown", "bnp", "clt-known", "clt-unknown"])
    s.add_argument("--filter", default="i2")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--H", type=float, default=0.5)
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=default_workers())
    s.add_argument("--M", type=int, default=2)
    s.add_argument("--h-star", dest="h_star", type=float, default=0.8)
    s.set_defaults(func=cmd_coverage)
    return p


def _apply_config(args, path):
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if attr in ("command", "func", "config"):
            continue
        if not hasattr(args, attr):
            raise ValueError(f"config key {key!r} is not an option of {args.command!r}")
        if isinstance(value, list) and attr in ("n", "H", "M", "m", "d"):
            value = ",".join(str(v) for v in value)
        setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(f"hurst-ci: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        if args.config:
            _apply_config(args, args.config)
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - report and map to the error status
        print(f"hurst-ci: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
