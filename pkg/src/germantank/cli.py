"""Command-line entry point: ``germantank <subcommand> ...``.

Runtime failures print ``{"error": <type>, "message": <text>}`` on stderr
and exit 1; usage errors exit 2.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import regression as reg
from .distributions import PopulationModel, Variable, pmf_table
from .errors import GermanTankError
from .estimators import Method, SerialSample, estimate_from_sample
from .experiments import PARAMETERS, ExperimentSpec, run_experiment
from .selfcheck import checks
from .simulator import SimulationConfig, run_trials
from .tables import normalized_max, read_columns, records_to_csv, to_csv

DEFAULT_SIMULATE_SEED = 1941


def _range(text: str):
    m = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, filename: str, text: str) -> None:
    if args.out_dir is not None:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text)


# -- subcommands -------------------------------------------------------------

def cmd_pmf(args) -> int:
    if args.n is not None:
        pop = PopulationModel.of_size(args.n, args.n1)
    elif args.n2 is not None:
        pop = PopulationModel(args.n1, args.n2, args.n2 - args.n1 + 1)
    else:
        raise GermanTankError("give --n or --n2")
    table = pmf_table(pop, args.k, Variable(args.variable))
    if args.format == "json":
        text = _dump({
            "variable": table.variable.value,
            "k": table.k,
            "n": pop.n,
            "support": [table.support_lo, table.support_hi],
            "probs": [{"value": v, "numerator": p.numerator, "denominator": p.denominator,
                       "float_approx": float(p)} for v, p in table.as_dict().items()],
        })
        name = "pmf.json"
    else:
        text = table.to_csv()
        name = "pmf.csv"
    _emit(args, name, text)
    sys.stdout.write(text)
    return 0


def _read_serials(args, parser) -> List[int]:
    if args.serials is not None:
        text = args.serials
    elif args.file not in (None, "-"):
        text = Path(args.file).read_text()
    else:
        text = sys.stdin.read()
    tokens = [t for t in re.split(r"[,\s]+", text) if t]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        parser.error(f"serials must be integers, got {text.strip()!r}")


def _round(value: Fraction, mode: str):
    if mode == "nearest":
        return math.floor(value + Fraction(1, 2))
    if mode == "ceil":
        return math.ceil(value)
    return None


def cmd_estimate(args, parser) -> int:
    sample = SerialSample.from_serials(_read_serials(args, parser))
    est = estimate_from_sample(sample, Method(args.method), args.known_min)
    out = {
        "method": est.method.value,
        "k": est.k_used,
        "statistic": est.statistic_used,
        "estimate_rational": str(est.value),
        "estimate_float": float(est.value),
    }
    if args.round != "none":
        out["estimate_rounded"] = _round(est.value, args.round)
    text = _dump(out)
    _emit(args, "estimate.json", text)
    sys.stdout.write(text)
    return 0


def _summary_dict(summary) -> Dict:
    c = summary.config
    return {
        "config": {"seed": c.seed, "trials": c.trials, "n_range": list(c.n_range),
                   "k_range": list(c.k_range), "n1": c.n1},
        "mean_est_known": summary.mean_est_known,
        "mean_est_unknown": summary.mean_est_unknown,
        "mean_max": summary.mean_max,
        "mean_spread": summary.mean_spread,
    }


def cmd_simulate(args) -> int:
    seed = DEFAULT_SIMULATE_SEED if args.seed is None else args.seed
    config = SimulationConfig(seed, args.trials, args.n_range, args.k_range, args.n1)
    summary = run_trials(config, workers=args.workers)
    csv_text = records_to_csv(summary.records)
    json_text = _dump(_summary_dict(summary))
    _emit(args, "trials.csv", csv_text)
    _emit(args, "summary.json", json_text)
    sys.stdout.write(json_text if args.format == "json" else csv_text)
    return 0


def _column(cols, name: str) -> np.ndarray:
    if name == "m":
        return np.array(normalized_max(cols), dtype=float)
    if name not in cols:
        raise GermanTankError(f"column {name!r} not in input (have {', '.join(cols)})")
    return np.array([float(v) for v in cols[name]], dtype=float)


def cmd_regress(args) -> int:
    cols = read_columns(args.input if args.input not in (None, "-") else sys.stdin)
    report: Dict = {"model": args.model}
    if args.model == "simple":
        x, y = _column(cols, args.x or "n_true"), _column(cols, args.y or "m")
        if args.no_intercept:
            fit = reg.fit_linear(reg.DesignMatrix.build(y, {"a": x}), label="y = a x")
        else:
            fit = reg.fit_simple(list(zip(x.tolist(), y.tolist())))
        fitted = fit.predict({"a": x}) if args.no_intercept else fit["a"] * x + fit["b"]
        report["fit"] = fit.to_dict()
    elif args.model == "log":
        x = _column(cols, "m")
        n, k = _column(cols, "n_true"), _column(cols, "k")
        fit = reg.fit_log_model_arrays(n, x, k)
        y = np.log(n)
        fitted = fit["a"] * np.log(x) + fit["b"] / k
        report["fit"] = fit.to_dict()
    elif args.model == "power":
        x, y = _column(cols, args.x or "d"), _column(cols, args.y or "mean_people")
        fit = reg.fit_power_law(list(zip(x.tolist(), y.tolist())))
        fitted = fit.derived["B"] * x ** fit["a"]
        report["fit"] = fit.to_dict()
    else:
        n, m, k = _column(cols, "n_true"), _column(cols, "m"), _column(cols, "k")
        ks = sorted({int(v) for v in k})
        slopes = reg.per_k_slopes_arrays(n, m, k.astype(int), ks)
        decay = reg.fit_slope_decay(slopes)
        ok = [s for s in slopes if s.error is None and s.a > 1]
        x = np.array([s.k for s in ok], dtype=float)
        y = np.array([s.a - 1 for s in ok])
        fitted = decay.derived["B"] * x ** decay["a"]
        report["per_k"] = [{"k": s.k, "a_k": s.a, "b_k": s.b, "error": s.error} for s in slopes]
        report["fit"] = decay.to_dict()
    rows = zip(x.tolist(), y.tolist(), np.asarray(fitted).tolist(), (y - fitted).tolist())
    text = _dump(report)
    _emit(args, "fit.json", text)
    _emit(args, "fitted.csv", to_csv(["x", "y", "fitted", "residual"], rows))
    sys.stdout.write(text)
    return 0


def cmd_experiment(args, parser) -> int:
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            parser.error(f"--set expects key=value, got {item!r}")
        overrides[key] = value
    spec = ExperimentSpec(args.name, args.seed, overrides)
    out_dir = args.out_dir if args.out_dir is not None else "results"
    report = run_experiment(spec, out_dir)
    sys.stdout.write(_dump(report.to_dict()))
    return 0


def cmd_selfcheck(args) -> int:
    failed = 0
    for name, check in checks(max_n=args.max_n, identity_limit=args.identity_limit):
        try:
            check()
            print(f"PASS {name}")
        except AssertionError as exc:
            failed += 1
            print(f"FAIL {name}: {exc}")
    return 1 if failed else 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="germantank", description="German Tank Problem toolkit")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (64-bit unsigned)")
    parser.add_argument("--out-dir", default=None, help="directory for output files")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", help="exact PMF table of the sample max or spread")
    p.add_argument("--variable", choices=[v.value for v in Variable], required=True)
    p.add_argument("--n", type=int, help="population size N")
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("estimate", help="estimate N from observed serials")
    p.add_argument("--serials", help="comma-separated serial numbers")
    p.add_argument("--file", help="file of serials (comma or newline separated); '-' for stdin")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.KNOWN_MIN.value)
    p.add_argument("--known-min", type=int, default=1)
    p.add_argument("--round", choices=["none", "nearest", "ceil"], default="none")

    p = sub.add_parser("simulate", help="seeded Monte-Carlo trials")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--n-range", type=_range, default=(100, 2000))
    p.add_argument("--k-range", type=_range, default=(10, 50))
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("regress", help="fit a model to a CSV produced by simulate/experiment")
    p.add_argument("--input", help="CSV path ('-' or omitted for stdin)")
    p.add_argument("--model", choices=["simple", "log", "power", "per-k"], default="simple")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--no-intercept", action="store_true")

    p = sub.add_parser("experiment", help="run a reproduction recipe")
    p.add_argument("name", choices=list(PARAMETERS))
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a recipe parameter")

    p = sub.add_parser("selfcheck", help="run the exact-arithmetic invariant suite")
    p.add_argument("--max-n", type=int, default=25)
    p.add_argument("--identity-limit", type=int, default=200)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "pmf":
            return cmd_pmf(args)
        if args.command == "estimate":
            return cmd_estimate(args, parser)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "regress":
            return cmd_regress(args)
        if args.command == "experiment":
            return cmd_experiment(args, parser)
        return cmd_selfcheck(args)
    except (GermanTankError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
