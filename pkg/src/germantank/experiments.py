"""Reproduction recipes for the regression experiments.

Each recipe runs a seeded simulation, writes its raw data as CSV, fits the
models it is about, and returns an :class:`ExperimentReport`.  All fits can
be recomputed from the CSV alone (see :func:`refit_from_csv`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from . import regression as reg
from .errors import InvalidParameter, UnknownExperiment
from .regression import RegressionFit
from .simulator import (
    SimulationConfig,
    averaged_max_experiment,
    birthday_experiment,
    derive_seed,
    run_trials,
)
from .tables import TRIAL_COLUMNS, normalized_max, read_columns, to_csv, trial_rows

SIM_DEFAULTS = {"trials": 10_000, "n_lo": 100, "n_hi": 2000, "k_lo": 10, "k_hi": 50}

PARAMETERS: Dict[str, Dict[str, object]] = {
    "naive-ratio-fit": dict(SIM_DEFAULTS),
    "fixed-k-forward": {"k": 1, "trials": 10_000, "n_lo": 100, "n_hi": 2000},
    "fixed-k-reverse": {"k": 1, "trials": 10_000, "n_lo": 100, "n_hi": 2000},
    # The figure's theory line N = 1.5 m - 1 and its fitted slope 1.496 both
    # correspond to k = 2, although its caption says k = 1.
    "averaged-max": {"k": 2, "points": 100, "trials_per_n": 100, "n_lo": 100, "n_hi": 2000},
    "log-model": dict(SIM_DEFAULTS),
    "sniff-k": {"k_lo": 2, "k_hi": 20, "trials_per_k": 5000, "n_lo": 100, "n_hi": 2000, "direction": "reverse"},
    "birthday": {"d_lo": 10_000, "d_hi": 100_000, "points": 10_000, "trials_per_point": 1},
}

DEFAULT_SEEDS = {
    "naive-ratio-fit": 19_411,
    "fixed-k-forward": 19_421,
    "fixed-k-reverse": 19_422,
    "averaged-max": 19_431,
    "log-model": 19_441,
    "sniff-k": 19_451,
    "birthday": 19_461,
}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    seed: Optional[int] = None
    overrides: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise UnknownExperiment(
                f"unknown experiment {self.name!r}; choose from {', '.join(PARAMETERS)}"
            )
        extra = set(self.overrides) - set(PARAMETERS[self.name])
        if extra:
            raise InvalidParameter(f"{self.name} does not take {sorted(extra)}")

    @property
    def resolved_seed(self) -> int:
        return DEFAULT_SEEDS[self.name] if self.seed is None else self.seed

    def params(self) -> Dict[str, object]:
        out = dict(PARAMETERS[self.name])
        for key, value in self.overrides.items():
            out[key] = type(PARAMETERS[self.name][key])(value)
        return out


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    fits: List[RegressionFit]
    data_path: Optional[Path]
    summary: str
    metrics: Dict[str, object] = field(default_factory=dict)

    def fit(self, label_prefix: str) -> RegressionFit:
        for f in self.fits:
            if f.model_label.startswith(label_prefix):
                return f
        raise KeyError(label_prefix)

    def to_dict(self) -> dict:
        return {
            "experiment": self.spec.name,
            "seed": self.spec.resolved_seed,
            "parameters": self.spec.params(),
            "data_path": None if self.data_path is None else self.data_path.name,
            "fits": [f.to_dict() for f in self.fits],
            "metrics": self.metrics,
            "summary": self.summary,
        }


# -- data generation ---------------------------------------------------------

def _simulate(seed: int, p: Mapping, k_range: Tuple[int, int]):
    config = SimulationConfig(seed, int(p["trials"]), (int(p["n_lo"]), int(p["n_hi"])), k_range)
    return run_trials(config).records


def _trial_table(records, extra: Optional[Dict[str, list]] = None):
    header = list(TRIAL_COLUMNS)
    rows = [list(r) for r in trial_rows(records)]
    for name, values in (extra or {}).items():
        header.append(name)
        for row, v in zip(rows, values):
            row.append(v)
    return header, rows


# -- fits from columns (shared by recipes and refit_from_csv) -----------------

def _split_mask(cols) -> np.ndarray:
    return np.array([s == "train" for s in cols["split"]])


def _fits_naive(cols) -> Tuple[List[RegressionFit], Dict[str, object]]:
    n = np.array(cols["n_true"], float)
    m = np.array(normalized_max(cols), float)
    k = np.array(cols["k"], float)
    train = _split_mask(cols)
    test = ~train
    naive = reg.fit_naive_ratio(n[train], m[train], k[train])
    logm = reg.fit_log_model_arrays(n[train], m[train], k[train])
    rmse_naive = float(np.sqrt(np.mean((reg.predict_naive_ratio(naive, m[test], k[test]) - n[test]) ** 2)))
    rmse_log = float(np.sqrt(np.mean((reg.predict_log_model(logm, m[test], k[test]) - n[test]) ** 2)))
    metrics = {
        "holdout_rmse_naive": rmse_naive,
        "holdout_rmse_log_model": rmse_log,
        "rmse_ratio_naive_over_log": rmse_naive / rmse_log,
        "naive_r_squared_train": naive.r_squared,
    }
    return [naive, logm], metrics


def _fits_fixed_k(cols, reverse: bool):
    n = cols["n_true"]
    m = normalized_max(cols)
    pairs = list(zip(n, m)) if reverse else list(zip(m, n))
    label = "m = a N + b" if reverse else "N = a m + b"
    return [reg.fit_simple(pairs, label=label)], {}


def _fits_averaged(cols):
    pairs = list(zip(cols["mean_m"], cols["n"]))
    return [reg.fit_simple(pairs, label="N = a mean_m + b")], {}


def _fits_log(cols):
    fit = reg.fit_log_model_arrays(cols["n_true"], normalized_max(cols), cols["k"])
    return [fit], {}


def _fits_sniff(cols, direction: str):
    ks = sorted(set(cols["k"]))
    slopes = reg.per_k_slopes_arrays(cols["n_true"], normalized_max(cols), cols["k"], ks, direction)
    decay = reg.fit_slope_decay(slopes)
    fits = [s.fit for s in slopes if s.fit is not None] + [decay]
    metrics = {
        "per_k": [
            {"k": s.k, "a_k": s.a, "b_k": s.b, "error": s.error} for s in slopes
        ]
    }
    return fits, metrics


def _fits_birthday(cols):
    return [reg.fit_power_law(list(zip(cols["d"], cols["mean_people"])))], {}


def refit_from_csv(name: str, path, params: Optional[Mapping] = None):
    """Recompute a recipe's fits from its emitted CSV."""
    cols = read_columns(path)
    params = dict(PARAMETERS[name], **(params or {}))
    if name == "naive-ratio-fit":
        return _fits_naive(cols)
    if name in ("fixed-k-forward", "fixed-k-reverse"):
        return _fits_fixed_k(cols, reverse=name == "fixed-k-reverse")
    if name == "averaged-max":
        return _fits_averaged(cols)
    if name == "log-model":
        return _fits_log(cols)
    if name == "sniff-k":
        return _fits_sniff(cols, str(params["direction"]))
    if name == "birthday":
        return _fits_birthday(cols)
    raise UnknownExperiment(name)


# -- recipes ----------------------------------------------------------------

def _columns(header, rows) -> Dict[str, list]:
    return {h: [row[i] for row in rows] for i, h in enumerate(header)}


def _naive(seed, p):
    records = _simulate(seed, p, (int(p["k_lo"]), int(p["k_hi"])))
    half = len(records) // 2
    split = ["train" if r.trial_index < half else "test" for r in records]
    header, rows = _trial_table(records, {"split": split})
    fits, metrics = _fits_naive(_columns(header, rows))
    summary = (
        f"naive N - m = a(m/k) + b: a={fits[0]['a']:.6g}, b={fits[0]['b']:.6g} "
        f"(exact formula has a=1, b=-1); log model a={fits[1]['a']:.6g}, b={fits[1]['b']:.6g}; "
        f"holdout RMSE naive={metrics['holdout_rmse_naive']:.4g} vs log model="
        f"{metrics['holdout_rmse_log_model']:.4g} (ratio {metrics['rmse_ratio_naive_over_log']:.3f})"
    )
    return header, rows, fits, metrics, summary


def _fixed_k(reverse: bool):
    def recipe(seed, p):
        k = int(p["k"])
        records = _simulate(seed, p, (k, k))
        header, rows = _trial_table(records)
        fits, metrics = _fits_fixed_k(_columns(header, rows), reverse)
        f = fits[0]
        if reverse:
            theory = (k / (k + 1), k / (k + 1))
            text = f"m on N at k={k}: slope {f['a']:.6g}, intercept {f['b']:.6g}; theory m = {theory[0]:.6g} N + {theory[1]:.6g}"
        else:
            theory = ((k + 1) / k, -1.0)
            text = f"N on m at k={k}: slope {f['a']:.6g}, intercept {f['b']:.6g}; theory N = {theory[0]:.6g} m - 1"
        metrics.update({"theory_slope": theory[0], "theory_intercept": theory[1]})
        return header, rows, fits, metrics, text

    return recipe


def _averaged(seed, p):
    k = int(p["k"])
    n_values = np.linspace(int(p["n_lo"]), int(p["n_hi"]), int(p["points"])).round().astype(int).tolist()
    pairs = averaged_max_experiment(seed, k, n_values, int(p["trials_per_n"]))
    header = ["mean_m", "n"]
    rows = [list(row) for row in pairs]
    fits, metrics = _fits_averaged(_columns(header, rows))
    theory = (k + 1) / k
    metrics.update({"theory_slope": theory, "theory_intercept": -1.0,
                    "slope_relative_error": abs(fits[0]["a"] - theory) / theory})
    text = f"N on averaged m at k={k}: slope {fits[0]['a']:.6g}, intercept {fits[0]['b']:.6g}; theory N = {theory:.6g} m - 1"
    return header, rows, fits, metrics, text


def _log(seed, p):
    records = _simulate(seed, p, (int(p["k_lo"]), int(p["k_hi"])))
    header, rows = _trial_table(records)
    fits, metrics = _fits_log(_columns(header, rows))
    text = f"log N = a log m + b/k: a={fits[0]['a']:.6g}, b={fits[0]['b']:.6g}; theory a = b = 1"
    return header, rows, fits, metrics, text


def _sniff(seed, p):
    records = []
    for k in range(int(p["k_lo"]), int(p["k_hi"]) + 1):
        sub = dict(p, trials=p["trials_per_k"])
        records.extend(_simulate(derive_seed(seed, k), sub, (k, k)))
    header, rows = _trial_table(records)
    fits, metrics = _fits_sniff(_columns(header, rows), str(p["direction"]))
    decay = fits[-1]
    text = (
        f"log(a(k) - 1) = {decay['a']:.4g} log k + {decay['b']:.4g}; "
        "theory slope -1, intercept 0 (a(k) = 1 + 1/k)"
    )
    return header, rows, fits, metrics, text


def _birthday(seed, p):
    pairs = birthday_experiment(seed, (int(p["d_lo"]), int(p["d_hi"])), int(p["points"]), int(p["trials_per_point"]))
    header = ["d", "mean_people"]
    rows = [list(row) for row in pairs]
    fits, metrics = _fits_birthday(_columns(header, rows))
    f = fits[0]
    text = (
        f"P = B D^a: a={f['a']:.6g}, b={f['b']:.6g} (B={f.derived['B']:.6g}); "
        f"theory a = 1/2, B = sqrt(pi/2) = {math.sqrt(math.pi / 2):.6g}"
    )
    return header, rows, fits, metrics, text


RECIPES: Dict[str, Callable] = {
    "naive-ratio-fit": _naive,
    "fixed-k-forward": _fixed_k(reverse=False),
    "fixed-k-reverse": _fixed_k(reverse=True),
    "averaged-max": _averaged,
    "log-model": _log,
    "sniff-k": _sniff,
    "birthday": _birthday,
}


def run_experiment(spec: ExperimentSpec, out_dir=None) -> ExperimentReport:
    """Run a recipe; with ``out_dir`` set, write ``<name>.csv`` and ``<name>.json`` there."""
    header, rows, fits, metrics, summary = RECIPES[spec.name](spec.resolved_seed, spec.params())
    data_path = None
    report = ExperimentReport(spec, fits, None, summary, metrics)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        data_path = out_dir / f"{spec.name}.csv"
        data_path.write_text(to_csv(header, rows))
        report.data_path = data_path
        (out_dir / f"{spec.name}.json").write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return report
