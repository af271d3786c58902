"""Least squares for models that are linear in their parameters.

Problems here have at most three feature columns, so the normal equations
are solved directly.  Before solving, the Gram matrix is rescaled to unit
diagonal; if the condition number of that rescaled matrix exceeds
``CONDITION_LIMIT`` the design is reported as singular instead of returning
meaningless coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, InsufficientData, SingularDesign

CONDITION_LIMIT = 1e12
INTERCEPT = "intercept"


@dataclass(frozen=True)
class DesignMatrix:
    """Named feature columns plus a response; include an ``intercept`` column explicitly."""

    features: Dict[str, np.ndarray]
    response: np.ndarray

    def __post_init__(self):
        rows = len(self.response)
        if not self.features:
            raise InsufficientData("design has no feature columns")
        for name, col in self.features.items():
            if len(col) != rows:
                raise InsufficientData(f"column {name!r} has {len(col)} rows, expected {rows}")
        if rows < len(self.features):
            raise InsufficientData(f"{rows} rows cannot determine {len(self.features)} coefficients")

    @classmethod
    def build(
        cls,
        response: Sequence[float],
        features: Mapping[str, Sequence[float]],
        intercept: bool = False,
    ) -> "DesignMatrix":
        y = np.asarray(response, dtype=float)
        cols = {name: np.asarray(col, dtype=float) for name, col in features.items()}
        if intercept:
            cols[INTERCEPT] = np.ones(len(y))
        return cls(cols, y)

    @property
    def rows(self) -> int:
        return len(self.response)

    def matrix(self) -> np.ndarray:
        return np.column_stack(list(self.features.values()))


@dataclass(frozen=True)
class RegressionFit:
    coefficients: Dict[str, float]
    residual_sum_squares: float
    r_squared: float
    rmse: float
    model_label: str
    n_obs: int
    derived: Dict[str, float] = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.coefficients[name]

    def predict(self, features: Mapping[str, Sequence[float]]) -> np.ndarray:
        total = 0.0
        for name, coef in self.coefficients.items():
            col = 1.0 if name == INTERCEPT and name not in features else np.asarray(features[name], float)
            total = total + coef * col
        return np.asarray(total, dtype=float)

    def to_dict(self) -> dict:
        return {
            "model": self.model_label,
            "coefficients": dict(self.coefficients),
            "derived": dict(self.derived),
            "residual_sum_squares": self.residual_sum_squares,
            "r_squared": self.r_squared,
            "rmse": self.rmse,
            "n_obs": self.n_obs,
        }


def _diagnostics(y: np.ndarray, fitted: np.ndarray, centered: bool):
    resid = y - fitted
    rss = math.fsum(resid * resid)
    if centered:
        dev = y - y.mean()
        tss = math.fsum(dev * dev)
    else:
        tss = math.fsum(y * y)
    r2 = 1.0 - rss / tss if tss > 0 else (1.0 if rss == 0 else -math.inf)
    return rss, r2, math.sqrt(rss / len(y))


def fit_simple(pairs: Sequence[Tuple[float, float]], label: str = "y = a x + b") -> RegressionFit:
    """Best-fit line y = a x + b from the explicit 2x2 inverse."""
    if len(pairs) < 2:
        raise InsufficientData("need at least two (x, y) pairs")
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if np.all(x == x[0]):
        raise SingularDesign("all x values are equal; the slope is not identifiable")
    count = float(len(x))
    sx, sy = math.fsum(x), math.fsum(y)
    sxx, sxy = math.fsum(x * x), math.fsum(x * y)
    det = sxx * count - sx * sx
    if det <= 0:
        raise SingularDesign("x values carry no numerical variation")
    a = (count * sxy - sx * sy) / det
    b = (sxx * sy - sx * sxy) / det
    rss, r2, rmse = _diagnostics(y, a * x + b, centered=True)
    return RegressionFit({"a": a, "b": b}, rss, r2, rmse, f"{label} [centered R^2]", len(x))


def fit_linear(design: DesignMatrix, label: Optional[str] = None) -> RegressionFit:
    """Solve (X^T X) c = X^T y for the coefficient vector c."""
    X = design.matrix()
    y = design.response
    gram = X.T @ X
    rhs = X.T @ y
    diag = np.diag(gram)
    if np.any(diag <= 0) or not np.all(np.isfinite(gram)):
        raise SingularDesign("a feature column is identically zero or non-finite")
    scale = 1.0 / np.sqrt(diag)
    scaled = gram * np.outer(scale, scale)
    cond = np.linalg.cond(scaled)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularDesign(f"normal equations are singular (condition number {cond:.3g})")
    coef = scale * np.linalg.solve(scaled, scale * rhs)
    names = list(design.features)
    centered = INTERCEPT in design.features
    rss, r2, rmse = _diagnostics(y, X @ coef, centered)
    if label is None:
        label = "y ~ " + " + ".join(names)
    label = f"{label} [{'centered' if centered else 'uncentered'} R^2]"
    return RegressionFit(dict(zip(names, coef.tolist())), rss, r2, rmse, label, design.rows)


def log_model_design(n_true: Sequence[float], m: Sequence[float], k: Sequence[float]) -> DesignMatrix:
    """Response log N with features log m and 1/k and no intercept."""
    n_true, m, k = (np.asarray(v, dtype=float) for v in (n_true, m, k))
    if np.any(n_true < 1) or np.any(m < 1) or np.any(k < 1):
        raise DomainError("log model needs N, m, k >= 1")
    return DesignMatrix({"a": np.log(m), "b": 1.0 / k}, np.log(n_true))


def fit_log_model_arrays(n_true, m, k) -> RegressionFit:
    return fit_linear(log_model_design(n_true, m, k), label="log N = a log m + b / k")


def fit_log_model(records) -> RegressionFit:
    """Fit log N = a log m + b/k over simulated trial records."""
    return fit_log_model_arrays(
        [r.n_true for r in records], [r.m for r in records], [r.k for r in records]
    )


def predict_log_model(fit: RegressionFit, m, k) -> np.ndarray:
    """The population size implied by a fitted log model: exp(a log m + b/k)."""
    m = np.asarray(m, dtype=float)
    k = np.asarray(k, dtype=float)
    return np.exp(fit["a"] * np.log(m) + fit["b"] / k)


def fit_naive_ratio(n_true, m, k) -> RegressionFit:
    """Fit N - m = a (m/k) + b."""
    n_true, m, k = (np.asarray(v, dtype=float) for v in (n_true, m, k))
    return fit_simple(list(zip(m / k, n_true - m)), label="N - m = a (m/k) + b")


def predict_naive_ratio(fit: RegressionFit, m, k) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    k = np.asarray(k, dtype=float)
    return m + fit["a"] * m / k + fit["b"]


def fit_power_law(pairs: Sequence[Tuple[float, float]]) -> RegressionFit:
    """Fit y = B x^a through log y = a log x + b; ``derived['B'] = exp(b)``."""
    if any(x <= 0 or y <= 0 for x, y in pairs):
        raise DomainError("power-law fits need strictly positive x and y")
    fit = fit_simple([(math.log(x), math.log(y)) for x, y in pairs], label="log y = a log x + b")
    return RegressionFit(
        fit.coefficients,
        fit.residual_sum_squares,
        fit.r_squared,
        fit.rmse,
        fit.model_label,
        fit.n_obs,
        {"B": math.exp(fit["b"])},
    )


@dataclass(frozen=True)
class PerKSlope:
    """Implied relation N = a m + b at one fixed k; ``error`` is set when the fit failed."""

    k: int
    a: float
    b: float
    fit: Optional[RegressionFit]
    error: Optional[str] = None


def per_k_slopes_arrays(
    n_true, m, k, k_values: Sequence[int], direction: str = "reverse"
) -> List[PerKSlope]:
    """Per-k fits of the linear relation between N and m.

    ``direction="reverse"`` regresses m on N (the simulated dependence, whose
    conditional mean is exactly linear) and inverts the line to N = a m + b.
    ``direction="direct"`` regresses N on m as written, which suffers from
    regression dilution when m is noisy at small k.
    """
    if direction not in ("reverse", "direct"):
        raise ValueError(f"unknown direction {direction!r}")
    n_true, m, k = (np.asarray(v) for v in (n_true, m, k))
    out = []
    for kv in k_values:
        mask = k == kv
        if direction == "reverse":
            pairs = list(zip(n_true[mask].tolist(), m[mask].tolist()))
        else:
            pairs = list(zip(m[mask].tolist(), n_true[mask].tolist()))
        try:
            fit = fit_simple(pairs, label=f"k={kv}: " + ("m = s N + t" if direction == "reverse" else "N = a m + b"))
        except (SingularDesign, InsufficientData) as exc:
            out.append(PerKSlope(int(kv), math.nan, math.nan, None, str(exc)))
            continue
        if direction == "reverse":
            slope, icept = fit["a"], fit["b"]
            if slope == 0:
                out.append(PerKSlope(int(kv), math.nan, math.nan, fit, "zero slope cannot be inverted"))
                continue
            out.append(PerKSlope(int(kv), 1.0 / slope, -icept / slope, fit))
        else:
            out.append(PerKSlope(int(kv), fit["a"], fit["b"], fit))
    return out


def fit_per_k_slopes(records, k_values: Sequence[int], direction: str = "reverse") -> List[PerKSlope]:
    return per_k_slopes_arrays(
        [r.n_true for r in records],
        [r.m for r in records],
        [r.k for r in records],
        k_values,
        direction,
    )


def fit_slope_decay(slopes: Sequence[PerKSlope]) -> RegressionFit:
    """Power-law fit of a(k) - 1 against k over the successful per-k entries."""
    pairs = [(s.k, s.a - 1.0) for s in slopes if s.error is None and s.a > 1.0]
    return fit_power_law(pairs)
