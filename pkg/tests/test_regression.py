import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from germantank import regression as reg
from germantank.errors import DomainError, InsufficientData, SingularDesign
from germantank.regression import DesignMatrix, fit_linear, fit_power_law, fit_simple
from germantank.simulator import SimulationConfig, run_trials


def grid_search(pairs, centre, half_width, steps=201):
    x = np.array([p[0] for p in pairs], float)
    y = np.array([p[1] for p in pairs], float)
    a_grid = np.linspace(centre[0] - half_width, centre[0] + half_width, steps)
    b_grid = np.linspace(centre[1] - half_width, centre[1] + half_width, steps)
    A, B = np.meshgrid(a_grid, b_grid, indexing="ij")
    err = ((y[None, None, :] - (A[..., None] * x + B[..., None])) ** 2).sum(-1)
    i, j = np.unravel_index(err.argmin(), err.shape)
    return a_grid[i], b_grid[j], a_grid[1] - a_grid[0]


def test_exact_line():
    fit = fit_simple([(0, 1), (1, 3), (2, 5)])
    assert fit["a"] == pytest.approx(2) and fit["b"] == pytest.approx(1)
    assert fit.residual_sum_squares == pytest.approx(0, abs=1e-24)


def test_symmetric_square():
    pairs = [(0, 0), (1, 1), (0, 1), (1, 0)]
    fit = fit_simple(pairs)
    a, b, step = grid_search(pairs, (0, 0), 2)
    assert fit["a"] == pytest.approx(0, abs=1e-12) and fit["b"] == pytest.approx(0.5)
    assert abs(a - fit["a"]) <= step and abs(b - fit["b"]) <= step


def test_singular_and_insufficient():
    with pytest.raises(SingularDesign):
        fit_simple([(3, 1), (3, 2)])
    with pytest.raises(InsufficientData):
        fit_simple([(3, 1)])
    x = np.arange(10.0)
    with pytest.raises(SingularDesign):
        fit_linear(DesignMatrix.build(2 * x, {"x": x, "x_again": x.copy()}))
    with pytest.raises(InsufficientData):
        fit_linear(DesignMatrix.build([1.0], {"x": [1.0], "z": [2.0]}))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=3, max_size=12))
def test_simple_matches_grid_search(pairs):
    xs = [p[0] for p in pairs]
    assume(max(xs) - min(xs) > 1.0)
    fit = fit_simple(pairs)
    a, b, step = grid_search(pairs, (fit["a"], fit["b"]), 1.0)
    assert abs(a - fit["a"]) <= step and abs(b - fit["b"]) <= step


def test_linear_matches_simple_and_lstsq():
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 100, 200)
    y = 3 * x - 7 + rng.normal(0, 5, 200)
    simple = fit_simple(list(zip(x, y)))
    lin = fit_linear(DesignMatrix.build(y, {"x": x}, intercept=True))
    assert lin["x"] == pytest.approx(simple["a"], abs=1e-9)
    assert lin["intercept"] == pytest.approx(simple["b"], abs=1e-9)
    X = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    assert [lin["x"], lin["intercept"]] == pytest.approx(coef.tolist(), abs=1e-9)
    assert lin.r_squared == pytest.approx(simple.r_squared)
    assert "centered" in lin.model_label


def test_diagnostics():
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 1, 50)
    y = x + rng.normal(0, 0.1, 50)
    fit = fit_simple(list(zip(x, y)))
    assert fit.rmse == pytest.approx(math.sqrt(fit.residual_sum_squares / 50))
    assert fit.r_squared <= 1
    noint = fit_linear(DesignMatrix.build(y, {"x": x}))
    assert "uncentered" in noint.model_label
    assert noint.r_squared == pytest.approx(1 - noint.residual_sum_squares / float(np.sum(y * y)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_first_order_optimality(seed, intercept):
    rng = np.random.default_rng(seed)
    x1, x2 = rng.uniform(1, 10, 30), rng.uniform(-5, 5, 30)
    y = 2 * x1 - x2 + rng.normal(0, 1, 30)
    design = DesignMatrix.build(y, {"x1": x1, "x2": x2}, intercept=intercept)
    fit = fit_linear(design)
    X = design.matrix()
    coef = np.array(list(fit.coefficients.values()))
    base = float(np.sum((y - X @ coef) ** 2))
    for i in range(len(coef)):
        for sign in (1, -1):
            bumped = coef.copy()
            bumped[i] += sign * 1e-4 * max(abs(coef[i]), 1.0)
            assert np.sum((y - X @ bumped) ** 2) >= base


def test_exact_recovery_three_features():
    rng = np.random.default_rng(2)
    f1, f2 = rng.uniform(0, 5, 40), rng.uniform(1, 3, 40)
    y = 0.5 * f1 - 2.0 * f2 + 4.0
    fit = fit_linear(DesignMatrix.build(y, {"f1": f1, "f2": f2}, intercept=True))
    assert fit.residual_sum_squares <= 1e-18 * float(np.sum(y * y))
    assert [fit["f1"], fit["f2"], fit["intercept"]] == pytest.approx([0.5, -2.0, 4.0], abs=1e-9)


def test_power_law_exact():
    fit = fit_power_law([(x, 3 * x**2) for x in (1, 2, 4, 8)])
    assert fit["a"] == pytest.approx(2, abs=1e-9)
    assert fit["b"] == pytest.approx(math.log(3), abs=1e-9)
    assert fit.derived["B"] == pytest.approx(3)
    with pytest.raises(DomainError):
        fit_power_law([(1, 1), (0, 2)])
    with pytest.raises(SingularDesign):
        fit_power_law([(5, 1), (5, 2)])


@pytest.mark.parametrize("k_min", [10, 50, 200])
def test_log_model_noiseless(k_min):
    ks = np.arange(k_min, 5 * k_min + 1)
    ms = np.linspace(100, 2000, 40)
    K, M = (g.ravel() for g in np.meshgrid(ks, ms))
    fit = reg.fit_log_model_arrays(M * (1 + 1 / K), M, K)
    # the only misfit is log(1 + b/k) ~ b/k, an O(1/k) effect on b
    assert abs(fit["a"] - 1) < 1e-3
    assert abs(fit["b"] - 1) < 1 / k_min


def test_log_model_error_shrinks_with_k():
    errs = []
    for k_min in (10, 50, 200):
        ks = np.arange(k_min, 5 * k_min + 1)
        K, M = (g.ravel() for g in np.meshgrid(ks, np.linspace(100, 2000, 40)))
        fit = reg.fit_log_model_arrays(M * (1 + 1 / K), M, K)
        errs.append(abs(fit["b"] - 1))
    assert errs[0] > errs[1] > errs[2]


def test_log_model_singular_on_one_point():
    with pytest.raises(SingularDesign):
        reg.fit_log_model_arrays([120, 120, 120], [100, 100, 100], [20, 20, 20])


def test_per_k_noiseless_recovers_slopes():
    ks, ms, ns = [], [], []
    for k in range(2, 9):
        for m in range(50, 500, 25):
            ks.append(k), ms.append(m), ns.append((1 + 1 / k) * m)
    for direction in ("reverse", "direct"):
        slopes = reg.per_k_slopes_arrays(ns, ms, ks, range(2, 9), direction)
        for s in slopes:
            assert s.a == pytest.approx(1 + 1 / s.k, abs=1e-9)
            assert s.b == pytest.approx(0, abs=1e-6)
    decay = reg.fit_slope_decay(slopes)
    assert decay["a"] == pytest.approx(-1, abs=1e-9)
    assert decay["b"] == pytest.approx(0, abs=1e-9)


def test_per_k_failure_is_per_entry():
    slopes = reg.per_k_slopes_arrays([10, 20, 30, 40], [5, 6, 7, 8], [2, 2, 3, 3], [2, 3, 4])
    assert slopes[0].error is None
    assert slopes[1].error is None
    assert slopes[2].error is not None and math.isnan(slopes[2].a)
    flat = reg.per_k_slopes_arrays([30, 40], [7, 7], [3, 3], [3])
    assert flat[0].error is not None


def test_direction_asymmetry():
    records = run_trials(SimulationConfig(5, 3000, (100, 2000), (1, 1))).records
    n = [r.n_true for r in records]
    m = [r.m for r in records]
    forward = fit_simple(list(zip(m, n)))
    reverse = fit_simple(list(zip(n, m)))
    assert forward["a"] * reverse["a"] == pytest.approx(reverse.r_squared, rel=1e-9)
    assert forward.r_squared == pytest.approx(reverse.r_squared, rel=1e-9)
    # N on m is shrunk far below the theoretical 2; m on N sits near 1/2
    assert forward["a"] < 1.0
    assert reverse["a"] == pytest.approx(0.5, abs=0.02)


def test_fit_log_model_from_records_matches_arrays():
    records = run_trials(SimulationConfig(6, 500, (100, 2000), (10, 50), n1=40)).records
    fit = reg.fit_log_model(records)
    again = reg.fit_log_model_arrays(
        [r.n_true for r in records], [r.sample.m_max - 39 for r in records], [r.k for r in records]
    )
    assert fit == again
