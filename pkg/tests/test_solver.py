import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from conftest import make_design
from oracles import lasso_cd
from sglscreen import (FitConfig, PenaltySpec, fit_at, kkt_check, objective,
                       path_start_sgl)

TIGHT = FitConfig(max_iter=50000, tol=1e-10)


def test_zero_solution_above_path_start():
    d = make_design(30, 16, [4, 4, 4, 4], seed=0)
    spec = PenaltySpec(0.95)
    lam1 = path_start_sgl(d, spec, "linear")
    res = fit_at(d, 1.001 * lam1, spec, "linear")
    assert res.converged
    assert_array_equal(res.beta, np.zeros(16))


def test_unpenalized_fit_matches_normal_equations():
    d = make_design(50, 20, [5, 5, 5, 5], seed=1)
    res = fit_at(d, 0.0, PenaltySpec(0.5), "linear", config=TIGHT)
    ref = np.linalg.lstsq(d.X, d.y, rcond=None)[0]
    assert res.converged
    assert_allclose(res.beta, ref, rtol=1e-4, atol=1e-6)


def test_alpha_one_matches_lasso_coordinate_descent():
    d = make_design(10, 20, [5, 5, 5, 5], seed=2)
    lam = 0.4 * path_start_sgl(d, PenaltySpec(1.0), "linear")
    res = fit_at(d, lam, PenaltySpec(1.0), "linear", config=TIGHT)
    ref = lasso_cd(d.X, d.y, lam)
    assert_allclose(res.beta, ref, rtol=0, atol=1e-5)


def test_objective_sequence_is_monotone():
    # rerunning with a growing iteration budget replays the same iterate
    # sequence, so the recorded objectives trace the internal trajectory
    d = make_design(25, 12, [4, 4, 4], seed=3)
    spec = PenaltySpec(0.8)
    lam = 0.3 * path_start_sgl(d, spec, "linear")
    objs = [fit_at(d, lam, spec, "linear",
                   config=FitConfig(max_iter=k, tol=0.0)).objective
            for k in range(1, 16)]
    diffs = np.diff(objs)
    assert np.all(diffs <= 1e-12 * (1.0 + np.abs(objs[:-1])))


def test_warm_start_reaches_same_objective():
    d = make_design(40, 18, [6, 6, 6], seed=4)
    spec = PenaltySpec(0.9)
    lam1 = path_start_sgl(d, spec, "linear")
    cold = fit_at(d, 0.3 * lam1, spec, "linear")
    coarse = fit_at(d, 0.5 * lam1, spec, "linear")
    warm = fit_at(d, 0.3 * lam1, spec, "linear", None, coarse.beta)
    assert abs(cold.objective - warm.objective) <= 10 * FitConfig().tol


def test_working_set_fit_matches_full_fit():
    d = make_design(40, 18, [6, 6, 6], seed=5)
    spec = PenaltySpec(0.9)
    lam = 0.3 * path_start_sgl(d, spec, "linear")
    full = fit_at(d, lam, spec, "linear", config=TIGHT)
    support = np.flatnonzero(np.abs(full.beta) > 1e-10)
    excluded = np.setdiff1d(np.arange(18), support)
    # the no-screen optimum leaves no KKT violation among the rest
    grad = -(d.X.T @ (d.y - d.X @ full.beta)) / d.n
    assert kkt_check(grad, lam, spec, d.groups, excluded, full.beta).size == 0
    restricted = fit_at(d, lam, spec, "linear", support, config=TIGHT)
    assert abs(restricted.objective - full.objective) <= 10 * TIGHT.tol
    dist = np.linalg.norm(d.X @ (restricted.beta - full.beta))
    assert dist <= 1e-3


def test_beta_is_exactly_zero_outside_working_set():
    d = make_design(30, 15, [5, 5, 5], seed=6)
    ws = np.array([0, 1, 2, 7, 11])
    res = fit_at(d, 0.01, PenaltySpec(0.5), "linear", ws)
    outside = np.setdiff1d(np.arange(15), ws)
    assert_array_equal(res.beta[outside], np.zeros(outside.size))


def test_empty_working_set_returns_zero():
    d = make_design(20, 8, [4, 4], seed=7)
    res = fit_at(d, 0.1, PenaltySpec(0.5), "linear",
                 np.empty(0, dtype=int))
    assert res.converged
    assert_array_equal(res.beta, np.zeros(8))


def test_hitting_max_iter_reports_failed_convergence():
    d = make_design(40, 25, [5] * 5, seed=8)
    res = fit_at(d, 1e-8, PenaltySpec(0.5), "linear",
                 config=FitConfig(max_iter=2, tol=1e-14))
    assert not res.converged
    assert res.iterations == 2
    assert np.all(np.isfinite(res.beta))


def test_logistic_fit_runs_and_descends():
    d = make_design(60, 12, [4, 4, 4], seed=9, family="logistic")
    spec = PenaltySpec(0.9)
    lam = 0.5 * path_start_sgl(d, spec, "logistic")
    res = fit_at(d, lam, spec, "logistic")
    assert res.converged
    assert res.objective <= objective(d, np.zeros(12), lam, spec, "logistic")


def test_adaptive_weights_change_the_fit():
    d = make_design(30, 12, [4, 4, 4], seed=10)
    lam = 0.2 * path_start_sgl(d, PenaltySpec(0.9), "linear")
    plain = fit_at(d, lam, PenaltySpec(0.9), "linear", config=TIGHT)
    heavy = PenaltySpec(0.9, v=np.full(12, 5.0), w=np.full(3, 5.0))
    shrunk = fit_at(d, lam, heavy, "linear", config=TIGHT)
    assert np.linalg.norm(shrunk.beta, 1) < np.linalg.norm(plain.beta, 1)


def test_intercept_passthrough():
    d = make_design(30, 8, [4, 4], seed=11)
    res = fit_at(d, 0.05, PenaltySpec(0.5), "linear")
    assert res.intercept == d.y_center


def test_input_validation():
    d = make_design(20, 8, [4, 4], seed=12)
    with pytest.raises(ValueError):
        fit_at(d, -0.1, PenaltySpec(0.5), "linear")
    with pytest.raises(ValueError):
        fit_at(d, 0.1, PenaltySpec(0.5), "linear", np.array([0, 9]))
    warm = np.zeros(8)
    warm[5] = 1.0
    with pytest.raises(ValueError):
        fit_at(d, 0.1, PenaltySpec(0.5), "linear", np.array([0, 1]), warm)
    with pytest.raises(ValueError):
        fit_at(d, 0.1, PenaltySpec(0.5), "linear", None, np.zeros(5))
