"""Regularization-path driver: screening, restricted fits, KKT repair.

For each path point the chosen rule proposes candidate groups/variables
from the previous solution's gradient, the optimization set is the union
of candidates and previously-active variables, and a restricted fit runs
with a warm start.  Variables outside the optimization set are then vetted
by a KKT check; violators are added and the fit repeated until clean
(capped, with a full-space fallback).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .model import FitConfig, loss_and_gradient
from .screening import (RULES, dfr_group_screen, dfr_variable_screen,
                        gap_safe_screen_sequential, kkt_check,
                        path_start_asgl, path_start_sgl,
                        sparsegl_group_screen, sparsegl_kkt_check)
from .solver import fit_at

ACTIVITY_THRESHOLD = 1e-8
MAX_REPAIR_ROUNDS = 20


@dataclass
class PathConfig:
    path_length: int = 50
    min_frac: float = 0.1


@dataclass
class ScreenState:
    """Book-keeping for one path point."""

    candidate_groups: np.ndarray
    candidate_vars: np.ndarray
    active_vars: np.ndarray
    active_groups: np.ndarray
    optimization_set: np.ndarray
    kkt_violations: list = field(default_factory=list)
    fallback_full: bool = False


@dataclass
class PathSolution:
    lambdas: np.ndarray
    betas: list
    intercepts: np.ndarray
    screen_states: list
    timings: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    rule: str


def build_path(lambda1, config):
    """Log-linear grid lambda_k = lambda1 * min_frac^((k-1)/(l-1))."""
    if lambda1 <= 0:
        raise ValueError("lambda1 must be positive")
    l = config.path_length
    if l < 2:
        raise ValueError("path_length must be at least 2")
    if not 0.0 < config.min_frac <= 1.0:
        raise ValueError("min_frac must lie in (0, 1]")
    k = np.arange(l)
    return lambda1 * config.min_frac ** (k / (l - 1))


def _active_sets(beta, groups):
    av = np.flatnonzero(np.abs(beta) > ACTIVITY_THRESHOLD).astype(np.intp)
    ag = np.unique(groups.group_of[av]).astype(np.intp)
    return av, ag


def _fully_excluded_groups(groups, opt_set):
    in_set = np.zeros(groups.p, dtype=bool)
    in_set[opt_set] = True
    touched = np.unique(groups.group_of[opt_set]) if opt_set.size else \
        np.empty(0, dtype=np.intp)
    mask = np.ones(groups.m, dtype=bool)
    mask[touched] = False
    return np.flatnonzero(mask).astype(np.intp)


def fit_path(design, spec, family, rule, path_config=None, fit_config=None):
    """Fit the whole lambda path under the given screening rule.

    rule: one of dfr_sgl, dfr_asgl, sparsegl, gap_safe_sequential, none.
    The adaptive rules require a spec with weights; the SGL-only rules
    require a plain spec.  gap_safe_sequential is linear-family only.
    """
    path_config = path_config or PathConfig()
    fit_config = fit_config or FitConfig()
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    if rule == "gap_safe_sequential" and family != "linear":
        raise ValueError("gap_safe_sequential supports linear regression only")
    if rule == "dfr_asgl" and not spec.adaptive:
        raise ValueError("dfr_asgl needs adaptive weights in the spec")
    if rule in ("dfr_sgl", "sparsegl", "gap_safe_sequential") and spec.adaptive:
        raise ValueError(f"rule {rule} applies to the plain SGL penalty")

    groups = design.groups
    p, m = groups.p, groups.m
    if spec.adaptive:
        lambda1 = path_start_asgl(design, spec, family)
    else:
        lambda1 = path_start_sgl(design, spec, family)
    grid = build_path(lambda1, path_config)
    l = grid.size

    betas, states = [], []
    intercepts = np.zeros(l)
    timings = np.zeros(l)
    converged = np.ones(l, dtype=bool)
    iterations = np.zeros(l, dtype=np.int64)

    # lambda_1 = lambda_max: the solution is identically zero by definition
    t0 = time.perf_counter()
    beta = np.zeros(p)
    if rule == "none":
        state0 = ScreenState(np.arange(m, dtype=np.intp),
                             np.arange(p, dtype=np.intp),
                             np.empty(0, dtype=np.intp),
                             np.empty(0, dtype=np.intp),
                             np.arange(p, dtype=np.intp))
    else:
        empty = np.empty(0, dtype=np.intp)
        state0 = ScreenState(empty, empty, empty, empty, empty)
    betas.append(beta)
    states.append(state0)
    intercepts[0] = design.y_center
    timings[0] = time.perf_counter() - t0

    for k in range(1, l):
        t0 = time.perf_counter()
        lam_prev, lam = grid[k - 1], grid[k]
        beta_prev = betas[-1]
        av_prev, _ = _active_sets(beta_prev, groups)

        if rule == "none":
            cg = np.arange(m, dtype=np.intp)
            cv = np.arange(p, dtype=np.intp)
        else:
            grad_prev = loss_and_gradient(design, beta_prev, family)[1]
            if rule in ("dfr_sgl", "dfr_asgl"):
                cg = dfr_group_screen(grad_prev, lam_prev, lam, spec, groups,
                                      beta_prev)
                cv = dfr_variable_screen(grad_prev, lam_prev, lam, spec,
                                         groups, cg, av_prev)
            elif rule == "sparsegl":
                cg = sparsegl_group_screen(grad_prev, lam_prev, lam,
                                           spec.alpha, groups)
                cv = groups.vars_of(cg)
            else:  # gap_safe_sequential
                cv, cg = gap_safe_screen_sequential(design, beta_prev, lam,
                                                    spec.alpha, groups)

        opt = np.union1d(cv, av_prev).astype(np.intp)
        warm = np.zeros(p)
        warm[opt] = beta_prev[opt]
        res = fit_at(design, lam, spec, family, opt, warm, fit_config)
        iters_total = res.iterations
        violations = []
        fallback = False

        if rule != "none":
            for _ in range(MAX_REPAIR_ROUNDS):
                grad_now = loss_and_gradient(design, res.beta, family)[1]
                if rule == "sparsegl":
                    bad_groups = sparsegl_kkt_check(
                        grad_now, lam, spec.alpha, groups,
                        _fully_excluded_groups(groups, opt))
                    viol = groups.vars_of(bad_groups)
                else:
                    in_set = np.zeros(p, dtype=bool)
                    in_set[opt] = True
                    viol = kkt_check(grad_now, lam, spec, groups,
                                     np.flatnonzero(~in_set), res.beta)
                if viol.size == 0:
                    break
                violations.append(viol)
                opt = np.union1d(opt, viol).astype(np.intp)
                res = fit_at(design, lam, spec, family, opt, res.beta,
                             fit_config)
                iters_total += res.iterations
            else:
                fallback = True
                opt = np.arange(p, dtype=np.intp)
                res = fit_at(design, lam, spec, family, opt, res.beta,
                             fit_config)
                iters_total += res.iterations

        av, ag = _active_sets(res.beta, groups)
        betas.append(res.beta)
        states.append(ScreenState(cg, np.asarray(cv, dtype=np.intp), av, ag,
                                  opt, violations, fallback))
        intercepts[k] = res.intercept
        converged[k] = res.converged
        iterations[k] = iters_total
        timings[k] = time.perf_counter() - t0

    return PathSolution(grid, betas, intercepts, states, timings, converged,
                        iterations, rule)
