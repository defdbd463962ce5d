"""Screening rules, KKT checks and path-start computation.

The production rules (group + variable screening with KKT repair hooks)
consume the gradient at the previous path point; the "theoretical" rules
take the gradient at the target point itself and are exact, which makes
them test oracles rather than something a solver could run.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .model import PenaltySpec, loss_and_gradient
from .norms import (asgl_group_constants, sgl_group_constants, sgl_norm,
                    sgl_dual_norm, soft_threshold)

RULES = ("dfr_sgl", "dfr_asgl", "sparsegl", "gap_safe_sequential", "none")


def _group_stats(grad, groups, eps):
    return kernels.grouped_epsilon_norms(
        np.asarray(grad, dtype=np.float64), groups.indices, groups.indptr,
        np.asarray(eps, dtype=np.float64))


def _scales_for(spec, groups, beta_prev):
    """(scale_g, eps_g) pairs: tau-based for SGL, gamma-based for aSGL."""
    if spec.adaptive:
        return asgl_group_constants(beta_prev, groups, spec)
    return sgl_group_constants(spec.alpha, groups.sizes)


# ---------------------------------------------------------------------------
# path start


def path_start_sgl(design, spec, family):
    """Smallest lambda with an all-zero solution: ||grad f(0)||_sgl*."""
    grad0 = loss_and_gradient(design, np.zeros(design.p), family)[1]
    if not np.any(grad0):
        return 0.0
    return sgl_dual_norm(grad0, design.groups,
                         PenaltySpec(spec.alpha))


def _asgl_group_start(c_g, v_g, w_g, alpha):
    """Largest root of ||S(c_g, lam*alpha*v_g)||^2 = p_g w_g^2 (1-alpha)^2 lam^2.

    The left-minus-right function h is strictly decreasing for lam > 0
    (for alpha < 1), positive at 0 and negative once everything is
    thresholded, so the root is isolated and bracketed.
    """
    cab = np.abs(np.asarray(c_g, dtype=np.float64))
    if not cab.any():
        return 0.0
    p_g = cab.size
    if alpha >= 1.0:
        return float(np.max(cab / v_g))
    if alpha <= 0.0:
        return float(np.linalg.norm(cab) / (w_g * np.sqrt(p_g)))
    gsq = p_g * (w_g ** 2) * ((1.0 - alpha) ** 2)

    def h(lam):
        s = np.maximum(cab - lam * alpha * v_g, 0.0)
        return float(s @ s) - gsq * lam * lam

    hi = float(np.max(cab / (alpha * v_g)))
    if h(hi) >= 0.0:  # numerically flat: all mass thresholded exactly at hi
        return hi
    return float(brentq(h, 0.0, hi, xtol=1e-15, rtol=1e-12, maxiter=200))


def path_start_asgl(design, spec, family="linear"):
    """Path start for the adaptive norm via the per-group piecewise
    quadratic in lambda; c is the negated gradient at zero."""
    grad0 = loss_and_gradient(design, np.zeros(design.p), family)[1]
    c = -grad0
    groups = design.groups
    v = spec.variable_weights(groups.p)
    w = spec.group_weights(groups.m)
    lam = 0.0
    for g in range(groups.m):
        mem = groups.members(g)
        lam = max(lam, _asgl_group_start(c[mem], v[mem], w[g], spec.alpha))
    return lam


# ---------------------------------------------------------------------------
# DFR rules


def dfr_group_screen(grad_prev, lambda_k, lambda_next, spec, groups,
                     beta_prev=None):
    """Candidate groups C_g: eps-norm of the group gradient above
    scale_g * (2*lambda_next - lambda_k).

    scale_g/eps_g are (tau_g, eps_g) for plain SGL and (gamma_g, eps'_g)
    computed from the previous solution for the adaptive norm.  A negative
    threshold (possible on coarse grids) retains every group with a
    nonzero gradient statistic.
    """
    scale, eps = _scales_for(spec, groups, beta_prev)
    stats = _group_stats(grad_prev, groups, eps)
    thr = scale * (2.0 * lambda_next - lambda_k)
    return np.flatnonzero(stats > thr).astype(np.intp)


def dfr_variable_screen(grad_prev, lambda_k, lambda_next, spec, groups,
                        candidate_groups, active_vars_prev):
    """Candidate variables C_v inside C_g, previously-active excluded:
    |grad_i| > alpha * v_i * (2*lambda_next - lambda_k)."""
    grad_prev = np.asarray(grad_prev, dtype=np.float64)
    v = spec.variable_weights(groups.p)
    cand = groups.vars_of(candidate_groups)
    if cand.size == 0:
        return cand
    keep = np.ones(groups.p, dtype=bool)
    keep[np.asarray(active_vars_prev, dtype=np.intp)] = False
    cand = cand[keep[cand]]
    thr = spec.alpha * v[cand] * (2.0 * lambda_next - lambda_k)
    return np.sort(cand[np.abs(grad_prev[cand]) > thr])


def kkt_check(grad_next, lambda_next, spec, groups, excluded, beta=None):
    """Variables among ``excluded`` violating the zero-coefficient
    optimality condition |S(grad_i, lam (1-a) w_g sqrt(p_g))| > lam a v_i.

    That per-variable condition takes the most favourable value of the
    group-norm subgradient independently for every coordinate, so it can
    accept points that are not stationary for the full problem.  If
    ``beta`` (the current solution) is supplied, two sharper tests close
    that gap:

    - a zero variable in an *active* group gets |grad_i| > lam a v_i
      (the l2-norm subgradient of an active group vanishes at a zero
      coordinate, leaving no slack), and
    - a fully zero group must keep its aggregated budget,
      ||S(grad_g, lam a v_g)||_2 <= lam (1-a) w_g sqrt(p_g); when that
      fails, the excluded members contributing to the excess are flagged
      (all excluded members if none of them contributes individually).
    """
    excluded = np.asarray(excluded, dtype=np.intp)
    if excluded.size == 0:
        return excluded
    grad_next = np.asarray(grad_next, dtype=np.float64)
    v = spec.variable_weights(groups.p)
    w = spec.group_weights(groups.m)
    gid = groups.group_of[excluded]
    group_thr = lambda_next * (1.0 - spec.alpha) * w[gid] * \
        groups.sqrt_sizes[gid]
    active = None
    if beta is not None:
        active = groups.group_l2_norms(np.asarray(beta, dtype=np.float64)) > 0
        group_thr = np.where(active[gid], 0.0, group_thr)
    inner = np.abs(soft_threshold(grad_next[excluded], group_thr))
    viol = excluded[inner > lambda_next * spec.alpha * v[excluded]]
    if active is not None and spec.alpha < 1.0:
        st = soft_threshold(grad_next, lambda_next * spec.alpha * v)
        budget = lambda_next * (1.0 - spec.alpha) * w * groups.sqrt_sizes
        bad = np.flatnonzero(~active & (groups.group_l2_norms(st) > budget))
        if bad.size:
            mask = np.zeros(groups.p, dtype=bool)
            mask[excluded] = True
            for g in bad:
                mem = groups.members(g)
                out = mem[mask[mem]]
                cand = out[st[out] != 0.0]
                viol = np.union1d(viol, cand if cand.size else out)
    return np.sort(np.asarray(viol, dtype=np.intp))


# ---------------------------------------------------------------------------
# comparator rules


def sparsegl_group_screen(grad_prev, lambda_k, lambda_next, alpha, groups):
    """Retained groups under the single-layer group rule
    ||S(grad_g, lambda_k*alpha)||_2 > sqrt(p_g)(1-alpha)(2 lambda_next - lambda_k)."""
    st = soft_threshold(np.asarray(grad_prev, dtype=np.float64),
                        lambda_k * alpha)
    stats = groups.group_l2_norms(st)
    thr = groups.sqrt_sizes * (1.0 - alpha) * (2.0 * lambda_next - lambda_k)
    return np.flatnonzero(stats > thr).astype(np.intp)


def sparsegl_kkt_check(grad_next, lambda_next, alpha, groups,
                       excluded_groups):
    """Group-level first-order check: violation when
    ||S(grad_g, lambda*alpha)||_2 > sqrt(p_g)(1-alpha)*lambda."""
    excluded_groups = np.asarray(excluded_groups, dtype=np.intp)
    if excluded_groups.size == 0:
        return excluded_groups
    st = soft_threshold(np.asarray(grad_next, dtype=np.float64),
                        lambda_next * alpha)
    stats = groups.group_l2_norms(st)[excluded_groups]
    thr = groups.sqrt_sizes[excluded_groups] * (1.0 - alpha) * lambda_next
    return np.sort(excluded_groups[stats > thr])


def gap_safe_screen_sequential(design, beta_prev, lambda_next, alpha, groups):
    """GAP safe sphere screening (sequential variant, linear family only).

    Internally rescales to the unit-loss convention (lambda' = n*lambda)
    where the dual formulas live: dual point Theta_c = r/max(lambda',
    ||X'r||_sgl*), radius sqrt(2*gap)/lambda'.  Returns (keep_vars,
    keep_groups); discarded variables are guaranteed zero at the optimum.
    """
    X, y = design.X, design.y
    n = y.size
    beta_prev = np.asarray(beta_prev, dtype=np.float64)
    lam_u = n * lambda_next
    spec_plain = PenaltySpec(alpha)

    resid = y - X @ beta_prev
    xtr = X.T @ resid
    dual_val = sgl_dual_norm(xtr, groups, spec_plain) if np.any(xtr) else 0.0
    scale = max(lam_u, dual_val)
    theta = resid / scale

    primal = 0.5 * float(resid @ resid) + \
        lam_u * sgl_norm(beta_prev, groups, spec_plain)
    dvec = theta - y / lam_u
    dual = 0.5 * float(y @ y) - 0.5 * lam_u ** 2 * float(dvec @ dvec)
    gap = max(primal - dual, 0.0)
    radius = np.sqrt(2.0 * gap) / lam_u

    xt_theta = xtr / scale
    col_norms = np.sqrt(np.einsum("ij,ij->j", X, X))

    keep_groups = []
    for g in range(groups.m):
        mem = groups.members(g)
        xg = xt_theta[mem]
        spec_norm = np.linalg.norm(X[:, mem], 2)
        amax = float(np.max(np.abs(xg)))
        if amax > alpha:
            t_g = float(np.linalg.norm(soft_threshold(xg, alpha))) + \
                radius * spec_norm
        else:
            t_g = max(amax + radius * spec_norm - alpha, 0.0)
        if not t_g < (1.0 - alpha) * groups.sqrt_sizes[g]:
            keep_groups.append(g)
    keep_groups = np.asarray(keep_groups, dtype=np.intp)

    cand = groups.vars_of(keep_groups)
    if cand.size:
        ok = ~(np.abs(xt_theta[cand]) + radius * col_norms[cand] < alpha)
        cand = cand[ok]
    return np.sort(cand), keep_groups


# ---------------------------------------------------------------------------
# theoretical (exact-gradient) rules — oracles for tests


# Active groups sit exactly on the dual bound at an optimum, so the exact
# rules must resolve ties as "keep"; the relative slack absorbs solver
# residual in the gradient.
_EXACT_RULE_SLACK = 1e-6


def theoretical_group_screen(grad_next, lambda_next, spec, groups,
                             beta_next=None):
    """Exact group rule using the gradient at lambda_next itself."""
    scale, eps = _scales_for(spec, groups, beta_next)
    stats = _group_stats(grad_next, groups, eps)
    thr = scale * lambda_next * (1.0 - _EXACT_RULE_SLACK)
    return np.flatnonzero(stats >= thr).astype(np.intp)


def theoretical_variable_screen(grad_next, lambda_next, spec, groups,
                                candidate_groups):
    """Exact variable rule |grad_i| >= alpha * v_i * lambda_next within the
    candidate groups."""
    grad_next = np.asarray(grad_next, dtype=np.float64)
    v = spec.variable_weights(groups.p)
    cand = groups.vars_of(candidate_groups)
    if cand.size == 0:
        return cand
    thr = spec.alpha * v[cand] * lambda_next * (1.0 - _EXACT_RULE_SLACK)
    keep = np.abs(grad_next[cand]) >= thr
    return np.sort(cand[keep])
