"""Single-lambda fits by proximal gradient descent with backtracking.

The solver minimizes f(beta) + lambda * ||beta||_sgl (weighted norm when
the spec carries adaptive weights) over vectors supported on a working
set.  Screening hands it small working sets; correctness does not depend
on the set as long as the KKT repair loop in pathfit vets the exclusions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import FitConfig, _loss_grad_raw, _loss_raw


@dataclass
class FitResult:
    beta: np.ndarray
    intercept: float
    iterations: int
    converged: bool
    objective: float


def _power_lipschitz(X, n):
    """Largest eigenvalue of X'X/n by power iteration (deterministic)."""
    p = X.shape[1]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(p)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(100):
        w = X.T @ (X @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        lam_new = float(v @ w)
        v = w / nw
        if abs(lam_new - lam) <= 1e-3 * lam_new:
            lam = lam_new
            break
        lam = lam_new
    return lam / n


def _restricted_partition(groups, ws):
    """CSR layout of the partition restricted to the working set ``ws``.

    Returns (indices, indptr, present_groups) where ``indices`` are
    positions within ``ws`` and ``present_groups`` maps each restricted
    group back to its original group id (so original sqrt(p_g) weights can
    be kept: the penalty is defined on the full vector, and variables
    outside the working set are merely constrained to zero).
    """
    gid = groups.group_of[ws]
    order = np.argsort(gid, kind="stable")
    sorted_gid = gid[order]
    present, counts = np.unique(sorted_gid, return_counts=True)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.intp)
    return order.astype(np.intp), indptr, present


def fit_at(design, lam, spec, family, working_set=None, warm=None,
           config=None):
    """Fit the penalized objective at one lambda on a working set.

    Stops when the relative iterate change ||b_{t+1}-b_t|| / max(||b_t||, 1)
    drops below ``config.tol``; hitting ``max_iter`` first is reported via
    ``converged=False``, never raised.
    """
    if config is None:
        config = FitConfig()
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    X, y, groups = design.X, design.y, design.groups
    n, p = X.shape

    if working_set is None:
        ws = np.arange(p, dtype=np.intp)
    else:
        ws = np.unique(np.asarray(working_set, dtype=np.intp))
        if ws.size and (ws[0] < 0 or ws[-1] >= p):
            raise ValueError("working set out of range")
    if warm is not None:
        warm = np.asarray(warm, dtype=np.float64).ravel()
        if warm.size != p:
            raise ValueError("warm start must be full length")
        outside = np.ones(p, dtype=bool)
        outside[ws] = False
        if np.any(warm[outside] != 0.0):
            raise ValueError("warm start has support outside the working set")

    v_full = spec.variable_weights(p)
    w_full = spec.group_weights(groups.m)

    if ws.size == 0:
        beta = np.zeros(p)
        obj = _loss_raw(X, y, beta, family)
        return FitResult(beta, design.y_center, 0, True, obj)

    Xw = np.ascontiguousarray(X[:, ws])
    ridx, rptr, present = _restricted_partition(groups, ws)
    # per-variable / per-group threshold bases (scaled by step*lam later);
    # group weights keep the ORIGINAL group sizes
    l1_base = lam * spec.alpha * v_full[ws]
    l2_base = lam * (1.0 - spec.alpha) * w_full[present] * \
        groups.sqrt_sizes[present]

    L = _power_lipschitz(Xw, n)
    if family == "logistic":
        L *= 0.25
    step = 1.0 / max(L, 1e-12)

    beta = warm[ws].copy() if (warm is not None and config.warm_start) \
        else np.zeros(ws.size)
    iterations = 0
    converged = False
    f_cur, grad = _loss_grad_raw(Xw, y, beta, family)
    for _ in range(config.max_iter):
        iterations += 1
        for _bt in range(config.max_backtrack):
            u = kernels.sgl_prox(beta - step * grad, step * l1_base,
                                 step * l2_base, ridx, rptr)
            d = u - beta
            dd = float(d @ d)
            f_new = _loss_raw(Xw, y, u, family)
            bound = f_cur + float(grad @ d) + dd / (2.0 * step)
            if f_new <= bound + 1e-15 * (1.0 + abs(f_cur)):
                break
            step *= config.backtracking_factor
        rel = np.sqrt(dd) / max(np.linalg.norm(beta), 1.0)
        beta = u
        if rel < config.tol:
            converged = True
            break
        f_cur, grad = _loss_grad_raw(Xw, y, beta, family)

    full = np.zeros(p)
    full[ws] = beta
    # objective with the original group weights (zeros outside ws add 0)
    norms_r = np.sqrt(np.add.reduceat(beta[ridx] * beta[ridx], rptr[:-1]))
    pen = spec.alpha * float(v_full[ws] @ np.abs(beta)) + \
        (1.0 - spec.alpha) * float(
            (w_full[present] * groups.sqrt_sizes[present]) @ norms_r)
    obj = _loss_raw(Xw, y, beta, family) + lam * pen
    return FitResult(full, design.y_center, iterations, converged, obj)
