"""Independent reference implementations the tests check against.

Everything here is deliberately written from the mathematical definitions
(bisection, convex programming, coordinate descent, finite differences)
rather than reusing package internals, so agreement is meaningful.
"""

import warnings

import numpy as np


def epsilon_norm_bisection(x, eps, tol=1e-13, max_iter=500):
    """Root of g(q) = sum_i (|x_i| - (1-eps) q)_+^2 - (eps q)^2 by bisection.

    g is positive at 0 for x != 0 and strictly decreasing until the root,
    so plain interval halving on [0, ||x||_1/(1-eps) + 1] converges; the
    smallest root is taken when eps = 0 leaves a flat zero region.
    """
    a = np.abs(np.asarray(x, dtype=np.float64)).ravel()
    if not a.any():
        return 0.0

    def g(q):
        r = np.maximum(a - (1.0 - eps) * q, 0.0)
        return float(r @ r) - (eps * q) ** 2

    lo = 0.0
    hi = float(a.sum()) / (1.0 - eps) + 1.0 if eps < 1.0 else float(a.sum()) + 1.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(hi, 1.0):
            break
    return 0.5 * (lo + hi)


def _norm_expr(x, alpha, v, w, sqrt_sizes, members):
    import cvxpy as cp

    l1 = cp.sum(cp.multiply(v, cp.abs(x)))
    l2 = sum(w[g] * sqrt_sizes[g] * cp.norm(x[mem], 2)
             for g, mem in enumerate(members))
    return alpha * l1 + (1.0 - alpha) * l2


def sgl_dual_norm_cvxpy(xi, groups, alpha, v=None, w=None):
    """Definitional dual norm sup { xi'x : ||x||_sgl <= 1 } as an SOCP."""
    import cvxpy as cp

    xi = np.asarray(xi, dtype=np.float64).ravel()
    p = xi.size
    v = np.ones(p) if v is None else np.asarray(v, dtype=np.float64)
    w = np.ones(groups.m) if w is None else np.asarray(w, dtype=np.float64)
    members = [groups.members(g) for g in range(groups.m)]
    x = cp.Variable(p)
    prob = cp.Problem(
        cp.Maximize(xi @ x),
        [_norm_expr(x, alpha, v, w, groups.sqrt_sizes, members) <= 1.0])
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def sgl_prox_cvxpy(z, t, alpha, v, w, groups):
    """argmin_u 0.5||u - z||^2 + t * ||u||_sgl via convex programming."""
    import cvxpy as cp

    z = np.asarray(z, dtype=np.float64).ravel()
    members = [groups.members(g) for g in range(groups.m)]
    u = cp.Variable(z.size)
    pen = _norm_expr(u, alpha, v, w, groups.sqrt_sizes, members)
    prob = cp.Problem(cp.Minimize(0.5 * cp.sum_squares(u - z) + t * pen))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # tight tolerances trip an
        # accuracy warning; the tests bound the achieved precision anyway
        prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12,
                   tol_feas=1e-12)
    return np.asarray(u.value, dtype=np.float64).ravel()


def asgl_gamma_double_sum(beta_g, v_g, w_g, alpha):
    """Group scaling constant by brute-force evaluation of the double sum
    gamma = alpha ||v||_1 - (alpha/||b||_1) sum_{i != j} v_j |b_i|
            + (1-alpha) w sqrt(p)."""
    beta_g = np.asarray(beta_g, dtype=np.float64).ravel()
    v_g = np.asarray(v_g, dtype=np.float64).ravel()
    p = beta_g.size
    b1 = float(np.abs(beta_g).sum())
    cross = 0.0
    for i in range(p):
        for j in range(p):
            if i != j:
                cross += v_g[j] * abs(beta_g[i])
    return (alpha * float(v_g.sum()) - alpha * cross / b1 +
            (1.0 - alpha) * w_g * np.sqrt(p))


def lasso_cd(X, y, lam, tol=1e-12, max_sweeps=20000):
    """Plain lasso coordinate descent on (1/2n)||y - X b||^2 + lam ||b||_1."""
    n, p = X.shape
    beta = np.zeros(p)
    r = y.copy()
    col_sq = np.einsum("ij,ij->j", X, X) / n
    for _ in range(max_sweeps):
        delta = 0.0
        for j in range(p):
            old = beta[j]
            rho = (X[:, j] @ r) / n + col_sq[j] * old
            new = np.sign(rho) * max(abs(rho) - lam, 0.0) / col_sq[j]
            if new != old:
                r -= X[:, j] * (new - old)
                beta[j] = new
                delta = max(delta, abs(new - old))
        if delta < tol:
            break
    return beta


def finite_diff_grad(fun, beta, h=1e-6):
    """Central finite-difference gradient of a scalar function."""
    beta = np.asarray(beta, dtype=np.float64)
    grad = np.empty_like(beta)
    for i in range(beta.size):
        e = np.zeros_like(beta)
        e[i] = h
        grad[i] = (fun(beta + e) - fun(beta - e)) / (2.0 * h)
    return grad


def lasso_strong_rule(grad_prev, lambda_k, lambda_next):
    """Reference lasso strong rule: keep i with |grad_i| > 2*l_next - l_k."""
    g = np.abs(np.asarray(grad_prev, dtype=np.float64))
    return np.flatnonzero(g > 2.0 * lambda_next - lambda_k)


def group_lasso_strong_rule(grad_prev, lambda_k, lambda_next, groups):
    """Reference group-lasso strong rule:
    keep g with ||grad_g||_2 > sqrt(p_g) (2*l_next - l_k)."""
    norms = groups.group_l2_norms(np.asarray(grad_prev, dtype=np.float64))
    thr = groups.sqrt_sizes * (2.0 * lambda_next - lambda_k)
    return np.flatnonzero(norms > thr)
