"""Norms underlying the sparse-group lasso and its screening rules.

The central object is the eps-norm: for eps in [0,1] and x != 0 it is the
unique q >= 0 solving sum_i (|x_i| - (1-eps) q)_+^2 = (eps q)^2, recovering
the l-infinity norm at eps=0 and the l2 norm at eps=1.  Its dual is the
convex combination (1-eps)*l1 + eps*l2, which is exactly the shape of each
group's contribution to the SGL norm; that identity is what makes the dual
norm of SGL a groupwise maximum of eps-norms.
"""

from __future__ import annotations

import numpy as np

from . import kernels


def epsilon_norm(x, eps):
    """eps-norm of a vector (l-infinity at eps=0, l2 at eps=1).

    O(d log d): sort |x| descending, then solve a quadratic on each
    candidate support interval.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("epsilon_norm needs a nonempty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("epsilon_norm requires finite input")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    # exact endpoint semantics regardless of kernel backend
    if eps == 0.0:
        return float(np.max(np.abs(x)))
    if eps == 1.0:
        return float(np.sqrt(np.dot(x, x)))
    return float(kernels.epsilon_norm(x, float(eps)))


def soft_threshold(a, b):
    """S(a, b) = sign(a) * (|a| - b)_+, elementwise on arrays."""
    if np.any(np.asarray(b) < 0):
        raise ValueError("threshold must be nonnegative")
    out = np.sign(a) * np.maximum(np.abs(a) - b, 0.0)
    if np.isscalar(a):
        return float(out)
    return out


def sgl_group_constants(alpha, sizes):
    """Per-group (tau_g, eps_g) for the plain SGL norm.

    tau_g = alpha + (1-alpha) sqrt(p_g) and eps_g = (tau_g - alpha)/tau_g,
    computed as group_part / (alpha + group_part) so the division is exact
    at the alpha=0 and alpha=1 endpoints.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    group_part = (1.0 - alpha) * np.sqrt(sizes)
    tau = alpha + group_part
    return tau, group_part / tau


def asgl_group_params(beta_g, v_g, w_g, alpha):
    """Group constants (gamma_g, eps'_g) of the adaptive SGL norm.

    For ||beta_g||_1 > 0,

        gamma_g = alpha ||v_g||_1
                  - (alpha/||beta_g||_1) sum_{i != j} v_j |beta_i|
                  + (1-alpha) w_g sqrt(p_g),

    which collapses to alpha * (sum_i v_i|beta_i| / ||beta_g||_1) plus the
    group part; for beta_g = 0 the limit gamma_g = (alpha/p_g) sum_i v_i
    + (1-alpha) w_g sqrt(p_g) is used so screening can evaluate inactive
    groups.  eps'_g = (1-alpha) w_g sqrt(p_g) / gamma_g, clamped to [0,1].
    """
    beta_g = np.asarray(beta_g, dtype=np.float64).ravel()
    v_g = np.asarray(v_g, dtype=np.float64).ravel()
    if beta_g.size != v_g.size:
        raise ValueError("beta_g and v_g lengths differ")
    p_g = beta_g.size
    group_part = (1.0 - alpha) * w_g * np.sqrt(p_g)
    babs = np.abs(beta_g)
    b1 = float(babs.sum())
    if b1 > 0.0:
        # (v_g * babs).sum() rather than a dot product: with unit weights it
        # is then bitwise equal to b1, making the reduction to tau_g exact
        gamma = alpha * (float((v_g * babs).sum()) / b1) + group_part
    else:
        gamma = alpha * (float(v_g.sum()) / p_g) + group_part
    eps_prime = min(max(group_part / gamma, 0.0), 1.0)
    return float(gamma), float(eps_prime)


def asgl_group_constants(beta, groups, spec):
    """Vectors (gamma, eps') over all groups, evaluated at ``beta``.

    ``beta=None`` means the all-zero solution (every group takes its
    inactive-group limit value).
    """
    v = spec.variable_weights(groups.p)
    w = spec.group_weights(groups.m)
    gamma = np.empty(groups.m)
    eps = np.empty(groups.m)
    for g in range(groups.m):
        mem = groups.members(g)
        beta_g = np.zeros(mem.size) if beta is None else np.asarray(beta)[mem]
        gamma[g], eps[g] = asgl_group_params(beta_g, v[mem], w[g], spec.alpha)
    return gamma, eps


def sgl_norm(beta, groups, spec):
    """(Weighted) SGL norm:
    alpha sum_i v_i|beta_i| + (1-alpha) sum_g w_g sqrt(p_g) ||beta_g||_2."""
    beta = np.asarray(beta, dtype=np.float64).ravel()
    if beta.size != groups.p:
        raise ValueError("beta length does not match the partition")
    v = spec.variable_weights(groups.p)
    w = spec.group_weights(groups.m)
    l1_part = float(v @ np.abs(beta))
    l2_part = float((w * groups.sqrt_sizes) @ groups.group_l2_norms(beta))
    return spec.alpha * l1_part + (1.0 - spec.alpha) * l2_part


def sgl_dual_norm(xi, groups, spec):
    """Dual norm of the SGL norm: max_g scale_g^{-1} ||xi_g||_{eps_g}.

    scale_g is tau_g for plain SGL; for an adaptive spec the zero-solution
    group constants (gamma_g, eps'_g) are used, which is the form relevant
    at the path start.
    """
    xi = np.asarray(xi, dtype=np.float64).ravel()
    if xi.size != groups.p:
        raise ValueError("xi length does not match the partition")
    if spec.adaptive:
        scale, eps = asgl_group_constants(None, groups, spec)
    else:
        scale, eps = sgl_group_constants(spec.alpha, groups.sizes)
    stats = kernels.grouped_epsilon_norms(xi, groups.indices, groups.indptr,
                                          np.asarray(eps, dtype=np.float64))
    return float(np.max(stats / scale))
