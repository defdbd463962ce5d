"""Adaptive penalty weights from the leading principal component.

v_i = 1/|q_{1i}|^{b1} and w_g = 1/||q_1^(g)||_2^{b2}, where q_1 is the
first right singular vector of the (standardized) design matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LOADING_FLOOR = 1e-10


@dataclass
class AdaptiveParams:
    b1: float = 0.1
    b2: float = 0.1

    def __post_init__(self):
        if self.b1 < 0 or self.b2 < 0:
            raise ValueError("exponents must be nonnegative")


def leading_right_singular_vector(X, tol=1e-10, max_iter=10000):
    """Power iteration on X'X; sign fixed so the largest-magnitude entry
    of the returned unit vector is positive."""
    p = X.shape[1]
    rng = np.random.default_rng(0)
    q = rng.standard_normal(p)
    q /= np.linalg.norm(q)
    for _ in range(max_iter):
        z = X.T @ (X @ q)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            raise ValueError("design matrix has rank zero")
        q_new = z / nz
        delta = np.linalg.norm(q_new - q)
        q = q_new
        if delta < tol:
            break
    pivot = int(np.argmax(np.abs(q)))
    if q[pivot] < 0:
        q = -q
    return q


def adaptive_weights(design, params):
    """Per-variable and per-group weights (v, w) from the first PC."""
    q = leading_right_singular_vector(design.X)
    loadings = np.maximum(np.abs(q), _LOADING_FLOOR)
    v = loadings ** (-params.b1)
    groups = design.groups
    gnorms = np.maximum(groups.group_l2_norms(q), _LOADING_FLOOR)
    w = gnorms ** (-params.b2)
    return v, w
