"""Data model: grouped designs, penalty specification, losses and prox.

Everything downstream (solver, screening rules, path driver) consumes the
types defined here.  Losses use the 1/(2n) (linear) and 1/n (logistic)
scalings so that the gradient at zero is -X'y/n for the linear family,
which fixes the lambda scale used by every screening rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from . import kernels

FAMILIES = ("linear", "logistic")


class GroupPartition:
    """A partition of the columns ``0..p-1`` into m disjoint groups.

    Stored in CSR-like form (``indices`` lists members group by group,
    ``indptr`` marks boundaries) so the kernels can walk arbitrary,
    not necessarily contiguous, groups.
    """

    def __init__(self, group_lists):
        members = [np.asarray(g, dtype=np.intp).ravel() for g in group_lists]
        if not members:
            raise ValueError("partition needs at least one group")
        for k, g in enumerate(members):
            if g.size == 0:
                raise ValueError(f"group {k} is empty")
        indices = np.concatenate(members)
        p = indices.size
        if indices.min() < 0 or indices.max() >= p:
            raise ValueError("group indices out of range")
        seen = np.zeros(p, dtype=bool)
        seen[indices] = True
        if not seen.all():
            raise ValueError("groups must disjointly cover all columns")
        self.indices = indices
        self.indptr = np.concatenate(
            [[0], np.cumsum([g.size for g in members])]).astype(np.intp)
        self.sizes = np.diff(self.indptr).astype(np.int64)
        self.sqrt_sizes = np.sqrt(self.sizes.astype(np.float64))
        self.p = int(p)
        self.m = len(members)
        self.group_of = np.empty(p, dtype=np.intp)
        for g in range(self.m):
            self.group_of[self.members(g)] = g

    @classmethod
    def from_labels(cls, labels):
        """Build from a length-p array mapping column -> group label."""
        labels = np.asarray(labels).ravel()
        uniq = np.unique(labels)
        return cls([np.flatnonzero(labels == u) for u in uniq])

    @classmethod
    def from_sizes(cls, sizes):
        """Contiguous groups of the given sizes."""
        edges = np.concatenate([[0], np.cumsum(sizes)])
        return cls([np.arange(edges[k], edges[k + 1]) for k in range(len(sizes))])

    def members(self, g):
        return self.indices[self.indptr[g]:self.indptr[g + 1]]

    def vars_of(self, group_ids):
        """Sorted array of all variables belonging to the given groups."""
        if len(group_ids) == 0:
            return np.empty(0, dtype=np.intp)
        return np.sort(np.concatenate([self.members(g) for g in group_ids]))

    def group_l2_norms(self, x):
        """Per-group l2 norms of a length-p vector."""
        g = np.asarray(x, dtype=np.float64)[self.indices]
        return np.sqrt(np.add.reduceat(g * g, self.indptr[:-1]))


@dataclass
class GroupedDesign:
    """Design matrix, response and group structure (plus scaling records)."""

    X: np.ndarray
    y: np.ndarray
    groups: GroupPartition
    column_scales: np.ndarray = None
    y_center: float = 0.0

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        n, p = self.X.shape
        if self.y.size != n:
            raise ValueError("y length does not match the number of rows")
        if self.groups.p != p:
            raise ValueError("group partition does not cover the columns of X")
        if self.column_scales is None:
            self.column_scales = np.ones(p)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass
class PenaltySpec:
    """Penalty mixing parameter and optional adaptive weights.

    ``alpha`` in [0,1] mixes the l1 part (alpha) against the group-l2 part
    (1-alpha).  ``v`` (per variable) and ``w`` (per group) are the adaptive
    weights; leaving both as None denotes plain SGL (all ones).
    """

    alpha: float
    v: np.ndarray = None
    w: np.ndarray = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.v is not None:
            self.v = np.asarray(self.v, dtype=np.float64).ravel()
            if not np.all(np.isfinite(self.v)) or np.any(self.v <= 0):
                raise ValueError("variable weights must be positive and finite")
        if self.w is not None:
            self.w = np.asarray(self.w, dtype=np.float64).ravel()
            if not np.all(np.isfinite(self.w)) or np.any(self.w <= 0):
                raise ValueError("group weights must be positive and finite")

    @property
    def adaptive(self):
        return self.v is not None or self.w is not None

    def variable_weights(self, p):
        if self.v is None:
            return np.ones(p)
        if self.v.size != p:
            raise ValueError("variable weight length mismatch")
        return self.v

    def group_weights(self, m):
        if self.w is None:
            return np.ones(m)
        if self.w.size != m:
            raise ValueError("group weight length mismatch")
        return self.w


@dataclass
class FitConfig:
    """Solver settings (defaults follow the synthetic benchmark setup)."""

    max_iter: int = 5000
    tol: float = 1e-5
    backtracking_factor: float = 0.7
    max_backtrack: int = 100
    intercept: bool = True
    warm_start: bool = True


# ---------------------------------------------------------------------------
# losses


def _loss_raw(X, y, beta, family):
    n = y.size
    if family == "linear":
        r = y - X @ beta
        return 0.5 * float(r @ r) / n
    eta = X @ beta
    return float(np.sum(np.logaddexp(0.0, eta) - y * eta)) / n


def _loss_grad_raw(X, y, beta, family):
    n = y.size
    if family == "linear":
        r = y - X @ beta
        f = 0.5 * float(r @ r) / n
        grad = -(X.T @ r) / n
        return f, grad
    eta = X @ beta
    f = float(np.sum(np.logaddexp(0.0, eta) - y * eta)) / n
    grad = (X.T @ (expit(eta) - y)) / n
    return f, grad


def loss_and_gradient(design, beta, family):
    """Loss value and full gradient at ``beta``.

    linear:   f = (1/2n)||y - X beta||^2,  grad = -(1/n) X'(y - X beta)
    logistic: f = (1/n) sum[log(1+exp(x_i'beta)) - y_i x_i'beta],
              grad = (1/n) X'(sigma(X beta) - y)
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    beta = np.asarray(beta, dtype=np.float64).ravel()
    if beta.size != design.p:
        raise ValueError("beta length does not match the design")
    if family == "logistic" and not np.all(np.isin(design.y, (0.0, 1.0))):
        raise ValueError("logistic family requires a 0/1 response")
    return _loss_grad_raw(design.X, design.y, beta, family)


# ---------------------------------------------------------------------------
# prox and standardization


def sgl_prox(z, step, lam, groups, spec):
    """Proximal operator of step * lam * ||.||_sgl (weighted form).

    Elementwise soft-threshold at step*lam*alpha*v_i, then per group g a
    group soft-threshold at step*lam*(1-alpha)*w_g*sqrt(p_g); the
    composition is the exact prox of the summed penalty.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    z = np.asarray(z, dtype=np.float64).ravel()
    if z.size != groups.p:
        raise ValueError("z length does not match the partition")
    v = spec.variable_weights(groups.p)
    w = spec.group_weights(groups.m)
    l1t = step * lam * spec.alpha * v
    l2t = step * lam * (1.0 - spec.alpha) * w * groups.sqrt_sizes
    return kernels.sgl_prox(z, l1t, l2t, groups.indices, groups.indptr)


def standardize(design, intercept):
    """Scale every column of X to unit l2 norm (recording the scales).

    With ``intercept=True`` (linear-family callers), columns and y are
    mean-centered first and the y mean is recorded in ``y_center``; the
    logistic family must pass ``intercept=False`` since it is never
    centered.
    """
    X = design.X.copy()
    y = design.y.copy()
    raw_norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    y_center = 0.0
    if intercept:
        X -= X.mean(axis=0)
        y_center = float(y.mean())
        y -= y_center
    norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    dead = norms <= 1e-12 * (raw_norms + 1.0)
    if np.any(dead):
        j = int(np.flatnonzero(dead)[0])
        raise ValueError(f"column {j} has zero norm after centering; "
                         "remove constant/zero columns before fitting")
    X /= norms
    return GroupedDesign(X, y, design.groups,
                         column_scales=design.column_scales * norms,
                         y_center=design.y_center + y_center)


def objective(design, beta, lam, spec, family):
    """Penalized objective f(beta) + lam * ||beta||_sgl."""
    from .norms import sgl_norm
    f, _ = loss_and_gradient(design, beta, family)
    return f + lam * sgl_norm(beta, design.groups, spec)
