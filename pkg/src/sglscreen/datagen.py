"""Synthetic grouped-regression data with controllable structure.

X rows are N(0, Sigma) with Sigma block-diagonal: within a group the
off-diagonals are rho, the diagonal 1, sampled exactly via the shared-
factor form sqrt(rho)*z_g + sqrt(1-rho)*e_i.  A chosen fraction of groups,
and of variables within them, carries signal; responses are Gaussian
(linear) or Bernoulli via the logistic link (with the noise inside the
link).  Orders 2 and 3 append all within-group interaction columns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .model import GroupedDesign, GroupPartition

MAX_EXPANDED_COLUMNS = 10 ** 6

# 52 sizes in [3, 15] summing to 400 whose order-2/order-3 within-group
# interaction expansions have exactly 2111 and 7338 columns — the geometry
# used by the interaction benchmark scenario.
INTERACTION_BENCH_SIZES = (
    3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 4, 4, 4, 5, 5, 5, 5, 6, 6, 6, 6, 6, 6,
    6, 6, 6, 7, 7, 8, 8, 8, 9, 9, 9, 9, 10, 10, 10, 11, 11, 11, 11, 12,
    12, 13, 13, 13, 14, 14, 15, 15, 15,
)


def even_group_sizes(p, size=20):
    """p/size groups of equal size (p must divide evenly)."""
    if p % size:
        raise ValueError("p is not a multiple of the group size")
    return [size] * (p // size)


def uneven_group_sizes(p=1000, m=22, lo=3, hi=100, seed=0):
    """m sizes in [lo, hi] summing to p, deterministic in the seed."""
    if not lo * m <= p <= hi * m:
        raise ValueError("no size assignment fits the bounds")
    rng = np.random.default_rng(seed)
    raw = rng.uniform(lo, hi, m)
    sizes = np.clip(np.round(raw * p / raw.sum()), lo, hi).astype(int)
    order = rng.permutation(m)
    i = 0
    while sizes.sum() != p:
        g = order[i % m]
        step = 1 if sizes.sum() < p else -1
        if lo <= sizes[g] + step <= hi:
            sizes[g] += step
        i += 1
    return [int(s) for s in sizes]


@dataclass
class GenSpec:
    n: int = 200
    p: int = 1000
    group_sizes: list = None  # default: even groups of 20
    rho: float = 0.3
    group_sparsity: float = 0.2
    var_sparsity: float = 0.2
    signal_mean: float = 0.0
    signal_sd: float = 2.0
    family: str = "linear"
    interaction_order: int = 1
    interaction_sparsity: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.group_sizes is None:
            self.group_sizes = even_group_sizes(self.p)
        if sum(self.group_sizes) != self.p:
            raise ValueError("group sizes must sum to p")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must lie in [0, 1)")
        for s in (self.group_sparsity, self.var_sparsity):
            if not 0.0 < s <= 1.0:
                raise ValueError("sparsity proportions must lie in (0, 1]")
        if self.family not in ("linear", "logistic"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.interaction_order not in (1, 2, 3):
            raise ValueError("interaction_order must be 1, 2 or 3")


def expanded_dimension(group_sizes, order):
    """Column count after appending within-group products of 2 (and 3)
    distinct columns: sum_g [p_g + C(p_g,2) (+ C(p_g,3))]."""
    total = 0
    for s in group_sizes:
        total += s
        if order >= 2:
            total += math.comb(s, 2)
        if order >= 3:
            total += math.comb(s, 3)
    return total


def _expand_interactions(X, sizes, order):
    """Append within-group interaction columns, keeping each group
    contiguous (marginal block first, then its products).

    Returns (X_ext, expanded_sizes, interaction_column_indices).
    """
    new_sizes = [expanded_dimension([s], order) for s in sizes]
    X_ext = np.empty((X.shape[0], sum(new_sizes)))
    interaction_cols = []
    start = 0
    out = 0
    for s, ns in zip(sizes, new_sizes):
        base = X[:, start:start + s]
        X_ext[:, out:out + s] = base
        pos = out + s
        if order >= 2:
            for i, j in itertools.combinations(range(s), 2):
                X_ext[:, pos] = base[:, i] * base[:, j]
                pos += 1
        if order >= 3:
            for i, j, k in itertools.combinations(range(s), 3):
                X_ext[:, pos] = base[:, i] * base[:, j] * base[:, k]
                pos += 1
        interaction_cols.extend(range(out + s, out + ns))
        start += s
        out += ns
    return X_ext, new_sizes, np.asarray(interaction_cols, dtype=np.intp)


def generate(spec):
    """Draw one dataset; returns (GroupedDesign, beta_true).

    Deterministic in the seed: the RNG draws, in order, the shared group
    factors, the idiosyncratic noise, the active groups, the active
    variables and signals per active group (ascending group id), the
    interaction signals, and finally the response noise.
    """
    sizes = list(spec.group_sizes)
    m = len(sizes)
    n, p = spec.n, spec.p
    if spec.interaction_order > 1:
        total = expanded_dimension(sizes, spec.interaction_order)
        if total > MAX_EXPANDED_COLUMNS:
            raise ValueError(
                f"interaction expansion would create {total} columns "
                f"(limit {MAX_EXPANDED_COLUMNS})")

    rng = np.random.default_rng(spec.seed)
    group_of = np.repeat(np.arange(m), sizes)
    Z = rng.standard_normal((n, m))
    E = rng.standard_normal((n, p))
    X = np.sqrt(spec.rho) * Z[:, group_of] + np.sqrt(1.0 - spec.rho) * E

    if spec.interaction_order > 1:
        X, full_sizes, interaction_cols = _expand_interactions(
            X, sizes, spec.interaction_order)
    else:
        full_sizes, interaction_cols = sizes, np.empty(0, dtype=np.intp)
    p_total = sum(full_sizes)
    edges = np.concatenate([[0], np.cumsum(full_sizes)])

    beta = np.zeros(p_total)
    n_active_groups = math.ceil(spec.group_sparsity * m)
    active_groups = np.sort(rng.choice(m, n_active_groups, replace=False))
    for g in active_groups:
        p_g = sizes[g]
        n_active = math.ceil(spec.var_sparsity * p_g)
        local = np.sort(rng.choice(p_g, n_active, replace=False))
        beta[edges[g] + local] = rng.normal(spec.signal_mean, spec.signal_sd,
                                            n_active)
    if interaction_cols.size:
        n_active_int = math.ceil(spec.interaction_sparsity *
                                 interaction_cols.size)
        chosen = np.sort(rng.choice(interaction_cols.size, n_active_int,
                                    replace=False))
        beta[interaction_cols[chosen]] = rng.normal(
            spec.signal_mean, spec.signal_sd, n_active_int)

    eta = X @ beta
    noise = rng.standard_normal(n)
    if spec.family == "linear":
        y = eta + noise
    else:
        y = (rng.random(n) < expit(eta + noise)).astype(np.float64)

    design = GroupedDesign(X, y, GroupPartition.from_sizes(full_sizes))
    return design, beta
