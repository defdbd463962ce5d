"""Pure-NumPy implementations of the hot numerical kernels.

This module mirrors the compiled extension ``sglscreen._kernels`` function
for function; :mod:`sglscreen.kernels` picks whichever is available.  Group
structure is passed in CSR-like form: ``indices`` is a permutation of
``0..p-1`` listing the members of each group contiguously and ``indptr``
(length m+1) marks the group boundaries.
"""

import numpy as np


def epsilon_norm(x, eps):
    """Evaluate the eps-norm of ``x``.

    Returns the unique q >= 0 solving

        sum_i (|x_i| - (1 - eps) * q)_+^2 = (eps * q)^2,

    which interpolates between the l-infinity norm (eps = 0) and the l2
    norm (eps = 1).  The root is found by sorting |x| in descending order
    and scanning candidate active-support sizes; on each candidate
    interval the equation is a quadratic whose descending-crossing root
    has the cancellation-free form s2 / (c*s1 + sqrt(disc)).
    """
    a = np.abs(np.asarray(x, dtype=np.float64))
    if a.size == 0:
        return 0.0
    amax = float(a.max())
    if amax == 0.0:
        return 0.0
    if eps <= 0.0:
        return amax
    if eps >= 1.0:
        return float(np.sqrt(np.dot(a, a)))

    c = 1.0 - eps
    a = np.sort(a)[::-1]
    s1 = np.cumsum(a)
    s2 = np.cumsum(a * a)
    k = np.arange(1, a.size + 1)
    acoef = k * (c * c) - eps * eps
    disc = (c * s1) ** 2 - acoef * s2
    root = s2 / (c * s1 + np.sqrt(np.maximum(disc, 0.0)))

    # accept the root lying in its own interval a_{k+1} <= c*q <= a_k
    hi = a
    lo = np.concatenate([a[1:], [0.0]])
    cq = c * root
    tol = 1e-12 * amax
    ok = (disc >= 0.0) & (cq <= hi + tol) & (cq >= lo - tol)
    idx = np.flatnonzero(ok)
    if idx.size:
        return float(root[idx[0]])
    # rounding pushed every candidate just outside its interval; take the
    # one violating its interval the least (the true root is on a boundary)
    slack = np.maximum(lo - cq, cq - hi)
    return float(root[np.argmin(slack)])


def grouped_epsilon_norms(x, indices, indptr, eps):
    """eps-norm of each group slice of ``x``; ``eps`` is per group."""
    x = np.asarray(x, dtype=np.float64)
    m = len(indptr) - 1
    out = np.empty(m, dtype=np.float64)
    for g in range(m):
        seg = x[indices[indptr[g]:indptr[g + 1]]]
        out[g] = epsilon_norm(seg, float(eps[g]))
    return out


def sgl_prox(z, l1t, l2t, indices, indptr):
    """Prox of the weighted sparse-group penalty at ``z``.

    ``l1t`` holds the per-variable soft-threshold levels and ``l2t`` the
    per-group l2 threshold levels (both already multiplied by step*lambda).
    Elementwise soft-thresholding followed by group soft-thresholding is
    the exact prox of the summed penalty.
    """
    z = np.asarray(z, dtype=np.float64)
    u = np.sign(z) * np.maximum(np.abs(z) - l1t, 0.0)
    gathered = u[indices]
    norms = np.sqrt(np.add.reduceat(gathered * gathered, indptr[:-1]))
    scale = np.zeros_like(norms)
    live = norms > l2t
    scale[live] = 1.0 - l2t[live] / norms[live]
    u[indices] = gathered * np.repeat(scale, np.diff(indptr))
    return u
