import numpy as np
import pytest

from sglscreen import GroupPartition, GroupedDesign, standardize


def make_design(n, p, sizes, seed=0, family="linear", snr_cols=None,
                intercept=True):
    """Small random standardized design for unit tests.

    ``sizes`` is the group-size list (must sum to p); the response is a
    sparse linear signal plus noise, thresholded through the logistic link
    when ``family='logistic'``.
    """
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    k = max(2, p // 10)
    idx = rng.choice(p, k, replace=False)
    beta[idx] = rng.normal(0.0, 2.0, k)
    eta = X @ beta + rng.standard_normal(n)
    if family == "linear":
        y = eta
    else:
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(float)
        intercept = False
    design = GroupedDesign(X, y, GroupPartition.from_sizes(sizes))
    return standardize(design, intercept=intercept)


@pytest.fixture
def small_design():
    return make_design(30, 12, [4, 4, 4], seed=7)
