import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from sglscreen import GenSpec, expanded_dimension, generate
from sglscreen.datagen import (INTERACTION_BENCH_SIZES, even_group_sizes,
                               uneven_group_sizes)


def test_independent_columns_when_rho_is_zero():
    spec = GenSpec(n=2000, p=40, group_sizes=[10] * 4, rho=0.0, seed=0)
    design, _ = generate(spec)
    corr = np.corrcoef(design.X, rowvar=False)
    np.fill_diagonal(corr, 0.0)
    assert np.max(np.abs(corr)) < 0.1


def test_within_group_equicorrelation():
    spec = GenSpec(n=5000, p=10, group_sizes=[5, 5], rho=0.6, seed=1)
    design, _ = generate(spec)
    corr = np.corrcoef(design.X, rowvar=False)
    within = corr[:5, :5][np.triu_indices(5, 1)]
    across = corr[:5, 5:]
    assert np.max(np.abs(within - 0.6)) < 0.05
    assert np.max(np.abs(across)) < 0.05
    assert np.max(np.abs(np.var(design.X, axis=0) - 1.0)) < 0.1


def test_active_counts_follow_sparsities():
    spec = GenSpec(n=20, p=40, group_sizes=[10] * 4, group_sparsity=0.5,
                   var_sparsity=0.3, seed=2)
    design, beta = generate(spec)
    active = np.flatnonzero(beta)
    active_groups = np.unique(design.groups.group_of[active])
    assert active_groups.size == 2
    for g in active_groups:
        assert np.count_nonzero(beta[design.groups.members(g)]) == 3
    assert active.size == 6


def test_signal_location_scale():
    spec = GenSpec(n=10, p=20, group_sizes=[10, 10], signal_mean=100.0,
                   signal_sd=1.0, seed=3)
    _, beta = generate(spec)
    nz = beta[beta != 0]
    assert nz.size > 0
    assert np.all(nz > 50.0)


def test_generate_is_deterministic_in_the_seed():
    spec = GenSpec(n=30, p=20, group_sizes=[5] * 4, seed=11)
    d1, b1 = generate(spec)
    d2, b2 = generate(GenSpec(n=30, p=20, group_sizes=[5] * 4, seed=11))
    assert_array_equal(d1.X, d2.X)
    assert_array_equal(d1.y, d2.y)
    assert_array_equal(b1, b2)
    d3, _ = generate(GenSpec(n=30, p=20, group_sizes=[5] * 4, seed=12))
    assert not np.array_equal(d1.X, d3.X)


def test_expanded_dimension_reference_geometry():
    sizes = INTERACTION_BENCH_SIZES
    assert len(sizes) == 52
    assert sum(sizes) == 400
    assert min(sizes) >= 3 and max(sizes) <= 15
    assert expanded_dimension(sizes, 1) == 400
    assert expanded_dimension(sizes, 2) == 2111
    assert expanded_dimension(sizes, 3) == 7338


def test_pairwise_interactions_are_column_products():
    spec = GenSpec(n=8, p=3, group_sizes=[3], interaction_order=2, seed=4)
    design, _ = generate(spec)
    X = design.X
    assert design.p == 6
    assert design.groups.sizes.tolist() == [6]
    assert_allclose(X[:, 3], X[:, 0] * X[:, 1], rtol=1e-15)
    assert_allclose(X[:, 4], X[:, 0] * X[:, 2], rtol=1e-15)
    assert_allclose(X[:, 5], X[:, 1] * X[:, 2], rtol=1e-15)


def test_triple_interactions_are_column_products():
    spec = GenSpec(n=8, p=4, group_sizes=[4], interaction_order=3, seed=5)
    design, _ = generate(spec)
    X = design.X
    assert design.p == expanded_dimension([4], 3) == 14
    assert_allclose(X[:, 10], X[:, 0] * X[:, 1] * X[:, 2], rtol=1e-15)
    assert_allclose(X[:, 13], X[:, 1] * X[:, 2] * X[:, 3], rtol=1e-15)


def test_interaction_groups_stay_contiguous():
    spec = GenSpec(n=6, p=6, group_sizes=[3, 3], interaction_order=2,
                   seed=6)
    design, _ = generate(spec)
    assert design.groups.sizes.tolist() == [6, 6]
    assert_allclose(design.X[:, 9], design.X[:, 6] * design.X[:, 7],
                    rtol=1e-15)


def test_interaction_signal_count():
    spec = GenSpec(n=10, p=6, group_sizes=[3, 3], interaction_order=2,
                   interaction_sparsity=0.3, seed=7)
    _, beta = generate(spec)
    interaction_cols = np.array([3, 4, 5, 9, 10, 11])
    assert np.count_nonzero(beta[interaction_cols]) == 2


def test_expansion_size_limit():
    spec = GenSpec(n=5, p=200, group_sizes=[200], interaction_order=3,
                   seed=8)
    with pytest.raises(ValueError, match="columns"):
        generate(spec)


def test_logistic_response_is_binary():
    spec = GenSpec(n=500, p=20, group_sizes=[5] * 4, family="logistic",
                   seed=9)
    design, _ = generate(spec)
    values = np.unique(design.y)
    assert set(values) == {0.0, 1.0}


def test_genspec_validation():
    with pytest.raises(ValueError, match="sum to p"):
        GenSpec(p=10, group_sizes=[3, 3])
    with pytest.raises(ValueError, match="rho"):
        GenSpec(rho=1.0)
    with pytest.raises(ValueError, match="rho"):
        GenSpec(rho=-0.1)
    with pytest.raises(ValueError, match="sparsity"):
        GenSpec(group_sparsity=0.0)
    with pytest.raises(ValueError, match="sparsity"):
        GenSpec(var_sparsity=1.5)
    with pytest.raises(ValueError, match="family"):
        GenSpec(family="poisson")
    with pytest.raises(ValueError, match="interaction_order"):
        GenSpec(interaction_order=4)


def test_uneven_group_sizes():
    sizes = uneven_group_sizes()
    assert sum(sizes) == 1000
    assert len(sizes) == 22
    assert min(sizes) >= 3 and max(sizes) <= 100
    assert sizes == uneven_group_sizes()
    assert sizes != uneven_group_sizes(seed=1)
    with pytest.raises(ValueError, match="bounds"):
        uneven_group_sizes(p=300, m=2, lo=3, hi=100)


def test_even_group_sizes():
    assert even_group_sizes(100, 20) == [20] * 5
    with pytest.raises(ValueError, match="multiple"):
        even_group_sizes(90, 20)
