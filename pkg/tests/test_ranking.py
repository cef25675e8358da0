import numpy as np
import pytest
import scipy.stats

from conftest import load_score_fixture, preferential_graph
from wikirank.ranking import (CORRELATION_SERIES, FitError,
                              UndefinedCorrelationError, correlation_matrix,
                              degree_distribution_fit, fit_log_binned,
                              fractional_ranks, ordinal_ranks, pearson,
                              rank_vector, spearman)


def test_fractional_ranks_sum():
    rng = np.random.default_rng(0)
    for _ in range(30):
        x = rng.integers(0, 5, size=rng.integers(2, 40)).astype(float)
        r = fractional_ranks(x)
        n = x.size
        assert r.sum() == pytest.approx(n * (n + 1) / 2)


def test_fractional_ranks_ties():
    r = fractional_ranks(np.array([10.0, 10.0, 5.0]))
    assert list(r) == [1.5, 1.5, 3.0]


def test_tie_free_fractional_equals_ordinal():
    rng = np.random.default_rng(1)
    x = rng.permutation(20).astype(float)
    labels = [f"l{i}" for i in range(20)]
    assert (fractional_ranks(x) == ordinal_ranks(x, labels)).all()


def test_ordinal_ranks_label_tiebreak():
    values = np.array([5.0, 5.0, 7.0])
    labels = ("zeta", "alpha", "mid")
    r = ordinal_ranks(values, labels)
    assert list(r) == [3, 2, 1]


def test_ordinal_ranks_permutation():
    rng = np.random.default_rng(2)
    x = rng.integers(0, 4, 25).astype(float)
    labels = [f"n{i:02d}" for i in range(25)]
    r = ordinal_ranks(x, labels)
    assert sorted(r) == list(range(1, 26))


def test_rank_vector_fields():
    rv = rank_vector(np.array([3.0, 1.0, 2.0]), ("a", "b", "c"))
    assert list(rv.ordinal) == [1, 3, 2]
    assert rv.direction == "descending"


def test_pearson_basics():
    x = np.arange(10, dtype=float)
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)
    with pytest.raises(UndefinedCorrelationError):
        pearson(x, np.ones(10))
    with pytest.raises(ValueError):
        pearson(x, x[:4])


def test_spearman_hand_example():
    assert spearman(np.array([1.0, 2, 3]), np.array([3.0, 1, 2])) == \
        pytest.approx(-0.5)


def test_spearman_monotone_invariance():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.random(30)
        y = rng.random(30)
        base = spearman(x, y)
        assert spearman(np.exp(3 * x), y) == pytest.approx(base, abs=1e-13)
        assert spearman(x ** 3 + 5, y) == pytest.approx(base, abs=1e-13)


def test_spearman_equals_pearson_of_ranks_with_ties():
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.integers(0, 6, 40).astype(float)
        y = rng.integers(0, 6, 40).astype(float)
        try:
            s = spearman(x, y)
        except UndefinedCorrelationError:
            continue
        p = pearson(fractional_ranks(x), fractional_ranks(y))
        assert s == pytest.approx(p, abs=1e-12)


def test_correlations_match_scipy():
    rng = np.random.default_rng(5)
    for _ in range(25):
        x = rng.integers(0, 8, 50).astype(float)
        y = x * rng.random() + rng.integers(0, 8, 50)
        assert pearson(x, y) == pytest.approx(scipy.stats.pearsonr(x, y)[0],
                                              abs=1e-12)
        assert spearman(x, y) == pytest.approx(scipy.stats.spearmanr(x, y)[0],
                                               abs=1e-12)


def test_correlation_matrix_shape_and_bounds():
    table = load_score_fixture("scores_2017_top35.csv")
    corr = correlation_matrix(table, "top_k", k=35)
    for mat in (corr.pearson, corr.spearman):
        assert mat.shape == (6, 6)
        assert np.allclose(np.diag(mat), 1.0)
        assert np.allclose(mat, mat.T)
        assert (np.abs(mat) <= 1.0 + 1e-12).all()
    assert corr.series == CORRELATION_SERIES


def test_correlation_matrix_duplicated_measure():
    table = load_score_fixture("scores_2017_top35.csv")
    table.rescaled["pagerank"][:] = table.rescaled["degree"]
    corr = correlation_matrix(table, "top_k", k=35)
    i = CORRELATION_SERIES.index("degree")
    j = CORRELATION_SERIES.index("pagerank")
    assert corr.pearson[i, j] == pytest.approx(1.0)
    assert corr.spearman[i, j] == pytest.approx(1.0)


def test_correlation_matrix_published_2017_top35():
    # inputs are the published 2-decimal marks, so recomputed coefficients
    # can drift a few hundredths from the published full-precision matrix
    table = load_score_fixture("scores_2017_top35.csv")
    corr = correlation_matrix(table, "top_k", k=35)
    idx = {s: i for i, s in enumerate(CORRELATION_SERIES)}
    assert corr.pearson[idx["degree"], idx["pagerank"]] == \
        pytest.approx(0.98, abs=0.05)
    assert corr.spearman[idx["degree"], idx["pagerank"]] == \
        pytest.approx(0.92, abs=0.05)
    assert corr.pearson[idx["betweenness"], idx["closeness"]] == \
        pytest.approx(0.74, abs=0.05)


def test_correlation_matrix_unknown_population():
    table = load_score_fixture("scores_2017_top35.csv")
    with pytest.raises(ValueError):
        correlation_matrix(table, "everybody")


def test_fit_exact_cubic_power_law():
    k = np.arange(1, 1001, dtype=float)
    weights = k ** -3.0 * 1e6
    fit = fit_log_binned(k, weights, n_total=weights.sum(), ratio=1.5)
    assert fit.slope == pytest.approx(-3.0, abs=0.05)


def test_fit_slope_invariant_under_density_scaling():
    k = np.arange(1, 301, dtype=float)
    weights = k ** -2.2
    a = fit_log_binned(k, weights, n_total=1.0)
    b = fit_log_binned(k, weights * 1e4, n_total=1.0)
    assert a.slope == pytest.approx(b.slope, abs=1e-12)


def test_fit_regular_graph_errors():
    from conftest import cycle_graph

    with pytest.raises(FitError):
        degree_distribution_fit(cycle_graph(10))


def test_fit_on_synthetic_graph():
    rng = np.random.default_rng(6)
    g = preferential_graph(3000, rng)
    fit = degree_distribution_fit(g)
    assert fit.slope < -1.5
    assert fit.r2 > 0.8
    assert fit.edges[0] == 1.0
    assert np.all(np.diff(fit.edges) > 0)


def test_fit_centers_are_integer_geometric_means():
    k = np.arange(1, 101, dtype=float)
    fit = fit_log_binned(k, np.ones_like(k), n_total=100.0)
    for j in range(len(fit.centers)):
        lattice = np.arange(np.ceil(fit.edges[j]),
                            min(np.ceil(fit.edges[j + 1]), 101))
        assert fit.centers[j] == pytest.approx(
            np.exp(np.log(lattice).mean()), rel=1e-12)
    # wide bins approach the geometric mean of the edges
    assert fit.centers[-2] == pytest.approx(
        np.sqrt(fit.edges[-3] * fit.edges[-2]), rel=0.05)
