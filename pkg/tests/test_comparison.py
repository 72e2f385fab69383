import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from altrank.comparison import (CorrelationMatrix, RatingEnsemble, correlation_matrix,
                                hcluster, pca, pairwise_correlation)
from altrank.errors import InsufficientOverlapError, ZeroVarianceWarning
from altrank.rating import RatingVector, fractional_ranks

from _oracles import brute_kendall_tau_b, brute_upgma


def ensemble(*columns, labels=None):
    n = len(columns[0])
    journals = tuple(f"J{i}" for i in range(n))
    labels = labels or [f"s{k}" for k in range(len(columns))]
    return RatingEnsemble.from_vectors(
        [RatingVector(lab, journals, col) for lab, col in zip(labels, columns)])


def corr(values, labels=None):
    values = np.asarray(values, dtype=float)
    labels = labels or tuple("ABCDEFGH"[: len(values)])
    return CorrelationMatrix(tuple(labels), values, "spearman")


class TestCorrelation:
    def test_identical(self):
        x = [3.0, 1.0, 2.0, 7.5]
        for method in ("pearson", "spearman", "kendall"):
            m = correlation_matrix(ensemble(x, x), method)
            assert m.values[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_reversed(self):
        m_s = correlation_matrix(ensemble([1, 2, 3, 4.0], [4, 3, 2, 1.0]), "spearman")
        m_k = correlation_matrix(ensemble([1, 2, 3, 4.0], [4, 3, 2, 1.0]), "kendall")
        assert m_s.values[0, 1] == pytest.approx(-1.0, abs=1e-12)
        assert m_k.values[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_one_swap_kendall(self):
        # ranks (1,2,3,4) vs (2,1,3,4): one discordant pair out of six.
        m = correlation_matrix(ensemble([4, 3, 2, 1.0], [3, 4, 2, 1.0]), "kendall")
        assert m.values[0, 1] == pytest.approx(2 / 3, abs=1e-12)
        assert brute_kendall_tau_b([1, 2, 3, 4], [2, 1, 3, 4]) == pytest.approx(2 / 3)

    def test_matrix_shape_properties(self, rng):
        cols = [rng.normal(size=12) for _ in range(5)]
        cols.append(np.round(cols[0]))
        for method in ("pearson", "spearman", "kendall"):
            m = correlation_matrix(ensemble(*cols), method)
            assert np.all(np.diag(m.values) == 1.0)
            assert np.max(np.abs(m.values - m.values.T)) <= 1e-12
            assert np.all(np.abs(m.values) <= 1.0)

    def test_insufficient_overlap(self):
        e = RatingEnsemble.from_mappings(["a", "b", "c", "d"],
                                         [("x", {"a": 1, "b": 2, "c": 3, "d": 4}),
                                          ("IF", {"a": 1.0, "d": 2.0})])
        with pytest.raises(InsufficientOverlapError) as info:
            correlation_matrix(e, "pearson")
        assert info.value.pair == ("x", "IF")

    def test_masked_pairwise_complete(self):
        e = RatingEnsemble.from_mappings(["a", "b", "c", "d", "e"],
                                         [("x", {"a": 1, "b": 2, "c": 3, "d": 4, "e": 0}),
                                          ("IF", {"a": 1.0, "b": 2.0, "c": 3.5})])
        m = correlation_matrix(e, "spearman")
        assert m.values[0, 1] == pytest.approx(1.0)

    def test_zero_variance_flagged(self):
        e = ensemble([1, 2, 3.0], [5, 5, 5.0], [3, 1, 2.0])
        with pytest.warns(ZeroVarianceWarning):
            m = correlation_matrix(e, "pearson")
        assert m.values[0, 1] == 0.0 and m.values[1, 2] == 0.0
        assert not np.isnan(m.values).any()
        assert ("s0", "s1", "zero-variance") in m.flags

    def test_needs_two_schemes(self):
        with pytest.raises(ValueError):
            correlation_matrix(ensemble([1, 2, 3.0]), "pearson")


@pytest.mark.parametrize("seed", range(30))
def test_kendall_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    x = rng.integers(0, 4, size=n).astype(float)
    y = rng.integers(0, 4, size=n).astype(float)
    if np.all(x == x[0]) or np.all(y == y[0]):
        return
    assert pairwise_correlation(x, y, "kendall") == pytest.approx(brute_kendall_tau_b(x, y),
                                                                  abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_spearman_is_pearson_of_ranks(seed):
    rng = np.random.default_rng(seed)
    cols = [rng.integers(0, 6, size=15).astype(float) + rng.random() for _ in range(4)]
    sp = correlation_matrix(ensemble(*cols), "spearman").values
    ranked = correlation_matrix(ensemble(*[fractional_ranks(c) for c in cols]), "pearson").values
    assert np.max(np.abs(sp - ranked)) <= 1e-12


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=80, deadline=None)
@given(arrays(np.float64, 8, elements=finite, unique=True),
       arrays(np.float64, 8, elements=finite, unique=True))
def test_monotone_transform_invariance(x, y):
    base_s = pairwise_correlation(x, y, "spearman")
    base_k = pairwise_correlation(x, y, "kendall")
    # An arbitrary strictly increasing map on the sample's values.
    order = np.argsort(x)
    tx = np.empty_like(x)
    tx[order] = np.cumsum(np.abs(np.sin(np.arange(1, x.size + 1))) + 0.01) ** 2
    assert abs(pairwise_correlation(tx, y, "spearman") - base_s) <= 1e-12
    assert abs(pairwise_correlation(tx, y, "kendall") - base_k) <= 1e-12
    base_p = pairwise_correlation(x, y, "pearson")
    assert abs(pairwise_correlation(2.5 * x + 7.0, y, "pearson") - base_p) <= 1e-9


class TestPca:
    def test_perfectly_correlated_pair(self):
        res = pca(corr([[1, 1], [1, 1]]))
        np.testing.assert_allclose(res.coordinates[0], res.coordinates[1], atol=1e-12)
        assert not res.explained_variance.any()

    def test_collinear_rows(self):
        # Feature rows lie on one line: r_k = a + t_k * b.
        a = np.array([0.2, 0.1, 0.3])
        b = np.array([0.3, -0.2, 0.1])
        rows = np.array([a + t * b for t in (-1.0, 0.5, 2.0)])
        res = pca(corr(rows))
        assert res.explained_variance[0] == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_distances_preserved(self, seed, ):
        rng = np.random.default_rng(seed)
        cols = [rng.normal(size=20) for _ in range(5)]
        m = correlation_matrix(ensemble(*cols), "pearson")
        res = pca(m)
        for i in range(5):
            for k in range(5):
                d_feat = np.linalg.norm(m.values[i] - m.values[k])
                d_pc = np.linalg.norm(res.coordinates[i] - res.coordinates[k])
                assert abs(d_feat - d_pc) <= 1e-8
        centered = m.values - m.values.mean(axis=0)
        np.testing.assert_allclose(res.coordinates @ res.components.T, centered, atol=1e-8)
        ev = res.explained_variance
        assert np.all(ev >= 0) and ev.sum() <= 1 + 1e-9
        assert np.all(np.diff(ev) <= 1e-15)
        for c in range(res.components.shape[1]):
            lead = np.argmax(np.abs(res.components[:, c]))
            assert res.components[lead, c] > 0


class TestCluster:
    def test_zero_distance(self):
        tree = hcluster(corr([[1, 1], [1, 1]]))
        assert tree.heights().tolist() == [0.0]

    def test_three_schemes(self):
        tree = hcluster(corr([[1, 0.9, 0.1], [0.9, 1, 0.1], [0.1, 0.1, 1]]))
        assert [(m.left, m.right) for m in tree.merges] == [(0, 1), (3, 2)]
        np.testing.assert_allclose(tree.heights(), [0.1, 0.9], atol=1e-12)
        assert tree.to_newick() == "((A:0.1,B:0.1):0.8,C:0.9);"

    def test_equidistant(self):
        tree = hcluster(corr(np.eye(5)))
        assert tree.heights().tolist() == [1.0] * 4
        # Ties merge the lexicographically smallest pair first.
        assert (tree.merges[0].left, tree.merges[0].right) == (0, 1)

    def test_input_order_irrelevant(self):
        vals = np.array([[1, 0.2, 0.2], [0.2, 1, 0.2], [0.2, 0.2, 1]])
        t1 = hcluster(corr(vals, ("b", "a", "c")))
        t2 = hcluster(corr(vals, ("a", "b", "c")))
        assert t1.to_newick() == t2.to_newick()

    @pytest.mark.parametrize("seed", range(15))
    def test_against_brute_upgma(self, seed):
        rng = np.random.default_rng(seed)
        cols = [rng.normal(size=10) for _ in range(int(rng.integers(2, 8)))]
        m = correlation_matrix(ensemble(*cols), "spearman")
        tree = hcluster(m)
        np.testing.assert_allclose(tree.heights(), brute_upgma(m.labels, 1 - m.values),
                                   atol=1e-12)
        assert np.all(np.diff(tree.heights()) >= 0)

    @pytest.mark.parametrize("linkage", ["single", "complete"])
    def test_other_linkages(self, linkage):
        tree = hcluster(corr([[1, 0.9, 0.1], [0.9, 1, 0.3], [0.1, 0.3, 1]]), linkage)
        expected = 0.7 if linkage == "single" else 0.9
        np.testing.assert_allclose(tree.heights(), [0.1, expected], atol=1e-12)

    def test_newick_quotes(self):
        tree = hcluster(corr(np.eye(2), ("a b", "c:d")))
        assert tree.to_newick() == "('a b':1,'c:d':1);"
