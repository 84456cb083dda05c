"""Unit tests for Shapley attributions."""

import numpy as np
import pytest

from pqc_expressibility.constants import FEATURE_NAMES
from pqc_expressibility.errors import InsufficientDataError, ModelError
from pqc_expressibility.explain import (
    ShapExplanation,
    ShapSummary,
    brute_force_shap,
    brute_force_shap_values,
    explain_all,
    local_accuracy_residual,
    oracle_difference,
    saturation_diagnostic,
    shap_summary,
    tree_shap,
    tree_shap_values,
)
from pqc_expressibility.models import GBTHyperparams, GBTModel, fit_gbt, fit_lasso


@pytest.fixture
def smooth_model(smooth_data):
    X, y = smooth_data
    return fit_gbt(X, y, GBTHyperparams(n_rounds=25, learning_rate=0.2, max_leaves=8, min_samples_leaf=3))


@pytest.fixture
def stump(step_data):
    X, y = step_data
    return fit_gbt(X, y, GBTHyperparams(n_rounds=1, learning_rate=1.0, max_leaves=2, min_samples_leaf=1))


class TestTreeShap:
    """Test exact TreeSHAP against the definition."""

    def test_matches_brute_force(self, smooth_model, smooth_data):
        X, _ = smooth_data
        base_fast, fast = tree_shap_values(smooth_model, X)
        base_exact, exact = brute_force_shap_values(smooth_model, X)
        assert base_fast == pytest.approx(base_exact)
        assert np.max(np.abs(fast - exact)) <= 1e-10
        assert oracle_difference(smooth_model, X[:10]) <= 1e-10

    def test_local_accuracy(self, smooth_model, smooth_data):
        X, _ = smooth_data
        base, phi = tree_shap_values(smooth_model, X)
        assert np.allclose(base + phi.sum(axis=1), smooth_model.predict(X), atol=1e-10)

    def test_stump_attribution(self, stump, step_data):
        X, _ = step_data
        tree = stump.trees[0]
        left, right = tree.children_left[0], tree.children_right[0]
        mean_leaf = (tree.covers[left] * tree.values[left] + tree.covers[right] * tree.values[right]) / tree.covers[0]
        base, phi = tree_shap_values(stump, X)
        goes_left = X[:, 0] <= tree.thresholds[0]
        expected = np.where(goes_left, tree.values[left], tree.values[right]) - mean_leaf
        assert base == pytest.approx(stump.base_score + mean_leaf)
        assert np.allclose(phi[:, 0], expected, atol=1e-12)

    def test_unused_features_get_zero(self, stump, step_data):
        X, _ = step_data
        _, phi = tree_shap_values(stump, X)
        assert np.all(phi[:, 1:] == 0.0)

    def test_single_vector(self, smooth_model, smooth_data):
        X, _ = smooth_data
        explanation = tree_shap(smooth_model, X[7], row=7)
        oracle = brute_force_shap(smooth_model, X[7], row=7)
        assert explanation.row == 7
        assert explanation.features == FEATURE_NAMES
        assert np.allclose(explanation.phi, oracle.phi, atol=1e-10)
        assert explanation.total == pytest.approx(smooth_model.predict(X[7]))

    def test_rejects_linear_model(self, smooth_data):
        X, y = smooth_data
        with pytest.raises(ModelError):
            tree_shap_values(fit_lasso(X, y, lam=0.01), X)

    def test_rejects_missing_cover(self, stump, step_data):
        X, _ = step_data
        data = stump.to_dict()
        data["trees"][0]["covers"][1] = 0.0
        with pytest.raises(ModelError):
            tree_shap_values(GBTModel.from_dict(data), X)

    def test_wrong_arity(self, smooth_model):
        with pytest.raises(ModelError):
            tree_shap_values(smooth_model, np.zeros((2, 5)))

    def test_oracle_feature_limit(self):
        rng = np.random.default_rng(1)
        X = rng.uniform(size=(30, 13))
        model = fit_gbt(X, X[:, 0], GBTHyperparams(n_rounds=1, min_samples_leaf=2))
        with pytest.raises(ModelError):
            brute_force_shap_values(model, X)


class TestExplainAll:
    """Test batch explanations."""

    def test_row_order_and_thread_independence(self, smooth_model, smooth_data):
        X, _ = smooth_data
        serial = explain_all(smooth_model, X, threads=1)
        parallel = explain_all(smooth_model, X, threads=4)
        assert [e.row for e in serial] == list(range(X.shape[0]))
        assert [e.row for e in parallel] == list(range(X.shape[0]))
        assert np.array_equal(np.vstack([e.phi for e in serial]), np.vstack([e.phi for e in parallel]))

    def test_local_accuracy_residual(self, smooth_model, smooth_data):
        X, _ = smooth_data
        explanations = explain_all(smooth_model, X, threads=2)
        assert local_accuracy_residual(smooth_model, explanations, X) <= 1e-10

    def test_residual_length_mismatch(self, smooth_model, smooth_data):
        X, _ = smooth_data
        with pytest.raises(ModelError):
            local_accuracy_residual(smooth_model, explain_all(smooth_model, X[:3]), X)


class TestSummaries:
    """Test attribution summaries and the saturation diagnostic."""

    def test_importance_sorted(self, smooth_model, smooth_data):
        X, _ = smooth_data
        summary = shap_summary(explain_all(smooth_model, X), X)
        rows = summary.importance_rows()
        assert [r[1] for r in rows] == sorted((r[1] for r in rows), reverse=True)
        assert {r[0] for r in rows} == set(FEATURE_NAMES)
        assert len(summary.beeswarm_rows()) == X.size
        assert len(summary.dependence_rows("cz")) == X.shape[0]

    def test_summary_errors(self, smooth_model, smooth_data):
        X, _ = smooth_data
        with pytest.raises(ModelError):
            shap_summary([], X)
        with pytest.raises(ModelError):
            shap_summary(explain_all(smooth_model, X[:4]), X[:4, :5])

    def test_saturation_quartiles(self):
        counts = np.zeros((8, 6))
        counts[:, 0] = [8, 7, 6, 5, 4, 3, 2, 1]
        phi = np.zeros((8, 6))
        phi[:, 0] = [2.1, 2.0, 1.9, 1.8, 1.5, 1.0, -1.0, -2.0]
        summary = ShapSummary(FEATURE_NAMES, phi, counts / 8.0, counts)
        (row,) = saturation_diagnostic(summary, features=("rx",))
        assert row.feature == "rx"
        assert row.quartile_means == pytest.approx((-1.5, 1.25, 1.85, 2.05))
        assert row.flattening

    def test_saturation_needs_four_rows(self):
        explanations = [ShapExplanation(0.0, np.zeros(6), i) for i in range(3)]
        summary = shap_summary(explanations, np.zeros((3, 6)))
        with pytest.raises(InsufficientDataError):
            saturation_diagnostic(summary)
