"""Unit tests for the LASSO baseline."""

import numpy as np
import pytest

from pqc_expressibility.errors import InsufficientDataError, ModelError
from pqc_expressibility.models import LassoModel, cross_validate_lambda, fit_lasso
from pqc_expressibility.models.lasso import Standardizer, lambda_grid, lambda_max, soft_threshold

TIGHT = {"tol": 1e-13, "max_iter": 200_000}


def _least_squares_predictions(X, y):
    design = np.column_stack([np.ones(X.shape[0]), X])
    coefficients, *_ = np.linalg.lstsq(design, y, rcond=None)
    return design @ coefficients, coefficients[1:]


class TestSoftThreshold:
    """Test the shrinkage operator."""

    @pytest.mark.parametrize(("value", "lam", "expected"), [(3.0, 1.0, 2.0), (-3.0, 1.0, -2.0), (0.5, 1.0, 0.0), (-1.0, 1.0, 0.0)])
    def test_values(self, value, lam, expected):
        assert soft_threshold(value, lam) == expected


class TestFit:
    """Test penalized fits."""

    def test_large_penalty_zeroes_every_weight(self, smooth_data):
        X, y = smooth_data
        model = fit_lasso(X, y, lam=1e6)
        assert np.all(model.weights == 0.0)
        assert model.intercept == pytest.approx(y.mean())
        assert np.allclose(model.predict(X), y.mean())

    def test_lambda_max_is_the_zero_threshold(self, smooth_data):
        X, y = smooth_data
        top = lambda_max(X, y)
        assert np.all(fit_lasso(X, y, lam=top * (1.0 + 1e-9)).weights == 0.0)
        assert np.any(fit_lasso(X, y, lam=0.9 * top).weights != 0.0)

    def test_zero_penalty_matches_least_squares(self, smooth_data):
        X, y = smooth_data
        model = fit_lasso(X, y, lam=0.0, **TIGHT)
        expected, coefficients = _least_squares_predictions(X, y)
        assert model.converged
        assert np.allclose(model.predict(X), expected, atol=1e-6)
        assert np.allclose(model.coefficients, coefficients, atol=1e-6)

    def test_optimality_conditions(self, smooth_data):
        X, y = smooth_data
        lam = 0.05
        model = fit_lasso(X, y, lam=lam, **TIGHT)
        Z = Standardizer(model.means, model.scales).transform(X)
        gradient = Z.T @ (y - model.predict(X)) / X.shape[0]
        active = model.weights != 0.0
        assert np.allclose(gradient[active], lam * np.sign(model.weights[active]), atol=1e-8)
        assert np.all(np.abs(gradient[~active]) <= lam + 1e-8)

    def test_duplicated_column_keeps_predictions(self, smooth_data):
        X, y = smooth_data
        doubled = np.column_stack([X, X[:, 0]])
        single = fit_lasso(X, y, lam=0.02, **TIGHT)
        dup = fit_lasso(doubled, y, lam=0.02, **TIGHT)
        assert np.allclose(dup.predict(doubled), single.predict(X), atol=1e-6)

    def test_constant_column_ignored(self, smooth_data):
        X, y = smooth_data
        padded = np.column_stack([X, np.full(X.shape[0], 3.0)])
        model = fit_lasso(padded, y, lam=0.01)
        assert model.weights[-1] == 0.0
        assert model.coefficients[-1] == 0.0

    def test_negative_penalty(self, smooth_data):
        X, y = smooth_data
        with pytest.raises(ModelError):
            fit_lasso(X, y, lam=-1.0)

    def test_no_rows(self):
        with pytest.raises(InsufficientDataError):
            fit_lasso(np.zeros((0, 3)), np.zeros(0), lam=0.1)


class TestCrossValidation:
    """Test penalty selection."""

    def test_grid_is_descending_from_lambda_max(self, smooth_data):
        X, y = smooth_data
        grid = lambda_grid(X, y, size=10)
        assert grid[0] == pytest.approx(lambda_max(X, y))
        assert np.all(np.diff(grid) < 0)
        assert grid[-1] == pytest.approx(1e-4 * grid[0])

    def test_best_lambda_comes_from_grid(self, smooth_data):
        X, y = smooth_data
        result = cross_validate_lambda(X, y, seed=3)
        assert result.best_lambda in result.lambdas
        assert result.mse.shape == result.lambdas.shape
        assert result.mse[list(result.lambdas).index(result.best_lambda)] == result.mse.min()

    def test_deterministic(self, smooth_data):
        X, y = smooth_data
        assert cross_validate_lambda(X, y, seed=5).best_lambda == cross_validate_lambda(X, y, seed=5).best_lambda

    def test_fit_without_penalty_uses_cross_validation(self, smooth_data):
        X, y = smooth_data
        model = fit_lasso(X, y, seed=5)
        assert model.lam == cross_validate_lambda(X, y, seed=5).best_lambda

    def test_needs_two_rows(self):
        with pytest.raises(InsufficientDataError):
            cross_validate_lambda(np.ones((1, 2)), np.ones(1))


class TestSerialization:
    """Test dict conversion of LASSO models."""

    def test_round_trip(self, smooth_data):
        X, y = smooth_data
        model = fit_lasso(X, y, lam=0.01)
        restored = LassoModel.from_dict(model.to_dict())
        assert np.array_equal(restored.predict(X), model.predict(X))
        assert restored.lam == model.lam

    def test_length_mismatch_rejected(self, smooth_data):
        X, y = smooth_data
        data = fit_lasso(X, y, lam=0.01).to_dict()
        data["weights"] = data["weights"][:-1]
        with pytest.raises(ModelError):
            LassoModel.from_dict(data)
