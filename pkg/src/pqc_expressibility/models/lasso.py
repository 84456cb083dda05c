"""L1-regularized linear baseline fitted by cyclic coordinate descent.

Features are standardized (population standard deviation) before fitting and
the objective is ``(1 / 2n) * ||y - b - Z w||^2 + lam * ||w||_1``. Constant
columns keep a zero weight. The penalty is either given or chosen by k-fold
cross-validation over a log-spaced grid below the smallest all-zero penalty.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from ..constants import (
    DEFAULT_LASSO_CV_FOLDS,
    DEFAULT_LASSO_GRID_RATIO,
    DEFAULT_LASSO_GRID_SIZE,
    DEFAULT_LASSO_MAX_ITER,
    DEFAULT_LASSO_TOLERANCE,
    MODEL_LASSO,
)
from ..dataset import FeatureScaling
from ..errors import InsufficientDataError, ModelError
from ..messages import ERROR_HYPERPARAMS, ERROR_INSUFFICIENT_DATA, ERROR_MODEL_FILE, LOG_LASSO_CV, LOG_LASSO_NOT_CONVERGED
from ..utils import safe_log, setup_logger
from .base import FloatArray, Regressor, validate_training_data

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Standardizer:
    """Column means and population standard deviations (0 for constant columns)."""

    means: FloatArray
    scales: FloatArray

    @classmethod
    def fit(cls, X: FloatArray) -> Standardizer:
        return cls(X.mean(axis=0), X.std(axis=0))

    def transform(self, X: FloatArray) -> FloatArray:
        safe = np.where(self.scales > 0, self.scales, 1.0)
        return np.where(self.scales > 0, (X - self.means) / safe, 0.0)


def soft_threshold(value: float, lam: float) -> float:
    """sign(value) * max(|value| - lam, 0)."""
    if value > lam:
        return value - lam
    if value < -lam:
        return value + lam
    return 0.0


def coordinate_descent(
    Z: FloatArray,
    y_centered: FloatArray,
    lam: float,
    weights: FloatArray | None = None,
    tol: float = DEFAULT_LASSO_TOLERANCE,
    max_iter: int = DEFAULT_LASSO_MAX_ITER,
) -> tuple[FloatArray, bool]:
    """Minimize the penalized objective on standardized columns.

    Args:
        Z: Standardized features (zero-variance columns are all zeros).
        y_centered: Targets minus their mean.
        lam: L1 penalty (>= 0).
        weights: Warm start.
        tol: Stop once the largest weight change of a sweep falls below this.
        max_iter: Sweep limit.

    Returns:
        (weights, converged).

    """
    n, p = Z.shape
    w = np.zeros(p) if weights is None else np.array(weights, dtype=np.float64)
    residual = y_centered - Z @ w
    col_norms = np.einsum("ij,ij->j", Z, Z) / n
    active = col_norms > 0
    max_change = 0.0
    for _ in range(max_iter):
        max_change = 0.0
        for j in range(p):
            if not active[j]:
                continue
            old = w[j]
            rho = float(Z[:, j] @ residual) / n + col_norms[j] * old
            new = soft_threshold(rho, lam) / col_norms[j]
            if new != old:
                residual -= Z[:, j] * (new - old)
                w[j] = new
                max_change = max(max_change, abs(new - old))
        if max_change < tol:
            return w, True
    safe_log(logger, logging.WARNING, LOG_LASSO_NOT_CONVERGED, max_iter, max_change)
    return w, False


def lambda_max(X: FloatArray, y: FloatArray) -> float:
    """Smallest penalty for which every standardized weight is zero."""
    Z = Standardizer.fit(X).transform(X)
    return float(np.max(np.abs(Z.T @ (y - y.mean())))) / X.shape[0] if X.shape[1] else 0.0


def lambda_grid(X: FloatArray, y: FloatArray, size: int = DEFAULT_LASSO_GRID_SIZE, ratio: float = DEFAULT_LASSO_GRID_RATIO) -> FloatArray:
    """Descending log-spaced penalties from lambda_max down to ratio * lambda_max."""
    return lambda_max(X, y) * np.logspace(0.0, np.log10(ratio), size)


@dataclass(frozen=True)
class CrossValidation:
    """Cross-validated MSE per grid penalty and the selected one."""

    lambdas: FloatArray
    mse: FloatArray
    best_lambda: float


def cross_validate_lambda(
    X: ArrayLike,
    y: ArrayLike,
    lambdas: ArrayLike | None = None,
    n_folds: int = DEFAULT_LASSO_CV_FOLDS,
    seed: int = 0,
) -> CrossValidation:
    """Choose the penalty with the lowest mean validation MSE.

    Rows are permuted with `seed` and split into `min(n_folds, n)` folds; each
    fold is standardized on its own training part. Ties go to the larger penalty.

    Raises:
        InsufficientDataError: With fewer than 2 rows.

    """
    features, targets = validate_training_data(X, y)
    n = features.shape[0]
    if n < 2:
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail=f"{n} rows for cross-validation"))
    grid = lambda_grid(features, targets) if lambdas is None else np.asarray(lambdas, dtype=np.float64)
    folds = np.array_split(np.random.default_rng(seed).permutation(n), min(n_folds, n))
    errors = np.zeros((len(folds), grid.shape[0]))
    for f, held_out in enumerate(folds):
        train = np.setdiff1d(np.arange(n), held_out)
        scaler = Standardizer.fit(features[train])
        Z_train, Z_test = scaler.transform(features[train]), scaler.transform(features[held_out])
        offset = targets[train].mean()
        weights = None
        for k, lam in enumerate(grid):
            weights, _ = coordinate_descent(Z_train, targets[train] - offset, float(lam), weights)
            errors[f, k] = float(np.mean((targets[held_out] - offset - Z_test @ weights) ** 2))
    mse = errors.mean(axis=0)
    best = int(np.argmin(mse))
    safe_log(logger, logging.INFO, LOG_LASSO_CV, grid[best], mse[best])
    return CrossValidation(grid, mse, float(grid[best]))


@dataclass(frozen=True)
class LassoModel(Regressor):
    """Linear model over standardized features.

    Prediction is ``intercept + ((x - means) / scales) @ weights`` with constant
    columns contributing nothing.
    """

    kind: ClassVar[str] = MODEL_LASSO

    intercept: float
    weights: FloatArray
    lam: float
    means: FloatArray
    scales: FloatArray
    n_features: int
    converged: bool = True
    scaling: FeatureScaling | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def coefficients(self) -> FloatArray:
        """Weights expressed on the unstandardized inputs."""
        safe = np.where(self.scales > 0, self.scales, 1.0)
        return np.where(self.scales > 0, self.weights / safe, 0.0)

    def predict_batch(self, X: FloatArray) -> FloatArray:
        Z = Standardizer(self.means, self.scales).transform(X)
        return self.intercept + Z @ self.weights

    def to_dict(self) -> dict[str, Any]:
        return {
            "intercept": self.intercept,
            "weights": self.weights.tolist(),
            "lambda": self.lam,
            "means": self.means.tolist(),
            "scales": self.scales.tolist(),
            "n_features": self.n_features,
            "converged": self.converged,
            "scaling": None if self.scaling is None else self.scaling.to_dict(),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> LassoModel:
        try:
            model = cls(
                intercept=float(data["intercept"]),
                weights=np.asarray(data["weights"], dtype=np.float64),
                lam=float(data["lambda"]),
                means=np.asarray(data["means"], dtype=np.float64),
                scales=np.asarray(data["scales"], dtype=np.float64),
                n_features=int(data["n_features"]),
                converged=bool(data.get("converged", True)),
                scaling=None if data.get("scaling") is None else FeatureScaling.from_dict(data["scaling"]),
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ModelError(ERROR_MODEL_FILE.format(path="<lasso>", detail=e)) from e
        if not model.weights.shape == model.means.shape == model.scales.shape == (model.n_features,):
            raise ModelError(ERROR_MODEL_FILE.format(path="<lasso>", detail="weight and scaling lengths differ"))
        return model


def fit_lasso(
    X: ArrayLike,
    y: ArrayLike,
    lam: float | None = None,
    n_folds: int = DEFAULT_LASSO_CV_FOLDS,
    seed: int = 0,
    scaling: FeatureScaling | None = None,
    tol: float = DEFAULT_LASSO_TOLERANCE,
    max_iter: int = DEFAULT_LASSO_MAX_ITER,
) -> LassoModel:
    """Fit the LASSO baseline.

    Args:
        X: Feature matrix.
        y: Targets.
        lam: Fixed penalty; None selects it by cross-validation.
        n_folds: Folds used when `lam` is None.
        seed: Seed of the fold assignment.
        scaling: Normalization metadata stored with the model.
        tol: Convergence threshold on the largest weight change.
        max_iter: Coordinate-descent sweep limit.

    Returns:
        The fitted model; the intercept equals mean(y).

    Raises:
        ModelError: On bad shapes, non-finite values or a negative penalty.
        InsufficientDataError: With no rows, or fewer than 2 when cross-validating.

    """
    features, targets = validate_training_data(X, y)
    if features.shape[0] == 0:
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail="0 rows"))
    if lam is None:
        lam = cross_validate_lambda(features, targets, n_folds=n_folds, seed=seed).best_lambda
    elif not np.isfinite(lam) or lam < 0:
        raise ModelError(ERROR_HYPERPARAMS.format(name="lambda", value=lam))

    scaler = Standardizer.fit(features)
    intercept = float(targets.mean())
    weights, converged = coordinate_descent(scaler.transform(features), targets - intercept, float(lam), tol=tol, max_iter=max_iter)
    return LassoModel(
        intercept=intercept,
        weights=weights,
        lam=float(lam),
        means=scaler.means,
        scales=scaler.scales,
        n_features=features.shape[1],
        converged=converged,
        scaling=scaling,
    )


__all__ = [
    "CrossValidation",
    "LassoModel",
    "Standardizer",
    "coordinate_descent",
    "cross_validate_lambda",
    "fit_lasso",
    "lambda_grid",
    "lambda_max",
    "soft_threshold",
]
