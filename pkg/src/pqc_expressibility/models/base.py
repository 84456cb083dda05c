"""Base class shared by the regressors.

A regressor maps the 6 normalized gate-count features to a KL expressibility
value. Concrete models implement `predict`, `to_dict` and `from_dict`; the
registry in `pqc_expressibility.models` persists any of them the same way.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ModelError
from ..messages import ERROR_FEATURE_ARITY, ERROR_LENGTH_MISMATCH, ERROR_NON_FINITE, ERROR_SHAPE

FloatArray = NDArray[np.float64]


def validate_training_data(X: ArrayLike, y: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Return float copies of X (2-D) and y (1-D), checking shape and finiteness.

    Raises:
        ModelError: On bad shapes, mismatched lengths or non-finite values.

    """
    features = np.array(X, dtype=np.float64)
    targets = np.array(y, dtype=np.float64)
    if features.ndim != 2:
        raise ModelError(ERROR_SHAPE.format(name="X", shape=features.shape, expected="(rows, features)"))
    if targets.ndim != 1:
        raise ModelError(ERROR_SHAPE.format(name="y", shape=targets.shape, expected="(rows,)"))
    if features.shape[0] != targets.shape[0]:
        raise ModelError(ERROR_LENGTH_MISMATCH.format(left=features.shape[0], right=targets.shape[0]))
    if not np.all(np.isfinite(features)):
        raise ModelError(ERROR_NON_FINITE.format(name="X"))
    if not np.all(np.isfinite(targets)):
        raise ModelError(ERROR_NON_FINITE.format(name="y"))
    return features, targets


class Regressor(ABC):
    """Abstract base for trained regressors.

    Subclasses must implement:
      * predict_batch: predictions for a feature matrix.
      * to_dict / from_dict: JSON-friendly (de)serialization.

    Attributes:
        kind: Registry key, e.g. "gbt" or "lasso".
        n_features: Expected feature count.

    """

    kind: ClassVar[str]
    n_features: int

    @abstractmethod
    def predict_batch(self, X: FloatArray) -> FloatArray:
        """Predict for a validated (rows, n_features) matrix."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """Serialize to plain JSON types."""

    @classmethod
    @abstractmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Regressor:
        """Rebuild from `to_dict` output."""

    def check_features(self, X: ArrayLike) -> FloatArray:
        """Coerce input to a 2-D float matrix with the model's arity.

        Raises:
            ModelError: On wrong arity or non-finite values.

        """
        matrix = np.asarray(X, dtype=np.float64)
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
        if matrix.ndim != 2 or matrix.shape[1] != self.n_features:
            actual = matrix.shape[-1] if matrix.ndim else 0
            raise ModelError(ERROR_FEATURE_ARITY.format(expected=self.n_features, actual=actual))
        if not np.all(np.isfinite(matrix)):
            raise ModelError(ERROR_NON_FINITE.format(name="x"))
        return matrix

    def predict(self, X: ArrayLike) -> FloatArray | float:
        """Predict for one feature vector (returns float) or a matrix (returns array)."""
        single = np.ndim(X) == 1
        values = self.predict_batch(self.check_features(X))
        return float(values[0]) if single else values


__all__ = ["FloatArray", "Regressor", "validate_training_data"]
