"""Hold-out splitting and regression metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ConfigError, InsufficientDataError, ModelError
from ..messages import ERROR_CONSTANT_TRUTH, ERROR_FRACTION, ERROR_INSUFFICIENT_DATA, ERROR_LENGTH_MISMATCH


@dataclass(frozen=True)
class DataSplit:
    """Sorted row indices of the training and hold-out parts."""

    train: NDArray[np.int64]
    test: NDArray[np.int64]

    @property
    def sizes(self) -> tuple[int, int]:
        return int(self.train.shape[0]), int(self.test.shape[0])


def train_test_split(n_rows: int, test_fraction: float, seed: int) -> DataSplit:
    """Uniform split without replacement; the test part holds floor(n * fraction) rows.

    A fraction small enough that floor(n * fraction) is 0 does not round up to
    one test row: it raises `InsufficientDataError`.

    Args:
        n_rows: Number of rows to split.
        test_fraction: Hold-out share, strictly between 0 and 1.
        seed: Seed of the permutation; equal seeds give equal splits.

    Returns:
        The split, with both index arrays sorted.

    Raises:
        ConfigError: If the fraction is outside (0, 1).
        InsufficientDataError: If the test or the training part would be empty.

    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(ERROR_FRACTION.format(name="test_fraction", value=test_fraction))
    n_test = int(np.floor(n_rows * test_fraction))
    if n_test < 1 or n_test >= n_rows:
        detail = f"{n_rows} rows cannot be split with test fraction {test_fraction}"
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail=detail))
    order = np.random.default_rng(seed).permutation(n_rows)
    return DataSplit(train=np.sort(order[n_test:]), test=np.sort(order[:n_test]))


def r2(predictions: ArrayLike, truth: ArrayLike) -> float:
    """Coefficient of determination 1 - SS_res / SS_tot.

    Raises:
        ModelError: On length mismatch or constant truth values.
        InsufficientDataError: With fewer than 2 values.

    """
    pred = np.asarray(predictions, dtype=np.float64).ravel()
    true = np.asarray(truth, dtype=np.float64).ravel()
    if pred.shape != true.shape:
        raise ModelError(ERROR_LENGTH_MISMATCH.format(left=pred.shape[0], right=true.shape[0]))
    if true.shape[0] < 2:
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail=f"{true.shape[0]} values for R^2"))
    ss_tot = float(np.sum((true - true.mean()) ** 2))
    if ss_tot == 0.0:
        raise ModelError(ERROR_CONSTANT_TRUTH)
    return 1.0 - float(np.sum((true - pred) ** 2)) / ss_tot


def mse(predictions: ArrayLike, truth: ArrayLike) -> float:
    pred = np.asarray(predictions, dtype=np.float64).ravel()
    true = np.asarray(truth, dtype=np.float64).ravel()
    if pred.shape != true.shape:
        raise ModelError(ERROR_LENGTH_MISMATCH.format(left=pred.shape[0], right=true.shape[0]))
    return float(np.mean((true - pred) ** 2)) if true.shape[0] else 0.0


__all__ = ["DataSplit", "mse", "r2", "train_test_split"]
