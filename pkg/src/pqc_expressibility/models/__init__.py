"""Regressors predicting KL expressibility from gate-count features.

Public API:
    - GBTModel / fit_gbt: from-scratch gradient-boosted trees.
    - LassoModel / fit_lasso: L1-regularized linear baseline.
    - train_test_split / r2: hold-out evaluation.
    - MODELS: registry of persisted model kinds.
    - save_model / load_model: model files (artifact header + JSON document).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..artifacts import read_document, write_document
from ..constants import MODEL_GBT, MODEL_LASSO
from ..errors import MissingInputError, ModelError
from ..messages import ERROR_MODEL_FILE, ERROR_MODEL_NOT_FOUND, ERROR_UNKNOWN_MODEL
from .base import Regressor, validate_training_data
from .evaluation import DataSplit, mse, r2, train_test_split
from .gbt import GBTHyperparams, GBTModel, Tree, fit_gbt, predict
from .lasso import LassoModel, cross_validate_lambda, fit_lasso

MODELS: dict[str, type[Regressor]] = {
    MODEL_GBT: GBTModel,
    MODEL_LASSO: LassoModel,
}

GridKey = tuple[int, int, int]


@dataclass(frozen=True)
class ModelBundle:
    """A loaded model file.

    Attributes:
        model: The regressor.
        test_keys: (template_id, n_qubits, n_layers) of the hold-out rows.
        metrics: Evaluation values recorded at training time.
        config: Run configuration from the file header.

    """

    model: Regressor
    test_keys: frozenset[GridKey] = frozenset()
    metrics: dict[str, float] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)


def get_model_class(kind: str) -> type[Regressor]:
    """Registry lookup.

    Raises:
        ModelError: If the kind is not registered.

    """
    try:
        return MODELS[kind]
    except KeyError:
        raise ModelError(ERROR_UNKNOWN_MODEL.format(kind=kind)) from None


def save_model(
    model: Regressor,
    path: str | Path,
    config: Mapping[str, Any] | None = None,
    test_keys: Iterable[GridKey] = (),
    metrics: Mapping[str, float] | None = None,
) -> Path:
    """Write a model file.

    Args:
        model: Any registered regressor.
        path: Destination.
        config: Run configuration echoed into the header.
        test_keys: Grid keys of the hold-out rows, stored sorted.
        metrics: Evaluation values to store alongside.

    Returns:
        The written path.

    """
    document = {
        "kind": model.kind,
        "model": model.to_dict(),
        "test_keys": [list(key) for key in sorted(test_keys)],
        "metrics": dict(metrics or {}),
    }
    return write_document(path, document, config)


def load_model(path: str | Path) -> ModelBundle:
    """Read a model file written by `save_model`.

    Raises:
        MissingInputError: If the file does not exist.
        ModelError: If the document is malformed or names an unknown kind.

    """
    if not Path(path).is_file():
        raise MissingInputError(ERROR_MODEL_NOT_FOUND.format(path=path))
    try:
        config, document = read_document(path)
    except ValueError as e:
        raise ModelError(ERROR_MODEL_FILE.format(path=path, detail=e)) from e
    if not isinstance(document, dict) or "kind" not in document or "model" not in document:
        raise ModelError(ERROR_MODEL_FILE.format(path=path, detail="missing 'kind' or 'model'"))
    model = get_model_class(str(document["kind"])).from_dict(document["model"])
    try:
        keys = frozenset((int(t), int(n), int(L)) for t, n, L in document.get("test_keys", []))
        metrics = {str(k): float(v) for k, v in document.get("metrics", {}).items()}
    except (TypeError, ValueError) as e:
        raise ModelError(ERROR_MODEL_FILE.format(path=path, detail=e)) from e
    return ModelBundle(model=model, test_keys=keys, metrics=metrics, config=config)


__all__ = [
    "MODELS",
    "DataSplit",
    "GBTHyperparams",
    "GBTModel",
    "LassoModel",
    "ModelBundle",
    "Regressor",
    "Tree",
    "cross_validate_lambda",
    "fit_gbt",
    "fit_lasso",
    "get_model_class",
    "load_model",
    "mse",
    "predict",
    "r2",
    "save_model",
    "train_test_split",
    "validate_training_data",
]
