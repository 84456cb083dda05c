"""Optional MLflow experiment tracking.

`mlflow` (from the ``tracking`` extra) is imported only when a run is logged,
so the rest of the package works without it.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from pathlib import Path
from types import ModuleType
from typing import Any

from .config import get_env_bool, get_env_var
from .constants import DEFAULT_MLFLOW_EXPERIMENT, ENV_MLFLOW, ENV_MLFLOW_EXPERIMENT
from .errors import TrackingError
from .messages import ERROR_MLFLOW_MISSING, ERROR_TRACKING_FAILED, LOG_TRACKING_RUN
from .utils import safe_log, setup_logger

logger = setup_logger(__name__)


def is_tracking_enabled(flag: bool = False) -> bool:
    """True when requested on the command line or through PQC_EXPR_MLFLOW."""
    return flag or get_env_bool(ENV_MLFLOW, False)


def get_experiment_name() -> str:
    return get_env_var(ENV_MLFLOW_EXPERIMENT, DEFAULT_MLFLOW_EXPERIMENT) or DEFAULT_MLFLOW_EXPERIMENT


def _import_mlflow() -> ModuleType:
    try:
        import mlflow  # type: ignore[import-not-found]
    except ImportError:
        raise TrackingError(ERROR_MLFLOW_MISSING) from None
    return mlflow


def _flatten(params: Mapping[str, Any], prefix: str = "") -> dict[str, str]:
    flat: dict[str, str] = {}
    for key, value in params.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list | tuple):
            flat[name] = ",".join(str(v) for v in value)
        elif value is not None:
            flat[name] = str(value)
    return flat


def log_run(
    params: Mapping[str, Any],
    metrics: Mapping[str, float],
    artifacts: Iterable[str | Path] = (),
    experiment: str | None = None,
    run_name: str | None = None,
) -> str:
    """Log one run and return its id.

    Args:
        params: Run configuration; nested mappings become dotted keys.
        metrics: Numeric results (R^2, MSE, ...).
        artifacts: Files attached to the run.
        experiment: Experiment name (defaults to PQC_EXPR_MLFLOW_EXPERIMENT).
        run_name: Optional display name.

    Returns:
        The MLflow run id.

    Raises:
        TrackingError: If mlflow is not installed or logging fails.

    """
    mlflow = _import_mlflow()
    experiment_name = experiment or get_experiment_name()
    try:
        mlflow.set_experiment(experiment_name)
        with mlflow.start_run(run_name=run_name) as run:
            mlflow.log_params(_flatten(params))
            mlflow.log_metrics({key: float(value) for key, value in metrics.items()})
            for path in artifacts:
                mlflow.log_artifact(str(path))
            run_id = str(run.info.run_id)
    except Exception as e:
        raise TrackingError(ERROR_TRACKING_FAILED.format(error=e)) from e
    safe_log(logger, logging.INFO, LOG_TRACKING_RUN, run_id, experiment_name)
    return run_id


__all__ = ["get_experiment_name", "is_tracking_enabled", "log_run"]
