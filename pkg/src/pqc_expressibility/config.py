"""Configuration utilities for PQC Expressibility.

This module centralizes environment-driven defaults and the validated run
configuration that every command builds before doing any work.

Key env vars:
  * PQC_EXPR_CATALOG: Catalog file overriding the shipped default.
  * PQC_EXPR_SAMPLES / PQC_EXPR_BINS / PQC_EXPR_REPS / PQC_EXPR_SEED: Sampling defaults.
  * PQC_EXPR_THREADS: Worker threads (defaults to available parallelism).
  * PQC_EXPR_OUT: Output file or directory.
  * PQC_EXPR_PARAM_CAP: Enable the 2^n parameter cap for grid enumeration.
  * PQC_EXPR_TEST_FRACTION: Hold-out fraction for training.
  * PQC_EXPR_LOG_LEVEL: Logging level (defaults to "INFO").
  * PQC_EXPR_MLFLOW / PQC_EXPR_MLFLOW_EXPERIMENT: Optional MLflow tracking.

Precedence is always CLI flag, then environment variable, then built-in default.
"""

from __future__ import annotations

import os
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from typing import Any, TypeVar

from .constants import (
    DEFAULT_BINS,
    DEFAULT_GBT_LEARNING_RATE,
    DEFAULT_GBT_MAX_LEAVES,
    DEFAULT_GBT_MIN_SAMPLES_LEAF,
    DEFAULT_GBT_ROUNDS,
    DEFAULT_GBT_SUBSAMPLE,
    DEFAULT_LAYERS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_LAYERS,
    DEFAULT_OUT,
    DEFAULT_QUBITS,
    DEFAULT_REPS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TEST_FRACTION,
    ENV_LOG_LEVEL,
    ENV_THREADS,
    LOG_LEVELS,
    MAX_QUBITS,
    MIN_QUBITS,
    RANGE_SEPARATOR,
    TRUTHY_VALUES,
)
from .errors import ConfigError
from .messages import (
    ERROR_FRACTION,
    ERROR_INVALID_RANGE,
    ERROR_POSITIVE,
    ERROR_RANGE_BOUNDS,
)

T = TypeVar("T", int, float)


def get_env_var(name: str, default: str | None = None) -> str | None:
    """Return ``os.environ[name]``, or `default` when the variable is unset or blank."""
    value = os.environ.get(name)
    if value is None or not value.strip():
        return default
    return value


def get_env_bool(name: str, default: bool = False) -> bool:
    """Parse a boolean flag; any of `TRUTHY_VALUES` (case-insensitive) is true.

    Args:
        name: Environment variable name.
        default: Used when the variable is unset or blank.

    Returns:
        The flag value.

    """
    value = get_env_var(name)
    return default if value is None else value.strip().lower() in TRUTHY_VALUES


def _get_env_number(name: str, default: T, cast: Callable[[str], T]) -> T:
    value = get_env_var(name)
    if value is None:
        return default
    try:
        return cast(value.strip())
    except ValueError:
        return default


def get_env_int(name: str, default: int) -> int:
    """Integer variable; unparseable values fall back to `default`."""
    return _get_env_number(name, default, int)


def get_env_float(name: str, default: float) -> float:
    """Float variable; unparseable values fall back to `default`."""
    return _get_env_number(name, default, float)


def get_log_level() -> str:
    """Return the configured log level name, uppercased; unknown names fall back to INFO."""
    level = (get_env_var(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL) or DEFAULT_LOG_LEVEL).upper()
    return level if level in LOG_LEVELS else DEFAULT_LOG_LEVEL


def get_default_threads() -> int:
    """Return the worker thread count from PQC_EXPR_THREADS or the CPU count.

    Returns:
        A positive thread count.

    """
    fallback = os.cpu_count() or 1
    return max(1, get_env_int(ENV_THREADS, fallback))


def parse_range(value: str | int | tuple[int, int]) -> tuple[int, int]:
    """Parse an inclusive integer range such as "4" or "2..18".

    Args:
        value: Range text, a single integer, or an already parsed pair.

    Returns:
        Inclusive `(low, high)` pair with `low <= high`.

    Raises:
        ConfigError: If the text is malformed or the range is empty.

    """
    if isinstance(value, tuple):
        low, high = value
    elif isinstance(value, int):
        low = high = value
    else:
        text = value.strip()
        try:
            if RANGE_SEPARATOR in text:
                left, right = text.split(RANGE_SEPARATOR, 1)
                low, high = int(left), int(right)
            else:
                low = high = int(text)
        except ValueError:
            msg = ERROR_INVALID_RANGE.format(value=value)
            raise ConfigError(msg) from None
    if low > high:
        msg = ERROR_INVALID_RANGE.format(value=value)
        raise ConfigError(msg)
    return int(low), int(high)


def _require_at_least(name: str, value: float, minimum: float) -> None:
    if value < minimum:
        msg = ERROR_POSITIVE.format(name=name, minimum=minimum, value=value)
        raise ConfigError(msg)


def _require_within(name: str, bounds: tuple[int, int], lowest: int, highest: int) -> None:
    low, high = bounds
    if low < lowest or high > highest:
        msg = ERROR_RANGE_BOUNDS.format(name=name, low=low, high=high, min=lowest, max=highest)
        raise ConfigError(msg)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one CLI invocation.

    Attributes:
        command: Subcommand name.
        catalog: Catalog path, or None for the shipped catalog.
        qubits: Inclusive qubit range.
        layers: Inclusive layer range.
        max_layers: Upper bound applied to the layer range.
        samples: Fidelity pairs per repetition (S).
        bins: Histogram bins (B).
        reps: Repetitions (R).
        seed: Master seed.
        threads: Worker threads; never affects results.
        out: Output file or directory.
        resume: Reuse matching rows of an existing dataset.
        param_cap: Drop instances with more than 2^n parameters.
        test_fraction: Hold-out fraction.
        models: Model kinds to train.
        gbt: GBT hyperparameters (rounds, learning_rate, max_leaves, ...).
        lasso_lambda: Fixed LASSO lambda, or None for cross-validation.
        extra: Command-specific settings echoed into artifact headers.

    """

    command: str
    catalog: str | None = None
    qubits: tuple[int, int] = DEFAULT_QUBITS
    layers: tuple[int, int] = DEFAULT_LAYERS
    max_layers: int = DEFAULT_MAX_LAYERS
    samples: int = DEFAULT_SAMPLES
    bins: int = DEFAULT_BINS
    reps: int = DEFAULT_REPS
    seed: int = DEFAULT_SEED
    threads: int = 1
    out: str = DEFAULT_OUT
    resume: bool = False
    param_cap: bool = False
    test_fraction: float = DEFAULT_TEST_FRACTION
    models: tuple[str, ...] = ()
    gbt: dict[str, Any] = field(
        default_factory=lambda: {
            "n_rounds": DEFAULT_GBT_ROUNDS,
            "learning_rate": DEFAULT_GBT_LEARNING_RATE,
            "max_leaves": DEFAULT_GBT_MAX_LEAVES,
            "min_samples_leaf": DEFAULT_GBT_MIN_SAMPLES_LEAF,
            "subsample": DEFAULT_GBT_SUBSAMPLE,
        },
    )
    lasso_lambda: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> RunConfig:
        """Check every field before any computation starts.

        Returns:
            The same config, for chaining.

        Raises:
            ConfigError: On the first invalid field.

        """
        _require_within("qubits", self.qubits, MIN_QUBITS, MAX_QUBITS)
        _require_at_least("layers", self.layers[0], 1)
        _require_at_least("max_layers", self.max_layers, 1)
        _require_at_least("samples", self.samples, 1)
        _require_at_least("bins", self.bins, 2)
        _require_at_least("reps", self.reps, 1)
        _require_at_least("seed", self.seed, 0)
        _require_at_least("threads", self.threads, 1)
        if not 0.0 < self.test_fraction < 1.0:
            msg = ERROR_FRACTION.format(name="test_fraction", value=self.test_fraction)
            raise ConfigError(msg)
        if self.lasso_lambda is not None:
            _require_at_least("lasso_lambda", self.lasso_lambda, 0.0)
        return self

    def to_header_dict(self) -> dict[str, Any]:
        """Return the reproducibility-relevant settings as a plain dict.

        Thread count and resume mode are execution details that never change
        results, so they are left out to keep headers byte-stable.

        Returns:
            JSON-serializable mapping (callers sort keys when dumping).

        """
        data = asdict(self)
        data.pop("threads", None)
        data.pop("resume", None)
        data["qubits"] = list(self.qubits)
        data["layers"] = list(self.layers)
        data["models"] = list(self.models)
        return data


__all__ = [
    "RunConfig",
    "get_default_threads",
    "get_env_bool",
    "get_env_float",
    "get_env_int",
    "get_env_var",
    "get_log_level",
    "parse_range",
]
