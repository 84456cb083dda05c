"""Exception hierarchy for PQC Expressibility.

Every error raised by the library derives from `PqcExprError` and carries the
process exit code the CLI reports for it.
"""

from __future__ import annotations

from typing import ClassVar

from .constants import (
    EXIT_ERROR,
    EXIT_INSUFFICIENT_DATA,
    EXIT_MISSING_INPUT,
    EXIT_SCHEMA,
    EXIT_USAGE,
)


class PqcExprError(Exception):
    """Base class for all library errors."""

    exit_code: ClassVar[int] = EXIT_ERROR


class ConfigError(PqcExprError, ValueError):
    """Invalid user configuration (flags, env vars, sampling settings)."""

    exit_code: ClassVar[int] = EXIT_USAGE


class CircuitError(PqcExprError, ValueError):
    """Invalid gate, state or circuit input."""


class CatalogError(PqcExprError, ValueError):
    """Catalog file could not be parsed or validated."""

    exit_code: ClassVar[int] = EXIT_SCHEMA


class UnknownTemplateError(CatalogError):
    """A requested template id is not in the catalog."""

    exit_code: ClassVar[int] = EXIT_USAGE


class MissingInputError(PqcExprError, FileNotFoundError):
    """An upstream artifact (catalog, dataset, model) does not exist."""

    exit_code: ClassVar[int] = EXIT_MISSING_INPUT


class DatasetError(PqcExprError, ValueError):
    """Dataset file is corrupted or has an unexpected schema."""

    exit_code: ClassVar[int] = EXIT_SCHEMA


class InsufficientDataError(PqcExprError, ValueError):
    """Too few rows for the requested operation."""

    exit_code: ClassVar[int] = EXIT_INSUFFICIENT_DATA


class ModelError(PqcExprError, ValueError):
    """Invalid model input, hyperparameters or model file."""

    exit_code: ClassVar[int] = EXIT_SCHEMA


class TrackingError(PqcExprError):
    """Experiment tracking backend is unavailable or failed."""


__all__ = [
    "CatalogError",
    "CircuitError",
    "ConfigError",
    "DatasetError",
    "InsufficientDataError",
    "MissingInputError",
    "ModelError",
    "PqcExprError",
    "TrackingError",
    "UnknownTemplateError",
]
