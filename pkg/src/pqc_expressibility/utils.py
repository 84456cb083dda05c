"""Utility functions for PQC Expressibility.

This module centralizes:
  * Logger setup driven by `PQC_EXPR_LOG_LEVEL`.
  * printf-style logging that tolerates bad arguments.
  * Package version lookup for artifact headers.
  * Progress helpers (remaining-time estimate and duration formatting).
"""

from __future__ import annotations

import functools
import importlib.metadata
import logging
import sys
from typing import Any

from .config import get_log_level
from .constants import FALLBACK_VERSION, LOG_FORMAT, PACKAGE_NAME

_DURATION_UNITS = (("h", 3600), ("m", 60), ("s", 1))


def setup_logger(name: str) -> logging.Logger:
    """Return the namespaced logger, attaching a stderr handler on first use.

    The level is re-read from the environment on every call so tests and
    long-lived processes pick up changes. Records do not propagate to the root
    logger, which keeps pytest output free of duplicates.

    Args:
        name: Logger name, usually the module's ``__name__``.

    Returns:
        The configured logger.

    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.getLevelName(get_log_level()))
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def safe_log(logger: logging.Logger, level: int, message: str, *args: Any) -> None:
    """Interpolate ``message % args`` and log it; a mismatch appends the args instead.

    Args:
        logger: Target logger.
        level: Logging level.
        message: printf-style template.
        *args: Substitution values.

    """
    text = message
    if args:
        try:
            text = message % args
        except (TypeError, ValueError, KeyError):
            text = " ".join((message, *(str(arg) for arg in args)))
    logger.log(level, text)


@functools.cache
def get_version() -> str:
    """Installed distribution version, or `FALLBACK_VERSION` from a source checkout."""
    try:
        return importlib.metadata.version(PACKAGE_NAME)
    except importlib.metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return FALLBACK_VERSION


def remaining_seconds(elapsed: float, done: int, remaining: int) -> float:
    """Linear extrapolation of the time left after `done` of `done + remaining` items."""
    if done <= 0:
        return 0.0
    return elapsed / done * remaining


def format_duration(seconds: float) -> str:
    """Render a duration with its two most significant units.

    ``45 -> "45s"``, ``125 -> "2m 5s"``, ``3660 -> "1h 1m"``, ``3600 -> "1h"``.
    Fractions are truncated and negative values clamp to zero.
    """
    left = max(0, int(seconds))
    parts: list[str] = []
    for suffix, size in _DURATION_UNITS:
        value, left = divmod(left, size)
        if value or parts:
            parts.append(f"{value}{suffix}")
    parts = [p for p in parts[:2] if not p.startswith("0")]
    return " ".join(parts) or "0s"


__all__ = [
    "format_duration",
    "get_version",
    "remaining_seconds",
    "safe_log",
    "setup_logger",
]
