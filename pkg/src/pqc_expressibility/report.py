"""Plot-ready tables written by the `train`, `explain` and `report` commands.

Nothing here renders figures; every table is a CSV artifact with the standard
header so any plotting tool can consume it.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .artifacts import read_table, write_table
from .constants import (
    BEESWARM_COLUMNS,
    BEESWARM_FILE_NAME,
    CONVERGENCE_COLUMNS,
    CORRELATION_LABEL_COLUMN,
    DEPENDENCE_COLUMNS,
    DEPENDENCE_FILE_TEMPLATE,
    FEATURE_NAMES,
    HISTOGRAM_BOUND_COLUMNS,
    IMPORTANCE_COLUMNS,
    IMPORTANCE_FILE_NAME,
    PREDICTION_COLUMNS,
    ROW_KEY_COLUMNS,
    SATURATION_COLUMNS,
    SHAP_VALUES_COLUMNS,
    SHAP_VALUES_FILE_NAME,
)
from .dataset import CorrelationMatrix, ExpressibilityHistogram
from .errors import DatasetError
from .explain import SaturationRow, ShapExplanation, ShapSummary
from .expressibility import ConvergenceRow
from .messages import ERROR_DATASET_ROW, REPORT_UNDEFINED

Config = Mapping[str, Any] | None
GridKey = tuple[int, int, int]


def write_correlation(path: str | Path, matrix: CorrelationMatrix, config: Config = None) -> Path:
    """Square Pearson table; undefined entries are written as NA."""
    rows = [
        [name, *(float(matrix.values[i, j]) if matrix.defined[i, j] else REPORT_UNDEFINED for j in range(len(matrix.names)))]
        for i, name in enumerate(matrix.names)
    ]
    return write_table(path, (CORRELATION_LABEL_COLUMN, *matrix.names), rows, config)


def write_histogram(path: str | Path, histogram: ExpressibilityHistogram, config: Config = None) -> Path:
    """One row per KL bin with the count of every variant."""
    names = sorted(histogram.counts)
    rows = []
    for k in range(histogram.n_bins):
        counts = [int(histogram.counts[name][k]) if k < len(histogram.counts[name]) else 0 for name in names]
        rows.append([k * histogram.bin_width, (k + 1) * histogram.bin_width, *counts])
    return write_table(path, (*HISTOGRAM_BOUND_COLUMNS, *names), rows, config)


def write_convergence(path: str | Path, rows: Sequence[ConvergenceRow], config: Config = None) -> Path:
    return write_table(path, CONVERGENCE_COLUMNS, [[r.samples, r.mean_kl, r.std_kl] for r in rows], config)


def write_predictions(
    path: str | Path,
    keys: Sequence[GridKey],
    truth: Sequence[float],
    predictions: Mapping[str, Sequence[float]],
    config: Config = None,
) -> Path:
    """Hold-out truth next to each model's prediction (missing models left empty)."""
    model_columns = PREDICTION_COLUMNS[len(ROW_KEY_COLUMNS) + 1 :]
    rows = []
    for i, key in enumerate(keys):
        values = [float(predictions[name][i]) if name in predictions else "" for name in model_columns]
        rows.append([*key, float(truth[i]), *values])
    return write_table(path, PREDICTION_COLUMNS, rows, config)


def write_shap_values(
    path: str | Path,
    keys: Sequence[GridKey],
    explanations: Sequence[ShapExplanation],
    summary: ShapSummary,
    config: Config = None,
) -> Path:
    """Per-row attributions with the raw and normalized features they explain."""
    rows = [
        [
            *key,
            explanation.base_value,
            *(float(v) for v in summary.gate_counts[i]),
            *(float(v) for v in summary.normalized_values[i]),
            *(float(v) for v in summary.phi[i]),
        ]
        for i, (key, explanation) in enumerate(zip(keys, explanations, strict=True))
    ]
    return write_table(path, SHAP_VALUES_COLUMNS, rows, config)


def read_shap_values(path: str | Path) -> tuple[list[GridKey], ShapSummary]:
    """Load a table written by `write_shap_values`.

    Raises:
        MissingInputError: If the file does not exist.
        DatasetError: On a header mismatch or a corrupt row.

    """
    table = read_table(path, expected_columns=SHAP_VALUES_COLUMNS)
    width = len(FEATURE_NAMES)
    offset = len(ROW_KEY_COLUMNS) + 1
    keys: list[GridKey] = []
    numbers = []
    for cells, line in zip(table.rows, table.line_numbers, strict=True):
        try:
            if len(cells) != len(SHAP_VALUES_COLUMNS):
                raise ValueError(f"expected {len(SHAP_VALUES_COLUMNS)} cells, got {len(cells)}")
            keys.append((int(cells[0]), int(cells[1]), int(cells[2])))
            numbers.append([float(cell) for cell in cells[offset:]])
        except ValueError as e:
            raise DatasetError(ERROR_DATASET_ROW.format(path=path, row=line, detail=e)) from None
    data = np.array(numbers, dtype=np.float64).reshape(len(numbers), 3 * width)
    summary = ShapSummary(FEATURE_NAMES, data[:, 2 * width :], data[:, width : 2 * width], data[:, :width])
    return keys, summary


def write_importance(path: str | Path, summary: ShapSummary, config: Config = None) -> Path:
    return write_table(path, IMPORTANCE_COLUMNS, summary.importance_rows(), config)


def write_beeswarm(path: str | Path, summary: ShapSummary, config: Config = None) -> Path:
    return write_table(path, BEESWARM_COLUMNS, summary.beeswarm_rows(), config)


def write_dependence(directory: str | Path, summary: ShapSummary, config: Config = None) -> list[Path]:
    """One `dependence_<feature>.csv` per feature."""
    return [
        write_table(Path(directory) / DEPENDENCE_FILE_TEMPLATE.format(feature=name), DEPENDENCE_COLUMNS, summary.dependence_rows(name), config)
        for name in summary.features
    ]


def write_saturation(path: str | Path, rows: Sequence[SaturationRow], config: Config = None) -> Path:
    return write_table(path, SATURATION_COLUMNS, [[r.feature, *r.quartile_means, r.flattening] for r in rows], config)


@dataclass(frozen=True)
class ShapExports:
    """Paths written by `write_shap_exports`."""

    values: Path
    importance: Path
    beeswarm: Path
    dependence: tuple[Path, ...]


def write_shap_exports(
    directory: str | Path,
    keys: Sequence[GridKey],
    explanations: Sequence[ShapExplanation],
    summary: ShapSummary,
    config: Config = None,
) -> ShapExports:
    """Write the per-row values, importance, beeswarm and dependence tables."""
    base = Path(directory)
    return ShapExports(
        values=write_shap_values(base / SHAP_VALUES_FILE_NAME, keys, explanations, summary, config),
        importance=write_importance(base / IMPORTANCE_FILE_NAME, summary, config),
        beeswarm=write_beeswarm(base / BEESWARM_FILE_NAME, summary, config),
        dependence=tuple(write_dependence(base, summary, config)),
    )


__all__ = [
    "ShapExports",
    "read_shap_values",
    "write_beeswarm",
    "write_convergence",
    "write_correlation",
    "write_dependence",
    "write_histogram",
    "write_importance",
    "write_predictions",
    "write_saturation",
    "write_shap_exports",
    "write_shap_values",
]
