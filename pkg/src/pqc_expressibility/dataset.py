"""Instance grid, dataset generation and dataset analysis.

The grid is templates x qubits x layers, optionally filtered by the 2^n
parameter cap. `generate` estimates every entry and writes one CSV row per
entry in enumeration order, flushing each row; with `resume=True`, rows of a
previous run sampled with the same settings are reused instead of recomputed.
"""

from __future__ import annotations

import logging
import os
import time
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .artifacts import TableWriter, read_table
from .catalog import CircuitTemplate, GateCountVector, compile_instance, gate_counts
from .constants import (
    DATASET_COLUMNS,
    DEFAULT_LAYERS,
    DEFAULT_MAX_LAYERS,
    DEFAULT_QUBITS,
    ELEMENTARY_COUNT_COLUMNS,
    FEATURE_NAMES,
    MAX_QUBITS,
    MIN_QUBITS,
    VARIANT_LAYERS_ONLY,
    VARIANT_PARAM_CAP,
)
from .errors import ConfigError, DatasetError, InsufficientDataError
from .expressibility import SamplingConfig, estimate_expressibility
from .messages import (
    ERROR_DATASET_ROW,
    ERROR_DATASET_WRITE,
    ERROR_RANGE_EMPTY,
    ERROR_TOO_FEW_RECORDS,
    LOG_DATASET_DONE,
    LOG_DATASET_PROGRESS,
    LOG_RESUME_LOADED,
    WARNING_CONFIG_MISMATCH_ROWS,
    WARNING_CONSTANT_FEATURE,
    WARNING_TRUNCATED_ROW,
)
from .utils import format_duration, remaining_seconds, safe_log, setup_logger

logger = setup_logger(__name__)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, order=True)
class GridEntry:
    """One (template, qubits, layers) point of the grid."""

    template_id: int
    n_qubits: int
    n_layers: int


@dataclass(frozen=True)
class GridFilter:
    """Which grid points to keep.

    Attributes:
        qubits: Inclusive qubit range.
        layers: Inclusive layer range.
        max_layers: Layers above this are dropped.
        param_cap: Keep only instances with at most 2^n parameters.

    """

    qubits: tuple[int, int] = DEFAULT_QUBITS
    layers: tuple[int, int] = DEFAULT_LAYERS
    max_layers: int = DEFAULT_MAX_LAYERS
    param_cap: bool = False

    def __post_init__(self) -> None:
        if self.qubits[0] > self.qubits[1] or self.qubits[0] < MIN_QUBITS or self.qubits[1] > MAX_QUBITS:
            raise ConfigError(ERROR_RANGE_EMPTY.format(name="qubits"))
        if self.layers[0] > min(self.layers[1], self.max_layers) or self.layers[0] < 1:
            raise ConfigError(ERROR_RANGE_EMPTY.format(name="layers"))

    def qubit_values(self) -> range:
        return range(self.qubits[0], self.qubits[1] + 1)

    def layer_values(self) -> range:
        return range(self.layers[0], min(self.layers[1], self.max_layers) + 1)

    def admits(self, n_qubits: int, n_layers: int, n_params: int) -> bool:
        """True when a point passes every enabled constraint."""
        if not (self.qubits[0] <= n_qubits <= self.qubits[1]):
            return False
        if not (self.layers[0] <= n_layers <= min(self.layers[1], self.max_layers)):
            return False
        return not (self.param_cap and n_params > (1 << n_qubits))


@dataclass(frozen=True)
class GridCounts:
    """Decomposed gate counts of one grid point, without simulation."""

    entry: GridEntry
    counts: GateCountVector
    n_params: int


@dataclass(frozen=True)
class ExpressibilityRecord:
    """One dataset row; counts are post-decomposition."""

    template_id: int
    n_qubits: int
    n_layers: int
    rx: int
    ry: int
    rz: int
    frz: int
    h: int
    cnot: int
    cz: int
    n_params: int
    kl_mean: float
    kl_std: float
    samples: int
    bins: int
    reps: int
    seed: int

    @property
    def entry(self) -> GridEntry:
        return GridEntry(self.template_id, self.n_qubits, self.n_layers)

    @property
    def sampling(self) -> tuple[int, int, int, int]:
        return (self.samples, self.bins, self.reps, self.seed)

    def counts(self, names: Sequence[str] = ELEMENTARY_COUNT_COLUMNS) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in names)

    def to_row(self) -> list[Any]:
        return [
            self.template_id,
            self.n_qubits,
            self.n_layers,
            *self.counts(),
            self.n_params,
            self.kl_mean,
            self.kl_std,
            self.samples,
            self.bins,
            self.reps,
            self.seed,
        ]

    @classmethod
    def from_row(cls, cells: Sequence[str]) -> ExpressibilityRecord:
        """Parse CSV cells in `DATASET_COLUMNS` order.

        Raises:
            ValueError: On a wrong cell count, unparsable or negative values.

        """
        if len(cells) != len(DATASET_COLUMNS):
            msg = f"expected {len(DATASET_COLUMNS)} cells, got {len(cells)}"
            raise ValueError(msg)
        ints = [int(cell) for cell in cells[:11]]
        kl_mean, kl_std = float(cells[11]), float(cells[12])
        tail = [int(cell) for cell in cells[13:]]
        if min(ints) < 0 or not (kl_mean >= 0.0 and kl_std >= 0.0):
            msg = "negative or non-finite value"
            raise ValueError(msg)
        return cls(*ints, kl_mean, kl_std, *tail)


@dataclass(frozen=True)
class GenerationSummary:
    """Outcome of `generate`."""

    path: Path
    total: int
    computed: int
    skipped: int


@dataclass(frozen=True)
class FeatureScaling:
    """Per-feature min-max scaling fitted on a record set."""

    names: tuple[str, ...]
    minimums: tuple[float, ...]
    maximums: tuple[float, ...]
    constant: tuple[bool, ...]

    @classmethod
    def fit(cls, raw: FloatArray, names: Sequence[str] = FEATURE_NAMES) -> FeatureScaling:
        lows = raw.min(axis=0)
        highs = raw.max(axis=0)
        constant = tuple(bool(lo == hi) for lo, hi in zip(lows, highs, strict=True))
        for name, flag in zip(names, constant, strict=True):
            if flag:
                safe_log(logger, logging.WARNING, WARNING_CONSTANT_FEATURE, name)
        return cls(tuple(names), tuple(map(float, lows)), tuple(map(float, highs)), constant)

    def transform(self, raw: FloatArray) -> FloatArray:
        """Scale raw counts; constant features map to 0."""
        lows = np.asarray(self.minimums)
        spans = np.asarray(self.maximums) - lows
        safe_spans = np.where(spans > 0, spans, 1.0)
        scaled = (np.asarray(raw, dtype=np.float64) - lows) / safe_spans
        return np.where(np.asarray(self.constant), 0.0, scaled)

    def inverse(self, scaled: FloatArray) -> FloatArray:
        lows = np.asarray(self.minimums)
        return np.asarray(scaled) * (np.asarray(self.maximums) - lows) + lows

    def to_dict(self) -> dict[str, Any]:
        return {
            "names": list(self.names),
            "minimums": list(self.minimums),
            "maximums": list(self.maximums),
            "constant": list(self.constant),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> FeatureScaling:
        return cls(
            tuple(data["names"]),
            tuple(float(v) for v in data["minimums"]),
            tuple(float(v) for v in data["maximums"]),
            tuple(bool(v) for v in data["constant"]),
        )


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson coefficients with an explicit defined-mask.

    Entries involving a zero-variance column are undefined: their value is
    stored as 0.0 and `defined` is False. The diagonal is always 1.
    """

    names: tuple[str, ...]
    values: FloatArray
    defined: NDArray[np.bool_]

    def get(self, a: str, b: str) -> float | None:
        i, j = self.names.index(a), self.names.index(b)
        return float(self.values[i, j]) if self.defined[i, j] else None


@dataclass(frozen=True)
class ExpressibilityHistogram:
    """Counts of mean KL per bin of width `bin_width`, per filter variant."""

    bin_width: float
    counts: dict[str, NDArray[np.int64]] = field(default_factory=dict)

    @property
    def n_bins(self) -> int:
        return max((len(c) for c in self.counts.values()), default=0)


# Grid --------------------------------------------------------------------------


def enumerate_grid(catalog: Iterable[CircuitTemplate], grid_filter: GridFilter) -> list[GridEntry]:
    """List grid points in (template, qubits, layers) ascending order.

    Templates that need more qubits than a point offers are skipped.
    """
    entries = []
    for template in sorted(catalog, key=lambda t: t.id):
        for n_qubits in grid_filter.qubit_values():
            if n_qubits < template.min_qubits:
                continue
            for n_layers in grid_filter.layer_values():
                if grid_filter.param_cap:
                    n_params = compile_instance(template, n_qubits, n_layers).n_params
                    if not grid_filter.admits(n_qubits, n_layers, n_params):
                        continue
                entries.append(GridEntry(template.id, n_qubits, n_layers))
    return entries


def grid_gate_counts(catalog: Iterable[CircuitTemplate], grid_filter: GridFilter) -> list[GridCounts]:
    """Decomposed gate counts for every grid point (no simulation)."""
    templates = {t.id: t for t in catalog}
    rows = []
    for entry in enumerate_grid(templates.values(), grid_filter):
        instance = compile_instance(templates[entry.template_id], entry.n_qubits, entry.n_layers)
        rows.append(GridCounts(entry, gate_counts(instance), instance.n_params))
    return rows


# Generation --------------------------------------------------------------------


def _compute_record(template: CircuitTemplate, entry: GridEntry, config: SamplingConfig) -> ExpressibilityRecord:
    instance = compile_instance(template, entry.n_qubits, entry.n_layers)
    estimate = estimate_expressibility(instance, config)
    counts = gate_counts(instance)
    return ExpressibilityRecord(
        entry.template_id,
        entry.n_qubits,
        entry.n_layers,
        *counts.select(ELEMENTARY_COUNT_COLUMNS),
        instance.n_params,
        estimate.mean_kl,
        estimate.std_kl,
        config.n_pairs,
        config.n_bins,
        config.n_repetitions,
        config.master_seed,
    )


def _reusable_records(
    path: Path,
    entries: Sequence[GridEntry],
    config: SamplingConfig,
) -> dict[GridEntry, ExpressibilityRecord]:
    wanted = set(entries)
    sampling = (config.n_pairs, config.n_bins, config.n_repetitions, config.master_seed)
    reusable: dict[GridEntry, ExpressibilityRecord] = {}
    dropped = 0
    for record in load_dataset(path):
        if record.entry in wanted and record.sampling == sampling:
            reusable[record.entry] = record
        else:
            dropped += 1
    if dropped:
        safe_log(logger, logging.WARNING, WARNING_CONFIG_MISMATCH_ROWS, dropped, path)
    safe_log(logger, logging.INFO, LOG_RESUME_LOADED, path, len(reusable))
    return reusable


def generate(
    catalog: Sequence[CircuitTemplate],
    grid_filter: GridFilter,
    config: SamplingConfig,
    out_path: str | Path,
    resume: bool = False,
    threads: int = 1,
    header: Mapping[str, Any] | None = None,
    on_record: Callable[[int, int, ExpressibilityRecord], None] | None = None,
) -> GenerationSummary:
    """Estimate every grid point and write the dataset CSV.

    Rows are written in enumeration order and flushed one by one into
    ``<out>.partial``, which replaces ``out`` when the run ends, including
    after an interruption. Reused rows that were not yet rewritten at that
    point are appended, so no finished work is lost.

    Args:
        catalog: Templates.
        grid_filter: Grid selection.
        config: Sampling settings shared by every row.
        out_path: Dataset CSV path.
        resume: Reuse rows of an existing file with the same sampling settings.
        threads: Grid points evaluated concurrently; rows do not depend on it.
        header: Run configuration for the artifact header.
        on_record: Progress callback ``(done, total, record)``.

    Returns:
        Counts of total, computed and reused rows.

    Raises:
        DatasetError: If the output cannot be written or the checkpoint is corrupt.

    """
    path = Path(out_path)
    entries = enumerate_grid(catalog, grid_filter)
    templates = {t.id: t for t in catalog}
    reusable = _reusable_records(path, entries, config) if resume and path.exists() else {}
    pending = [entry for entry in entries if entry not in reusable]
    partial = path.with_name(path.name + ".partial")
    if header is None:
        header = {
            "qubits": list(grid_filter.qubits),
            "layers": list(grid_filter.layers),
            "max_layers": grid_filter.max_layers,
            "param_cap": grid_filter.param_cap,
            "samples": config.n_pairs,
            "bins": config.n_bins,
            "reps": config.n_repetitions,
            "seed": config.master_seed,
        }

    written: set[GridEntry] = set()
    computed = 0
    started = time.monotonic()
    pool = ThreadPoolExecutor(max_workers=max(1, threads))
    try:
        with TableWriter(partial, DATASET_COLUMNS, header) as writer:
            try:
                results = pool.map(lambda e: _compute_record(templates[e.template_id], e, config), pending)
                for done, entry in enumerate(entries, start=1):
                    if entry in reusable:
                        record = reusable[entry]
                    else:
                        record = next(results)
                        computed += 1
                        eta = remaining_seconds(time.monotonic() - started, computed, len(pending) - computed)
                        safe_log(
                            logger,
                            logging.INFO,
                            LOG_DATASET_PROGRESS,
                            done,
                            len(entries),
                            entry.template_id,
                            entry.n_qubits,
                            entry.n_layers,
                            record.kl_mean,
                            format_duration(eta),
                        )
                    writer.write_row(record.to_row())
                    written.add(entry)
                    if on_record is not None:
                        on_record(done, len(entries), record)
            finally:
                for entry, record in reusable.items():
                    if entry not in written:
                        writer.write_row(record.to_row())
    except OSError as e:
        raise DatasetError(ERROR_DATASET_WRITE.format(path=partial, error=e)) from e
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
        if partial.exists():
            os.replace(partial, path)

    summary = GenerationSummary(path=path, total=len(entries), computed=computed, skipped=len(entries) - len(pending))
    safe_log(logger, logging.INFO, LOG_DATASET_DONE, path, summary.total, summary.computed, summary.skipped)
    return summary


# Loading and analysis ----------------------------------------------------------


def load_dataset(path: str | Path) -> list[ExpressibilityRecord]:
    """Read a dataset CSV.

    A truncated final line (an interrupted write) is ignored with a warning.

    Raises:
        MissingInputError: If the file does not exist.
        DatasetError: On an unexpected header or a corrupt row (with its line number).

    """
    table = read_table(path, expected_columns=DATASET_COLUMNS)
    if table.truncated_tail:
        safe_log(logger, logging.WARNING, WARNING_TRUNCATED_ROW, path)
    records = []
    for cells, line in zip(table.rows, table.line_numbers, strict=True):
        try:
            records.append(ExpressibilityRecord.from_row(cells))
        except ValueError as e:
            raise DatasetError(ERROR_DATASET_ROW.format(path=path, row=line, detail=e)) from None
    return records


def count_matrix(records: Sequence[ExpressibilityRecord], names: Sequence[str] = FEATURE_NAMES) -> FloatArray:
    """Raw gate counts as a float matrix (one row per record)."""
    return np.array([record.counts(names) for record in records], dtype=np.float64).reshape(len(records), len(names))


def feature_matrix(records: Sequence[ExpressibilityRecord]) -> tuple[FloatArray, FloatArray, FeatureScaling]:
    """Min-max scaled 6-gate features and mean-KL targets.

    FRZ is not a feature: it carries no trainable angle and tracks the CRX count.

    Raises:
        InsufficientDataError: With fewer than 2 records.

    """
    if len(records) < 2:
        raise InsufficientDataError(ERROR_TOO_FEW_RECORDS.format(operation="feature_matrix", minimum=2, count=len(records)))
    raw = count_matrix(records)
    scaling = FeatureScaling.fit(raw)
    targets = np.array([record.kl_mean for record in records], dtype=np.float64)
    return scaling.transform(raw), targets, scaling


def correlation_from_counts(counts: FloatArray, names: Sequence[str] = ELEMENTARY_COUNT_COLUMNS) -> CorrelationMatrix:
    """Pearson correlation of count columns.

    Raises:
        InsufficientDataError: With fewer than 3 rows.

    """
    data = np.asarray(counts, dtype=np.float64)
    if data.shape[0] < 3:
        raise InsufficientDataError(ERROR_TOO_FEW_RECORDS.format(operation="correlation", minimum=3, count=data.shape[0]))
    centered = data - data.mean(axis=0)
    norms = np.sqrt(np.sum(centered**2, axis=0))
    varying = norms > 0
    defined = np.outer(varying, varying)
    safe = np.where(varying, norms, 1.0)
    values = np.where(defined, (centered.T @ centered) / np.outer(safe, safe), 0.0)
    values = np.clip(values, -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    np.fill_diagonal(defined, True)
    return CorrelationMatrix(tuple(names), values, defined)


def correlation_matrix(records: Sequence[ExpressibilityRecord]) -> CorrelationMatrix:
    """7x7 Pearson matrix of the elementary gate counts (FRZ included)."""
    return correlation_from_counts(count_matrix(records, ELEMENTARY_COUNT_COLUMNS), ELEMENTARY_COUNT_COLUMNS)


def default_variants(max_layers: int = DEFAULT_MAX_LAYERS) -> dict[str, GridFilter]:
    """The layers-only and parameter-capped variants of the full grid."""
    full_qubits = (MIN_QUBITS, MAX_QUBITS)
    layers = (1, max_layers)
    return {
        VARIANT_LAYERS_ONLY: GridFilter(qubits=full_qubits, layers=layers, max_layers=max_layers),
        VARIANT_PARAM_CAP: GridFilter(qubits=full_qubits, layers=layers, max_layers=max_layers, param_cap=True),
    }


def expressibility_histogram(
    records: Sequence[ExpressibilityRecord],
    bin_width: float,
    variants: Mapping[str, GridFilter] | None = None,
) -> ExpressibilityHistogram:
    """Histogram of mean KL for each filter variant.

    Bin k is [k * bin_width, (k + 1) * bin_width); all variants share the same
    number of bins.

    Raises:
        ConfigError: If `bin_width` is not positive.

    """
    if bin_width <= 0:
        raise ConfigError(ERROR_RANGE_EMPTY.format(name="bin_width"))
    variants = default_variants() if variants is None else variants
    selected = {
        name: np.array(
            [r.kl_mean for r in records if grid_filter.admits(r.n_qubits, r.n_layers, r.n_params)],
            dtype=np.float64,
        )
        for name, grid_filter in variants.items()
    }
    if not records:
        return ExpressibilityHistogram(bin_width, {name: np.zeros(0, dtype=np.int64) for name in variants})
    top = max(float(r.kl_mean) for r in records)
    n_bins = int(np.floor(top / bin_width)) + 1
    counts = {}
    for name, values in selected.items():
        index = np.minimum(np.floor(values / bin_width).astype(np.int64), n_bins - 1)
        counts[name] = np.bincount(index, minlength=n_bins).astype(np.int64)
    return ExpressibilityHistogram(bin_width, counts)


def zero_bin_reduction(histogram: ExpressibilityHistogram, base: str, constrained: str) -> float:
    """Fractional decrease of the first-bin count from `base` to `constrained`.

    Returns 0.0 when the base variant has an empty first bin.
    """
    base_counts = histogram.counts.get(base)
    constrained_counts = histogram.counts.get(constrained)
    if base_counts is None or constrained_counts is None or not len(base_counts) or base_counts[0] == 0:
        return 0.0
    return float(base_counts[0] - constrained_counts[0]) / float(base_counts[0])


__all__ = [
    "CorrelationMatrix",
    "ExpressibilityHistogram",
    "ExpressibilityRecord",
    "FeatureScaling",
    "GenerationSummary",
    "GridCounts",
    "GridEntry",
    "GridFilter",
    "correlation_from_counts",
    "correlation_matrix",
    "count_matrix",
    "default_variants",
    "enumerate_grid",
    "expressibility_histogram",
    "feature_matrix",
    "generate",
    "grid_gate_counts",
    "load_dataset",
    "zero_bin_reduction",
]
