"""Constants for PQC Expressibility.

This module centralizes all configuration constants, environment variable names,
default values, vocabularies and magic numbers used throughout the project.
"""

from __future__ import annotations

import math
from typing import Final

# =============================================================================
# Environment Variable Names
# =============================================================================

ENV_PREFIX: Final[str] = "PQC_EXPR_"

ENV_CATALOG: Final[str] = "PQC_EXPR_CATALOG"
ENV_SAMPLES: Final[str] = "PQC_EXPR_SAMPLES"
ENV_BINS: Final[str] = "PQC_EXPR_BINS"
ENV_REPS: Final[str] = "PQC_EXPR_REPS"
ENV_SEED: Final[str] = "PQC_EXPR_SEED"
ENV_THREADS: Final[str] = "PQC_EXPR_THREADS"
ENV_OUT: Final[str] = "PQC_EXPR_OUT"
ENV_LOG_LEVEL: Final[str] = "PQC_EXPR_LOG_LEVEL"
ENV_PARAM_CAP: Final[str] = "PQC_EXPR_PARAM_CAP"
ENV_TEST_FRACTION: Final[str] = "PQC_EXPR_TEST_FRACTION"
ENV_MLFLOW: Final[str] = "PQC_EXPR_MLFLOW"
ENV_MLFLOW_EXPERIMENT: Final[str] = "PQC_EXPR_MLFLOW_EXPERIMENT"

# =============================================================================
# Default Values
# =============================================================================

DEFAULT_LOG_LEVEL: Final[str] = "INFO"
LOG_FORMAT: Final[str] = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVELS: Final[tuple[str, ...]] = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
DEFAULT_SAMPLES: Final[int] = 20_000
DEFAULT_BINS: Final[int] = 75
DEFAULT_REPS: Final[int] = 10
DEFAULT_SEED: Final[int] = 2024
DEFAULT_OUT: Final[str] = "pqc-expr-out"
DEFAULT_TEST_FRACTION: Final[float] = 0.1
DEFAULT_MLFLOW_EXPERIMENT: Final[str] = "pqc-expressibility"
DEFAULT_QUBITS: Final[tuple[int, int]] = (2, 18)
DEFAULT_LAYERS: Final[tuple[int, int]] = (1, 5)
DEFAULT_MAX_LAYERS: Final[int] = 5
DEFAULT_HIST_BIN_WIDTH: Final[float] = 0.1

# Gradient boosted trees
DEFAULT_GBT_ROUNDS: Final[int] = 200
DEFAULT_GBT_LEARNING_RATE: Final[float] = 0.1
DEFAULT_GBT_MAX_LEAVES: Final[int] = 31
DEFAULT_GBT_MIN_SAMPLES_LEAF: Final[int] = 5
DEFAULT_GBT_SUBSAMPLE: Final[float] = 1.0
SPLIT_GAIN_TOLERANCE: Final[float] = 1e-12

# LASSO
DEFAULT_LASSO_TOLERANCE: Final[float] = 1e-8
DEFAULT_LASSO_MAX_ITER: Final[int] = 100_000
DEFAULT_LASSO_CV_FOLDS: Final[int] = 5
DEFAULT_LASSO_GRID_SIZE: Final[int] = 30
DEFAULT_LASSO_GRID_RATIO: Final[float] = 1e-4

# =============================================================================
# Numeric Guards
# =============================================================================

MIN_QUBITS: Final[int] = 1
MAX_QUBITS: Final[int] = 18
MAX_UNITARY_QUBITS: Final[int] = 10
MAX_BRUTE_FORCE_FEATURES: Final[int] = 12
HAAR_MASS_FLOOR: Final[float] = 1e-300
NORM_TOLERANCE: Final[float] = 1e-12
TWO_PI: Final[float] = 2.0 * math.pi
HALF_PI: Final[float] = 0.5 * math.pi

# Pairs drawn from one keyed random stream; fixed so results never depend on batching.
PAIR_BLOCK_SIZE: Final[int] = 250
# Upper bound on simultaneously simulated amplitudes (complex128) per batch.
MAX_BATCH_AMPLITUDES: Final[int] = 1 << 21

MEMO_CACHE_SIZE: Final[int] = 4096

# =============================================================================
# Gate Vocabulary
# =============================================================================

GATE_RX: Final[str] = "RX"
GATE_RY: Final[str] = "RY"
GATE_RZ: Final[str] = "RZ"
GATE_FRZ: Final[str] = "FRZ"
GATE_H: Final[str] = "H"
GATE_CNOT: Final[str] = "CNOT"
GATE_CZ: Final[str] = "CZ"
GATE_CRX: Final[str] = "CRX"
GATE_CRY: Final[str] = "CRY"
GATE_CRZ: Final[str] = "CRZ"

# =============================================================================
# Catalog Vocabulary
# =============================================================================

BLOCK_SINGLE_QUBIT_LAYER: Final[str] = "single_qubit_layer"
BLOCK_ENTANGLING_PATTERN: Final[str] = "entangling_pattern"
BLOCK_KINDS: Final[tuple[str, ...]] = (BLOCK_SINGLE_QUBIT_LAYER, BLOCK_ENTANGLING_PATTERN)

PATTERN_ALL_QUBITS: Final[str] = "all_qubits"
PATTERN_ODD_BOND_QUBITS: Final[str] = "odd_bond_qubits"
PATTERN_CHAIN: Final[str] = "chain"
PATTERN_RING: Final[str] = "ring"
PATTERN_RING_REVERSE: Final[str] = "ring_reverse"
PATTERN_ALL_TO_ALL: Final[str] = "all_to_all"
PATTERN_EVEN_BONDS: Final[str] = "even_bonds"
PATTERN_ODD_BONDS: Final[str] = "odd_bonds"

SINGLE_QUBIT_PATTERNS: Final[tuple[str, ...]] = (PATTERN_ALL_QUBITS, PATTERN_ODD_BOND_QUBITS)
ENTANGLING_PATTERNS: Final[tuple[str, ...]] = (
    PATTERN_CHAIN,
    PATTERN_RING,
    PATTERN_RING_REVERSE,
    PATTERN_ALL_TO_ALL,
    PATTERN_EVEN_BONDS,
    PATTERN_ODD_BONDS,
)

CATALOG_FIELD_ID: Final[str] = "id"
CATALOG_FIELD_DESCRIPTION: Final[str] = "description"
CATALOG_FIELD_BLOCKS: Final[str] = "blocks"
CATALOG_FIELD_KIND: Final[str] = "kind"
CATALOG_FIELD_GATE: Final[str] = "gate"
CATALOG_FIELD_PATTERN: Final[str] = "pattern"

CATALOG_RESOURCE_PACKAGE: Final[str] = "pqc_expressibility.data"
CATALOG_RESOURCE_NAME: Final[str] = "catalog.json"

REFERENCE_IDLE: Final[str] = "idle"
REFERENCE_RX: Final[str] = "rx"
REFERENCE_KINDS: Final[tuple[str, ...]] = (REFERENCE_IDLE, REFERENCE_RX)
REFERENCE_TEMPLATE_ID: Final[int] = 0

# =============================================================================
# Features and Table Columns
# =============================================================================

# Decomposed counts persisted per record, in column order.
ELEMENTARY_COUNT_COLUMNS: Final[tuple[str, ...]] = ("rx", "ry", "rz", "frz", "h", "cnot", "cz")
# Model features: FRZ is excluded (no trainable angle, collinear with RY).
FEATURE_NAMES: Final[tuple[str, ...]] = ("rx", "ry", "rz", "h", "cnot", "cz")
ROTATION_FEATURES: Final[tuple[str, ...]] = ("rx", "ry", "rz")

DATASET_COLUMNS: Final[tuple[str, ...]] = (
    "template_id",
    "n_qubits",
    "n_layers",
    "rx",
    "ry",
    "rz",
    "frz",
    "h",
    "cnot",
    "cz",
    "n_params",
    "kl_mean",
    "kl_std",
    "S",
    "B",
    "R",
    "seed",
)

BEESWARM_COLUMNS: Final[tuple[str, ...]] = ("feature", "normalized_value", "phi")
IMPORTANCE_COLUMNS: Final[tuple[str, ...]] = ("feature", "mean_abs_phi", "mean_phi")
DEPENDENCE_COLUMNS: Final[tuple[str, ...]] = ("gate_count", "phi")
PREDICTION_COLUMNS: Final[tuple[str, ...]] = ("template_id", "n_qubits", "n_layers", "truth", "gbt", "lasso")
CONVERGENCE_COLUMNS: Final[tuple[str, ...]] = ("samples", "kl_mean", "kl_std")
SATURATION_COLUMNS: Final[tuple[str, ...]] = ("feature", "q1_mean_phi", "q2_mean_phi", "q3_mean_phi", "q4_mean_phi", "flattening")
HISTOGRAM_BOUND_COLUMNS: Final[tuple[str, ...]] = ("bin_low", "bin_high")
CORRELATION_LABEL_COLUMN: Final[str] = "gate"
ROW_KEY_COLUMNS: Final[tuple[str, ...]] = ("template_id", "n_qubits", "n_layers")
SHAP_VALUES_COLUMNS: Final[tuple[str, ...]] = (
    *ROW_KEY_COLUMNS,
    "base_value",
    *(f"{name}_count" for name in FEATURE_NAMES),
    *(f"{name}_value" for name in FEATURE_NAMES),
    *(f"{name}_phi" for name in FEATURE_NAMES),
)

# =============================================================================
# Artifacts
# =============================================================================

PACKAGE_NAME: Final[str] = "pqc-expressibility"
FALLBACK_VERSION: Final[str] = "0.0.0+local"
COMMENT_PREFIX: Final[str] = "#"
HEADER_CONFIG_KEY: Final[str] = "config"
DATASET_FILE_NAME: Final[str] = "dataset.csv"
GBT_MODEL_FILE_NAME: Final[str] = "model_gbt.json"
LASSO_MODEL_FILE_NAME: Final[str] = "model_lasso.json"
PREDICTIONS_FILE_NAME: Final[str] = "holdout_predictions.csv"
METRICS_FILE_NAME: Final[str] = "metrics.txt"
SHAP_VALUES_FILE_NAME: Final[str] = "shap_values.csv"
BEESWARM_FILE_NAME: Final[str] = "beeswarm.csv"
IMPORTANCE_FILE_NAME: Final[str] = "importance.csv"
DEPENDENCE_FILE_TEMPLATE: Final[str] = "dependence_{feature}.csv"
CORRELATION_FILE_NAME: Final[str] = "correlation.csv"
HISTOGRAM_FILE_NAME: Final[str] = "expr_histogram.csv"
SATURATION_FILE_NAME: Final[str] = "saturation.csv"
CONVERGENCE_FILE_NAME: Final[str] = "convergence.csv"

MODEL_GBT: Final[str] = "gbt"
MODEL_LASSO: Final[str] = "lasso"
ALL_MODELS: Final[tuple[str, ...]] = (MODEL_GBT, MODEL_LASSO)

SUBSET_ALL: Final[str] = "all"
SUBSET_TRAIN: Final[str] = "train"
SUBSET_TEST: Final[str] = "test"
SHAP_SUBSETS: Final[tuple[str, ...]] = (SUBSET_ALL, SUBSET_TRAIN, SUBSET_TEST)

VARIANT_LAYERS_ONLY: Final[str] = "layers_only"
VARIANT_PARAM_CAP: Final[str] = "param_cap"

# =============================================================================
# Boolean Environment Values
# =============================================================================

TRUTHY_VALUES: Final[set[str]] = {"1", "true", "yes", "on"}

# =============================================================================
# CLI Constants
# =============================================================================

CLI_COMMAND_CATALOG: Final[str] = "catalog"
CLI_COMMAND_DECOMPOSE: Final[str] = "decompose"
CLI_COMMAND_EXPR: Final[str] = "expr"
CLI_COMMAND_DATASET: Final[str] = "dataset"
CLI_COMMAND_TRAIN: Final[str] = "train"
CLI_COMMAND_EXPLAIN: Final[str] = "explain"
CLI_COMMAND_REPORT: Final[str] = "report"

RANGE_SEPARATOR: Final[str] = ".."

EXIT_SUCCESS: Final[int] = 0
EXIT_ERROR: Final[int] = 1
EXIT_USAGE: Final[int] = 2
EXIT_MISSING_INPUT: Final[int] = 3
EXIT_SCHEMA: Final[int] = 4
EXIT_INSUFFICIENT_DATA: Final[int] = 5
EXIT_INTERRUPTED: Final[int] = 130
