"""User-facing messages for PQC Expressibility.

This module centralizes all user-facing messages including CLI output,
error messages, log messages, and help text.
"""

from __future__ import annotations

from typing import Final

# =============================================================================
# CLI Messages
# =============================================================================

# Headers
CLI_HEADER_CATALOG: Final[str] = "PQC Expressibility - Catalog"
CLI_HEADER_DECOMPOSE: Final[str] = "PQC Expressibility - Decomposition"
CLI_HEADER_EXPR: Final[str] = "PQC Expressibility - KL Expressibility"
CLI_HEADER_DATASET: Final[str] = "PQC Expressibility - Dataset"
CLI_HEADER_TRAIN: Final[str] = "PQC Expressibility - Train"
CLI_HEADER_EXPLAIN: Final[str] = "PQC Expressibility - Explain"
CLI_HEADER_REPORT: Final[str] = "PQC Expressibility - Report"

# Status indicators
STATUS_SUCCESS: Final[str] = "✅"
STATUS_ERROR: Final[str] = "❌"
STATUS_RUNNING: Final[str] = "🔍"
STATUS_WARNING: Final[str] = "⚠️"

# CLI help text
CLI_DESCRIPTION: Final[str] = "Expressibility of parameterized quantum circuits, gate-count models and SHAP attributions"
CLI_HELP_COMMANDS: Final[str] = "Available commands"
CLI_HELP_CATALOG: Final[str] = "List templates and gate/parameter counts"
CLI_HELP_DECOMPOSE: Final[str] = "Show a template instance before and after elementary decomposition"
CLI_HELP_EXPR: Final[str] = "Estimate the KL expressibility of one circuit instance"
CLI_HELP_DATASET: Final[str] = "Generate the expressibility dataset over the instance grid"
CLI_HELP_TRAIN: Final[str] = "Fit GBT and LASSO regressors on the dataset"
CLI_HELP_EXPLAIN: Final[str] = "Compute TreeSHAP attributions for a trained GBT model"
CLI_HELP_REPORT: Final[str] = "Emit correlation, histogram and importance tables"

CLI_HELP_CATALOG_PATH: Final[str] = "Catalog file (defaults to the shipped catalog)"
CLI_HELP_QUBITS: Final[str] = "Qubit count or range, e.g. 4 or 2..18"
CLI_HELP_LAYERS: Final[str] = "Layer count or range, e.g. 1 or 1..5"
CLI_HELP_SAMPLES: Final[str] = "Fidelity pairs per repetition (S)"
CLI_HELP_BINS: Final[str] = "Histogram bins (B)"
CLI_HELP_REPS: Final[str] = "Repetitions per estimate (R)"
CLI_HELP_SEED: Final[str] = "Master seed"
CLI_HELP_THREADS: Final[str] = "Worker threads (defaults to available parallelism)"
CLI_HELP_OUT: Final[str] = "Output file or directory"
CLI_HELP_RESUME: Final[str] = "Skip grid entries already present in the output file"
CLI_HELP_PARAM_CAP: Final[str] = "Drop instances with more than 2^n parameters"
CLI_HELP_TEST_FRACTION: Final[str] = "Hold-out fraction"
CLI_HELP_MODEL: Final[str] = "Restrict training to one model kind"
CLI_HELP_LIST: Final[str] = "List template ids and descriptions"
CLI_HELP_AGGREGATE: Final[str] = "Print counts summed over all templates"
CLI_HELP_TEMPLATE: Final[str] = "Template id"
CLI_HELP_REFERENCE: Final[str] = "Use a 1-qubit reference circuit instead of a template"
CLI_HELP_JSON: Final[str] = "Print machine-readable JSON"
CLI_HELP_CONVERGENCE: Final[str] = "Comma-separated sample sizes for a convergence table"
CLI_HELP_DATASET_PATH: Final[str] = "Dataset CSV produced by the dataset command"
CLI_HELP_MODEL_FILE: Final[str] = "GBT model file produced by the train command"
CLI_HELP_SHAP_DIR: Final[str] = "Directory with explain outputs to include in the report"
CLI_HELP_SUBSET: Final[str] = "Rows to explain"
CLI_HELP_CHECK_LOCAL: Final[str] = "Print the maximum local-accuracy residual"
CLI_HELP_ORACLE_CHECK: Final[str] = "Compare TreeSHAP against the brute-force oracle on N rows"
CLI_HELP_BIN_WIDTH: Final[str] = "Bin width of the expressibility histogram (nats)"
CLI_HELP_COUNTS_ONLY: Final[str] = "Compute the gate-count correlation over the grid without a dataset"
CLI_HELP_ROUNDS: Final[str] = "Boosting rounds"
CLI_HELP_LEARNING_RATE: Final[str] = "Boosting learning rate"
CLI_HELP_MAX_LEAVES: Final[str] = "Maximum leaves per tree"
CLI_HELP_MIN_SAMPLES_LEAF: Final[str] = "Minimum training rows per leaf"
CLI_HELP_LASSO_LAMBDA: Final[str] = "Fixed LASSO lambda (default: 5-fold cross-validated grid)"
CLI_HELP_MLFLOW: Final[str] = "Log parameters, metrics and artifacts to MLflow"
CLI_HELP_SUBSAMPLE: Final[str] = "Row fraction drawn per boosting round (1.0 disables subsampling)"
CLI_HELP_VERSION: Final[str] = "Show the version and exit"

# Catalog command
CATALOG_LIST_LINE: Final[str] = "{id:>2}: {description}"
CATALOG_COUNTS_LINE: Final[str] = "id={id} n={n_qubits} L={n_layers} {stage}: {counts} params={n_params}"
CATALOG_AGGREGATE_LINE: Final[str] = "n={n_qubits} L={n_layers} {stage}: {counts}"
CATALOG_LOADED: Final[str] = "Loaded {count} templates from {source}"
STAGE_BEFORE: Final[str] = "Before"
STAGE_AFTER: Final[str] = "After"

# Decompose command
DECOMPOSE_INSTANCE: Final[str] = "Template {id} at n={n_qubits}, L={n_layers}: {gates} gates, {params} parameters"
DECOMPOSE_GATE_LINE: Final[str] = "  {index:>4}  {gate}"

# Expr command
EXPR_INSTANCE: Final[str] = "Instance: {label} ({gates} elementary gates, {params} parameters)"
EXPR_SETTINGS: Final[str] = "Sampling: S={samples} B={bins} R={reps} seed={seed}"
EXPR_RESULT: Final[str] = "KL expressibility: mean={mean:.6f} std={std:.6f}"
EXPR_REPETITIONS: Final[str] = "Per repetition: {values}"
EXPR_CONVERGENCE_LINE: Final[str] = "S={samples:>6}  mean={mean:.6f}  std={std:.6f}"
EXPR_REFERENCE_LABEL: Final[str] = "reference '{reference}'"
EXPR_TEMPLATE_LABEL: Final[str] = "template {id}, n={n_qubits}, L={n_layers}"

# Dataset command
DATASET_GRID: Final[str] = "Grid: {entries} instances ({qubits} qubits, {layers} layers, param cap {cap})"
DATASET_DONE: Final[str] = "Dataset written to {path}: {computed} computed, {skipped} resumed, {total} total"
DATASET_INTERRUPTED: Final[str] = "Interrupted; {done} records were flushed to {path}"

# Train command
TRAIN_ROWS: Final[str] = "Rows: {train} train / {test} test"
TRAIN_MODEL_SAVED: Final[str] = "{kind} model saved to {path}"
TRAIN_METRIC_LINE: Final[str] = "{key}={value}"
TRAIN_LASSO_LAMBDA: Final[str] = "LASSO lambda: {value:.6g}"
TRAIN_PREDICTIONS_WRITTEN: Final[str] = "Hold-out predictions written to {path}"
TRAIN_METRICS_WRITTEN: Final[str] = "Metrics written to {path}"
RUN_TRACKED: Final[str] = "Run {run_id} logged to MLflow"

# Explain command
EXPLAIN_ROWS: Final[str] = "Explaining {rows} rows ({subset})"
EXPLAIN_LOCAL_ACCURACY: Final[str] = "max_local_accuracy_residual={value:.3e}"
EXPLAIN_ORACLE: Final[str] = "max_oracle_difference={value:.3e} over {rows} rows"
EXPLAIN_IMPORTANCE_LINE: Final[str] = "{feature:>5}  mean|phi|={mean_abs:.6f}  mean(phi)={mean:+.6f}"
EXPLAIN_WRITTEN: Final[str] = "SHAP exports written to {path}"
EXPLAIN_BASE_VALUE: Final[str] = "Base value (expected prediction): {value:.6f}"

# Report command
REPORT_WRITTEN: Final[str] = "Report tables written to {path}"
REPORT_CORRELATION_PAIR: Final[str] = "Pearson({a}, {b}) = {value}"
REPORT_ZERO_BIN: Final[str] = "0-bin count: {base} ({base_name}) -> {constrained} ({constrained_name}), decrease {decrease}"
REPORT_SATURATION_LINE: Final[str] = "{feature:>5}  quartile means {means}  flattening={flat}"
REPORT_UNDEFINED: Final[str] = "NA"
REPORT_HISTOGRAM_LINE: Final[str] = "{variant}: {count} instances in {bins} bins of width {width}"

# =============================================================================
# Error Messages
# =============================================================================

# Configuration
ERROR_INVALID_RANGE: Final[str] = "Invalid range '{value}'; expected N or A..B with A <= B"
ERROR_RANGE_BOUNDS: Final[str] = "{name} range {low}..{high} is outside {min}..{max}"
ERROR_POSITIVE: Final[str] = "{name} must be >= {minimum}, got {value}"
ERROR_FRACTION: Final[str] = "{name} must lie strictly between 0 and 1, got {value}"
ERROR_SAMPLING_CONFIG: Final[str] = "Invalid sampling config: {detail}"
ERROR_CONVERGENCE_LIST: Final[str] = "Invalid sample size list '{value}'"
ERROR_TEMPLATE_OR_REFERENCE: Final[str] = "Exactly one of --template or --reference is required"
ERROR_SINGLE_VALUE: Final[str] = "{name} must be a single value for this command, got {low}..{high}"

# Circuit core
ERROR_QUBIT_COUNT: Final[str] = "n_qubits must be in {min}..{max}, got {value}"
ERROR_QUBIT_INDEX: Final[str] = "Qubit index {index} out of range for {n_qubits} qubits"
ERROR_CONTROL_EQUALS_TARGET: Final[str] = "Control and target must differ (both {index})"
ERROR_CONTROL_REQUIRED: Final[str] = "{kind} requires a control qubit"
ERROR_CONTROL_FORBIDDEN: Final[str] = "{kind} does not take a control qubit"
ERROR_SLOT_REQUIRED: Final[str] = "{kind} requires a parameter slot"
ERROR_SLOT_FORBIDDEN: Final[str] = "{kind} does not take a parameter slot"
ERROR_FIXED_ANGLE: Final[str] = "FRZ requires a fixed angle of +pi/2 or -pi/2, got {angle}"
ERROR_ANGLE_MISSING: Final[str] = "Gate {gate} needs an angle"
ERROR_ANGLE_SUPERFLUOUS: Final[str] = "Gate {gate} takes no angle"
ERROR_PARAM_COUNT: Final[str] = "Expected {expected} parameters, got {actual}"
ERROR_STATE_LENGTH: Final[str] = "Amplitude array of length {length} does not match 2^{n_qubits}"
ERROR_DIMENSION_MISMATCH: Final[str] = "State dimensions differ: {left} vs {right} qubits"
ERROR_UNITARY_TOO_LARGE: Final[str] = "Unitary construction is limited to {max} qubits, got {value}"
ERROR_SLOT_RANGE: Final[str] = "Parameter slots must be numbered 0..{last} in gate order"

# Catalog
ERROR_CATALOG_NOT_FOUND: Final[str] = "Catalog file not found: {path}"
ERROR_CATALOG_PARSE: Final[str] = "Catalog {source} is not valid JSON (line {line}, column {column}): {detail}"
ERROR_CATALOG_EMPTY: Final[str] = "Catalog {source} contains no templates"
ERROR_CATALOG_NOT_LIST: Final[str] = "Catalog {source} must be a JSON list of templates"
ERROR_CATALOG_FIELD: Final[str] = "Catalog {source}, template #{position}: field '{field}' {problem}"
ERROR_CATALOG_DUPLICATE_ID: Final[str] = "Catalog {source}: duplicate template id {id}"
ERROR_UNKNOWN_GATE: Final[str] = "unknown gate kind '{value}'"
ERROR_UNKNOWN_PATTERN: Final[str] = "unknown pattern '{value}'"
ERROR_UNKNOWN_BLOCK_KIND: Final[str] = "unknown block kind '{value}'"
ERROR_BLOCK_GATE_MISMATCH: Final[str] = "gate '{gate}' does not fit a {kind} block"
ERROR_BLOCK_PATTERN_MISMATCH: Final[str] = "pattern '{pattern}' does not fit a {kind} block"
ERROR_UNKNOWN_TEMPLATE: Final[str] = "Unknown template id {id}"
ERROR_INSTANCE_SIZE: Final[str] = "Template {id} needs n_qubits >= {min_qubits} and n_layers >= 1, got n={n_qubits}, L={n_layers}"
PROBLEM_MISSING: Final[str] = "is missing"
PROBLEM_NOT_INT: Final[str] = "must be a positive integer"
PROBLEM_NOT_STR: Final[str] = "must be a string"
PROBLEM_EMPTY_BLOCKS: Final[str] = "must be a non-empty list"
PROBLEM_NOT_OBJECT: Final[str] = "must be an object"

# Expressibility
ERROR_BIN_INDEX: Final[str] = "Bin index {index} out of range for {n_bins} bins"
ERROR_BIN_COUNT: Final[str] = "Histogram has {left} bins but reference has {right}"
ERROR_NOT_DECOMPOSED: Final[str] = "Instance contains non-elementary gates ({kinds}); decompose it first"
ERROR_UNKNOWN_REFERENCE: Final[str] = "Unknown reference '{reference}'; expected one of {choices}"

# Dataset
ERROR_DATASET_NOT_FOUND: Final[str] = "Dataset file not found: {path}"
ERROR_DATASET_HEADER: Final[str] = "Dataset {path} has an unexpected header: {header}"
ERROR_DATASET_ROW: Final[str] = "Dataset {path}, row {row}: {detail}"
ERROR_DATASET_WRITE: Final[str] = "Cannot write dataset {path}: {error}"
ERROR_TOO_FEW_RECORDS: Final[str] = "insufficient data: {operation} needs at least {minimum} records, got {count}"
ERROR_RANGE_EMPTY: Final[str] = "{name} range is empty"
WARNING_TRUNCATED_ROW: Final[str] = "Ignoring truncated final line of %s"
WARNING_CONFIG_MISMATCH_ROWS: Final[str] = "%d rows of %s do not match the requested grid or sampling settings and are discarded"
WARNING_CONSTANT_FEATURE: Final[str] = "Feature %s is constant across records; scaled to 0"

# Models
ERROR_INSUFFICIENT_DATA: Final[str] = "insufficient data: {detail}"
ERROR_NON_FINITE: Final[str] = "{name} contains non-finite values"
ERROR_SHAPE: Final[str] = "{name} has shape {shape}; expected {expected}"
ERROR_FEATURE_ARITY: Final[str] = "Model expects {expected} features, got {actual}"
ERROR_CONSTANT_TRUTH: Final[str] = "R^2 is undefined for constant truth values"
ERROR_LENGTH_MISMATCH: Final[str] = "Lengths differ: {left} vs {right}"
ERROR_HYPERPARAMS: Final[str] = "Invalid hyperparameter {name}={value}"
ERROR_MODEL_FILE: Final[str] = "Model file {path} is invalid: {detail}"
ERROR_MODEL_NOT_FOUND: Final[str] = "Model file not found: {path}"
ERROR_UNKNOWN_MODEL: Final[str] = "Unknown model kind '{kind}'"
ERROR_MISSING_COVER: Final[str] = "Tree {tree} node {node} has no positive cover"
ERROR_TOO_MANY_FEATURES: Final[str] = "Brute-force Shapley enumeration is limited to {max} features, got {value}"
ERROR_NO_EXPLANATIONS: Final[str] = "At least one explanation is required"
ERROR_NOT_TREE_MODEL: Final[str] = "TreeSHAP needs a tree ensemble, got a {kind} model"
ERROR_QUARTILES: Final[str] = "Saturation diagnostic needs at least 4 rows, got {count}"

# Tracking
ERROR_MLFLOW_MISSING: Final[str] = (
    "mlflow-skinny package is required for experiment tracking. "
    "Install with: pip install pqc-expressibility[tracking]"
)
ERROR_TRACKING_FAILED: Final[str] = "MLflow tracking failed: {error}"

# Generic
ERROR_UNEXPECTED: Final[str] = "Unexpected error: {error}"
ERROR_INTERRUPTED: Final[str] = "Interrupted"

# =============================================================================
# Log Messages
# =============================================================================

LOG_CATALOG_LOADED: Final[str] = "Loaded %d templates from %s"
LOG_ESTIMATE_START: Final[str] = "Estimating %s with S=%d B=%d R=%d"
LOG_REPETITION_DONE: Final[str] = "Repetition %d of %s: kl=%.6f"
LOG_RESUME_LOADED: Final[str] = "Resuming %s: %d records reusable"
LOG_DATASET_PROGRESS: Final[str] = "Progress %d/%d (template %d, n=%d, L=%d, kl=%.4f), eta %s"
LOG_DATASET_DONE: Final[str] = "Dataset %s: %d rows (%d computed, %d reused)"
LOG_GBT_ROUND: Final[str] = "GBT round %d/%d: train mse=%.6g"
LOG_LASSO_CV: Final[str] = "LASSO CV selected lambda=%.6g (mse=%.6g)"
LOG_LASSO_NOT_CONVERGED: Final[str] = "LASSO did not converge within %d sweeps (max change %.3g)"
LOG_TRACKING_RUN: Final[str] = "Logged run %s to MLflow experiment %s"
LOG_WRITTEN: Final[str] = "Wrote %s"

# =============================================================================
# Installation Messages
# =============================================================================

INSTALL_TRACKING: Final[str] = "pip install pqc-expressibility[tracking]"
