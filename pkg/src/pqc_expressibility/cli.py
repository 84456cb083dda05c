"""Command-line interface (CLI) for PQC Expressibility.

Subcommands:
  * catalog   - List templates and their gate/parameter counts.
  * decompose - Show one instance before and after elementary decomposition.
  * expr      - Estimate the KL expressibility of one instance (or a reference circuit).
  * dataset   - Generate the expressibility dataset over the instance grid.
  * train     - Fit the GBT and LASSO regressors and report hold-out R^2.
  * explain   - TreeSHAP attributions of a trained GBT model.
  * report    - Correlation, histogram, importance and saturation tables.

Every command validates its configuration first and exits with the code of the
error class it hit (see `pqc_expressibility.errors`).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np

from .artifacts import write_key_values
from .catalog import (
    CircuitTemplate,
    aggregate_counts,
    compile_instance,
    gate_counts,
    get_template,
    param_count,
    resolve_catalog,
)
from .config import (
    RunConfig,
    get_default_threads,
    get_env_bool,
    get_env_float,
    get_env_int,
    get_env_var,
    parse_range,
)
from .constants import (
    ALL_MODELS,
    CLI_COMMAND_CATALOG,
    CLI_COMMAND_DATASET,
    CLI_COMMAND_DECOMPOSE,
    CLI_COMMAND_EXPLAIN,
    CLI_COMMAND_EXPR,
    CLI_COMMAND_REPORT,
    CLI_COMMAND_TRAIN,
    CONVERGENCE_FILE_NAME,
    CORRELATION_FILE_NAME,
    DATASET_FILE_NAME,
    DEFAULT_BINS,
    DEFAULT_GBT_LEARNING_RATE,
    DEFAULT_GBT_MAX_LEAVES,
    DEFAULT_GBT_MIN_SAMPLES_LEAF,
    DEFAULT_GBT_ROUNDS,
    DEFAULT_GBT_SUBSAMPLE,
    DEFAULT_HIST_BIN_WIDTH,
    DEFAULT_LAYERS,
    DEFAULT_MAX_LAYERS,
    DEFAULT_OUT,
    DEFAULT_QUBITS,
    DEFAULT_REPS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TEST_FRACTION,
    ELEMENTARY_COUNT_COLUMNS,
    ENV_BINS,
    ENV_CATALOG,
    ENV_OUT,
    ENV_PARAM_CAP,
    ENV_REPS,
    ENV_SAMPLES,
    ENV_SEED,
    ENV_TEST_FRACTION,
    EXIT_INTERRUPTED,
    EXIT_SUCCESS,
    EXIT_USAGE,
    GBT_MODEL_FILE_NAME,
    HISTOGRAM_FILE_NAME,
    IMPORTANCE_FILE_NAME,
    LASSO_MODEL_FILE_NAME,
    METRICS_FILE_NAME,
    MODEL_GBT,
    MODEL_LASSO,
    PREDICTIONS_FILE_NAME,
    REFERENCE_KINDS,
    SATURATION_FILE_NAME,
    SHAP_SUBSETS,
    SHAP_VALUES_FILE_NAME,
    SUBSET_ALL,
    SUBSET_TEST,
    VARIANT_LAYERS_ONLY,
    VARIANT_PARAM_CAP,
)
from .dataset import (
    FeatureScaling,
    GridFilter,
    correlation_from_counts,
    correlation_matrix,
    count_matrix,
    default_variants,
    enumerate_grid,
    expressibility_histogram,
    feature_matrix,
    generate,
    grid_gate_counts,
    load_dataset,
    zero_bin_reduction,
)
from .errors import ConfigError, InsufficientDataError, PqcExprError
from .explain import explain_all, local_accuracy_residual, oracle_difference, saturation_diagnostic, shap_summary
from .expressibility import SamplingConfig, convergence_study, estimate_expressibility, reference_instance
from .messages import (
    CATALOG_AGGREGATE_LINE,
    CATALOG_COUNTS_LINE,
    CATALOG_LIST_LINE,
    CLI_DESCRIPTION,
    CLI_HEADER_CATALOG,
    CLI_HEADER_DATASET,
    CLI_HEADER_DECOMPOSE,
    CLI_HEADER_EXPLAIN,
    CLI_HEADER_EXPR,
    CLI_HEADER_REPORT,
    CLI_HEADER_TRAIN,
    CLI_HELP_AGGREGATE,
    CLI_HELP_BIN_WIDTH,
    CLI_HELP_BINS,
    CLI_HELP_CATALOG,
    CLI_HELP_CATALOG_PATH,
    CLI_HELP_CHECK_LOCAL,
    CLI_HELP_COMMANDS,
    CLI_HELP_CONVERGENCE,
    CLI_HELP_COUNTS_ONLY,
    CLI_HELP_DATASET,
    CLI_HELP_DATASET_PATH,
    CLI_HELP_DECOMPOSE,
    CLI_HELP_EXPLAIN,
    CLI_HELP_EXPR,
    CLI_HELP_JSON,
    CLI_HELP_LASSO_LAMBDA,
    CLI_HELP_LAYERS,
    CLI_HELP_LEARNING_RATE,
    CLI_HELP_LIST,
    CLI_HELP_MAX_LEAVES,
    CLI_HELP_MIN_SAMPLES_LEAF,
    CLI_HELP_MLFLOW,
    CLI_HELP_MODEL,
    CLI_HELP_MODEL_FILE,
    CLI_HELP_ORACLE_CHECK,
    CLI_HELP_OUT,
    CLI_HELP_PARAM_CAP,
    CLI_HELP_QUBITS,
    CLI_HELP_REFERENCE,
    CLI_HELP_REPORT,
    CLI_HELP_REPS,
    CLI_HELP_RESUME,
    CLI_HELP_ROUNDS,
    CLI_HELP_SAMPLES,
    CLI_HELP_SEED,
    CLI_HELP_SHAP_DIR,
    CLI_HELP_SUBSAMPLE,
    CLI_HELP_SUBSET,
    CLI_HELP_TEMPLATE,
    CLI_HELP_TEST_FRACTION,
    CLI_HELP_THREADS,
    CLI_HELP_TRAIN,
    CLI_HELP_VERSION,
    DATASET_DONE,
    DATASET_GRID,
    DATASET_INTERRUPTED,
    DECOMPOSE_GATE_LINE,
    DECOMPOSE_INSTANCE,
    ERROR_CONVERGENCE_LIST,
    ERROR_INSUFFICIENT_DATA,
    ERROR_INTERRUPTED,
    ERROR_SINGLE_VALUE,
    ERROR_TEMPLATE_OR_REFERENCE,
    ERROR_UNEXPECTED,
    EXPLAIN_BASE_VALUE,
    EXPLAIN_IMPORTANCE_LINE,
    EXPLAIN_LOCAL_ACCURACY,
    EXPLAIN_ORACLE,
    EXPLAIN_ROWS,
    EXPLAIN_WRITTEN,
    EXPR_CONVERGENCE_LINE,
    EXPR_INSTANCE,
    EXPR_REFERENCE_LABEL,
    EXPR_REPETITIONS,
    EXPR_RESULT,
    EXPR_SETTINGS,
    EXPR_TEMPLATE_LABEL,
    REPORT_CORRELATION_PAIR,
    REPORT_HISTOGRAM_LINE,
    REPORT_SATURATION_LINE,
    REPORT_UNDEFINED,
    REPORT_WRITTEN,
    REPORT_ZERO_BIN,
    RUN_TRACKED,
    STAGE_AFTER,
    STAGE_BEFORE,
    STATUS_ERROR,
    STATUS_RUNNING,
    STATUS_SUCCESS,
    STATUS_WARNING,
    TRAIN_LASSO_LAMBDA,
    TRAIN_METRIC_LINE,
    TRAIN_METRICS_WRITTEN,
    TRAIN_MODEL_SAVED,
    TRAIN_PREDICTIONS_WRITTEN,
    TRAIN_ROWS,
)
from .models import (
    GBTHyperparams,
    LassoModel,
    Regressor,
    fit_gbt,
    fit_lasso,
    load_model,
    mse,
    r2,
    save_model,
    train_test_split,
)
from .report import (
    read_shap_values,
    write_convergence,
    write_correlation,
    write_histogram,
    write_importance,
    write_predictions,
    write_saturation,
    write_shap_exports,
)
from .tracking import is_tracking_enabled, log_run
from .utils import get_version, setup_logger

SINGLE_INSTANCE_QUBITS = "4"
SINGLE_INSTANCE_LAYERS = "1"


def _print_header(title: str) -> None:
    """Print a decorated section header.

    Args:
        title: Section title.

    """
    print(f"\n{title}")
    print("=" * len(title))


# Configuration -----------------------------------------------------------------


def _or_default(value: object, fallback: object) -> object:
    return fallback if value is None else value


def build_config(
    args: argparse.Namespace,
    qubits_default: str | tuple[int, int] = DEFAULT_QUBITS,
    layers_default: str | tuple[int, int] = DEFAULT_LAYERS,
) -> RunConfig:
    """Assemble the validated run configuration (flag, then env var, then default).

    Args:
        args: Parsed arguments of any subcommand.
        qubits_default: Qubit range used when --qubits is absent.
        layers_default: Layer range used when --layers is absent.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: If any value is invalid.

    """
    layers = parse_range(_or_default(args.layers, layers_default))  # type: ignore[arg-type]
    gbt = {
        "n_rounds": _or_default(getattr(args, "rounds", None), DEFAULT_GBT_ROUNDS),
        "learning_rate": _or_default(getattr(args, "learning_rate", None), DEFAULT_GBT_LEARNING_RATE),
        "max_leaves": _or_default(getattr(args, "max_leaves", None), DEFAULT_GBT_MAX_LEAVES),
        "min_samples_leaf": _or_default(getattr(args, "min_samples_leaf", None), DEFAULT_GBT_MIN_SAMPLES_LEAF),
        "subsample": _or_default(getattr(args, "subsample", None), DEFAULT_GBT_SUBSAMPLE),
    }
    config = RunConfig(
        command=args.command,
        catalog=args.catalog or get_env_var(ENV_CATALOG),
        qubits=parse_range(_or_default(args.qubits, qubits_default)),  # type: ignore[arg-type]
        layers=layers,
        max_layers=max(DEFAULT_MAX_LAYERS, layers[1]),
        samples=int(_or_default(args.samples, get_env_int(ENV_SAMPLES, DEFAULT_SAMPLES))),  # type: ignore[call-overload]
        bins=int(_or_default(args.bins, get_env_int(ENV_BINS, DEFAULT_BINS))),  # type: ignore[call-overload]
        reps=int(_or_default(args.reps, get_env_int(ENV_REPS, DEFAULT_REPS))),  # type: ignore[call-overload]
        seed=int(_or_default(args.seed, get_env_int(ENV_SEED, DEFAULT_SEED))),  # type: ignore[call-overload]
        threads=args.threads if args.threads is not None else get_default_threads(),
        out=args.out or get_env_var(ENV_OUT, DEFAULT_OUT) or DEFAULT_OUT,
        resume=bool(args.resume),
        param_cap=bool(args.param_cap) or get_env_bool(ENV_PARAM_CAP, False),
        test_fraction=float(_or_default(args.test_fraction, get_env_float(ENV_TEST_FRACTION, DEFAULT_TEST_FRACTION))),  # type: ignore[arg-type]
        models=(args.model,) if args.model else ALL_MODELS,
        gbt=gbt,
        lasso_lambda=getattr(args, "lasso_lambda", None),
    )
    return config.validate()


def _single(name: str, bounds: tuple[int, int]) -> int:
    low, high = bounds
    if low != high:
        raise ConfigError(ERROR_SINGLE_VALUE.format(name=name, low=low, high=high))
    return low


def _sampling(config: RunConfig) -> SamplingConfig:
    return SamplingConfig(n_pairs=config.samples, n_bins=config.bins, n_repetitions=config.reps, master_seed=config.seed)


def _grid_filter(config: RunConfig) -> GridFilter:
    return GridFilter(qubits=config.qubits, layers=config.layers, max_layers=config.max_layers, param_cap=config.param_cap)


def _out_dir(config: RunConfig) -> Path:
    return Path(config.out)


def _dataset_path(args: argparse.Namespace, config: RunConfig) -> Path:
    explicit = getattr(args, "dataset", None)
    return Path(explicit) if explicit else _out_dir(config) / DATASET_FILE_NAME


def _stage_count_lines(template: CircuitTemplate, n_qubits: int, n_layers: int) -> list[str]:
    lines = []
    for stage, decomposed in ((STAGE_BEFORE, False), (STAGE_AFTER, True)):
        instance = compile_instance(template, n_qubits, n_layers, decomposed)
        counts = gate_counts(instance)
        lines.append(
            CATALOG_COUNTS_LINE.format(
                id=template.id,
                n_qubits=n_qubits,
                n_layers=n_layers,
                stage=stage,
                counts=counts.describe(),
                n_params=param_count(instance),
            ),
        )
    return lines


# Commands ----------------------------------------------------------------------


def catalog_command(args: argparse.Namespace) -> int:
    """List templates, per-template counts or the aggregate counts.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args, SINGLE_INSTANCE_QUBITS, SINGLE_INSTANCE_LAYERS)
    catalog = resolve_catalog(config.catalog)

    if args.list:
        for template in catalog:
            print(CATALOG_LIST_LINE.format(id=template.id, description=template.description))
        return EXIT_SUCCESS

    n_qubits = _single("qubits", config.qubits)
    n_layers = _single("layers", config.layers)
    _print_header(CLI_HEADER_CATALOG)
    if args.aggregate:
        for stage, decomposed in ((STAGE_BEFORE, False), (STAGE_AFTER, True)):
            total = aggregate_counts(catalog, n_qubits, n_layers, decomposed)
            print(CATALOG_AGGREGATE_LINE.format(n_qubits=n_qubits, n_layers=n_layers, stage=stage, counts=total.describe()))
        return EXIT_SUCCESS

    templates = [get_template(catalog, args.template)] if args.template is not None else catalog
    for template in templates:
        if n_qubits < template.min_qubits:
            continue
        for line in _stage_count_lines(template, n_qubits, n_layers):
            print(line)
    return EXIT_SUCCESS


def decompose_command(args: argparse.Namespace) -> int:
    """Print one instance gate by gate after decomposition.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args, SINGLE_INSTANCE_QUBITS, SINGLE_INSTANCE_LAYERS)
    template = get_template(resolve_catalog(config.catalog), args.template)
    n_qubits = _single("qubits", config.qubits)
    n_layers = _single("layers", config.layers)

    _print_header(CLI_HEADER_DECOMPOSE)
    for line in _stage_count_lines(template, n_qubits, n_layers):
        print(line)
    instance = compile_instance(template, n_qubits, n_layers, decomposed=True)
    print(DECOMPOSE_INSTANCE.format(id=template.id, n_qubits=n_qubits, n_layers=n_layers, gates=len(instance.gates), params=instance.n_params))
    for index, gate in enumerate(instance.gates):
        print(DECOMPOSE_GATE_LINE.format(index=index, gate=gate.describe()))
    return EXIT_SUCCESS


def _parse_sample_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(ERROR_CONVERGENCE_LIST.format(value=text)) from None
    if not sizes or min(sizes) < 1:
        raise ConfigError(ERROR_CONVERGENCE_LIST.format(value=text))
    return sizes


def expr_command(args: argparse.Namespace) -> int:
    """Estimate expressibility of a template instance or a 1-qubit reference circuit.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    if (args.template is None) == (args.reference is None):
        raise ConfigError(ERROR_TEMPLATE_OR_REFERENCE)
    config = build_config(args, SINGLE_INSTANCE_QUBITS, SINGLE_INSTANCE_LAYERS)
    sampling = _sampling(config)

    if args.reference is not None:
        instance = reference_instance(args.reference)
        label = EXPR_REFERENCE_LABEL.format(reference=args.reference)
    else:
        template = get_template(resolve_catalog(config.catalog), args.template)
        n_qubits = _single("qubits", config.qubits)
        n_layers = _single("layers", config.layers)
        instance = compile_instance(template, n_qubits, n_layers)
        label = EXPR_TEMPLATE_LABEL.format(id=template.id, n_qubits=n_qubits, n_layers=n_layers)

    if args.convergence:
        rows = convergence_study(instance, _parse_sample_sizes(args.convergence), sampling, config.threads)
        if args.json:
            print(json.dumps([{"samples": r.samples, "kl_mean": r.mean_kl, "kl_std": r.std_kl} for r in rows], sort_keys=True))
        else:
            _print_header(CLI_HEADER_EXPR)
            print(EXPR_INSTANCE.format(label=label, gates=len(instance.gates), params=instance.n_params))
            for row in rows:
                print(EXPR_CONVERGENCE_LINE.format(samples=row.samples, mean=row.mean_kl, std=row.std_kl))
        if args.out:
            write_convergence(_out_dir(config) / CONVERGENCE_FILE_NAME, rows, config.to_header_dict())
        return EXIT_SUCCESS

    estimate = estimate_expressibility(instance, sampling, config.threads)
    if args.json:
        payload = {
            "label": label,
            "kl_mean": estimate.mean_kl,
            "kl_std": estimate.std_kl,
            "per_repetition": list(estimate.per_repetition),
            "samples": sampling.n_pairs,
            "bins": sampling.n_bins,
            "reps": sampling.n_repetitions,
            "seed": sampling.master_seed,
        }
        print(json.dumps(payload, sort_keys=True))
        return EXIT_SUCCESS

    _print_header(CLI_HEADER_EXPR)
    print(EXPR_INSTANCE.format(label=label, gates=len(instance.gates), params=instance.n_params))
    print(EXPR_SETTINGS.format(samples=sampling.n_pairs, bins=sampling.n_bins, reps=sampling.n_repetitions, seed=sampling.master_seed))
    print(f"{STATUS_SUCCESS} {EXPR_RESULT.format(mean=estimate.mean_kl, std=estimate.std_kl)}")
    print(EXPR_REPETITIONS.format(values=", ".join(f"{v:.6f}" for v in estimate.per_repetition)))
    return EXIT_SUCCESS


def dataset_command(args: argparse.Namespace) -> int:
    """Generate the dataset CSV; interrupted runs keep every flushed row.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args)
    catalog = resolve_catalog(config.catalog)
    grid_filter = _grid_filter(config)
    out = Path(config.out)
    path = out if out.suffix == ".csv" else out / DATASET_FILE_NAME

    _print_header(CLI_HEADER_DATASET)
    entries = enumerate_grid(catalog, grid_filter)
    print(
        DATASET_GRID.format(
            entries=len(entries),
            qubits=f"{config.qubits[0]}..{config.qubits[1]}",
            layers=f"{config.layers[0]}..{config.layers[1]}",
            cap="on" if config.param_cap else "off",
        ),
    )
    progress = {"done": 0}

    def on_record(done: int, _total: int, _record: object) -> None:
        progress["done"] = done

    try:
        summary = generate(
            catalog,
            grid_filter,
            _sampling(config),
            path,
            resume=config.resume,
            threads=config.threads,
            header=config.to_header_dict(),
            on_record=on_record,
        )
    except KeyboardInterrupt:
        print(f"\n{STATUS_WARNING} {DATASET_INTERRUPTED.format(done=progress['done'], path=path)}")
        return EXIT_INTERRUPTED

    print(f"{STATUS_SUCCESS} {DATASET_DONE.format(path=summary.path, computed=summary.computed, skipped=summary.skipped, total=summary.total)}")

    if is_tracking_enabled(args.mlflow):
        counts = {"rows_total": summary.total, "rows_computed": summary.computed, "rows_skipped": summary.skipped}
        run_id = log_run(config.to_header_dict(), counts, [summary.path], run_name=CLI_COMMAND_DATASET)
        print(f"{STATUS_SUCCESS} {RUN_TRACKED.format(run_id=run_id)}")
    return EXIT_SUCCESS


def _fit(kind: str, X: np.ndarray, y: np.ndarray, config: RunConfig, scaling: FeatureScaling) -> Regressor:
    if kind == MODEL_GBT:
        return fit_gbt(X, y, GBTHyperparams(**config.gbt), seed=config.seed, scaling=scaling)
    return fit_lasso(X, y, lam=config.lasso_lambda, seed=config.seed, scaling=scaling)


def train_command(args: argparse.Namespace) -> int:
    """Fit the regressors on a hold-out split and write models and metrics.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args)
    records = load_dataset(_dataset_path(args, config))
    X, y, scaling = feature_matrix(records)
    split = train_test_split(len(records), config.test_fraction, config.seed)
    out_dir = _out_dir(config)
    header = config.to_header_dict()
    test_keys = [(records[i].template_id, records[i].n_qubits, records[i].n_layers) for i in split.test]

    _print_header(CLI_HEADER_TRAIN)
    print(TRAIN_ROWS.format(train=split.sizes[0], test=split.sizes[1]))

    metrics: dict[str, float] = {"n_train": split.sizes[0], "n_test": split.sizes[1]}
    predictions: dict[str, np.ndarray] = {}
    written: list[Path] = []
    file_names = {MODEL_GBT: GBT_MODEL_FILE_NAME, MODEL_LASSO: LASSO_MODEL_FILE_NAME}
    for kind in config.models:
        model = _fit(kind, X[split.train], y[split.train], config, scaling)
        test_pred = np.asarray(model.predict(X[split.test]))
        predictions[kind] = test_pred
        model_metrics = {
            f"{kind}_r2_test": r2(test_pred, y[split.test]),
            f"{kind}_r2_train": r2(np.asarray(model.predict(X[split.train])), y[split.train]),
            f"{kind}_mse_test": mse(test_pred, y[split.test]),
        }
        if isinstance(model, LassoModel):
            model_metrics["lasso_lambda"] = model.lam
            print(TRAIN_LASSO_LAMBDA.format(value=model.lam))
        metrics.update(model_metrics)
        path = save_model(model, out_dir / file_names[kind], header, test_keys, model_metrics)
        written.append(path)
        print(f"{STATUS_SUCCESS} {TRAIN_MODEL_SAVED.format(kind=kind.upper(), path=path)}")

    predictions_path = write_predictions(out_dir / PREDICTIONS_FILE_NAME, test_keys, y[split.test], predictions, header)
    metrics_path = write_key_values(out_dir / METRICS_FILE_NAME, metrics, header)
    written.extend([predictions_path, metrics_path])
    print(f"{STATUS_SUCCESS} {TRAIN_PREDICTIONS_WRITTEN.format(path=predictions_path)}")
    print(f"{STATUS_SUCCESS} {TRAIN_METRICS_WRITTEN.format(path=metrics_path)}")
    for key, value in metrics.items():
        print(TRAIN_METRIC_LINE.format(key=key, value=value))

    if is_tracking_enabled(args.mlflow):
        run_id = log_run(header, metrics, written, run_name=CLI_COMMAND_TRAIN)
        print(f"{STATUS_SUCCESS} {RUN_TRACKED.format(run_id=run_id)}")
    return EXIT_SUCCESS


def explain_command(args: argparse.Namespace) -> int:
    """Explain a trained GBT model on the dataset rows and export SHAP tables.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args)
    out_dir = _out_dir(config)
    bundle = load_model(Path(args.model_file) if args.model_file else out_dir / GBT_MODEL_FILE_NAME)
    records = load_dataset(_dataset_path(args, config))
    scaling = getattr(bundle.model, "scaling", None) or feature_matrix(records)[2]

    keys = [(r.template_id, r.n_qubits, r.n_layers) for r in records]
    if args.subset == SUBSET_ALL:
        rows = list(range(len(records)))
    else:
        wanted = args.subset == SUBSET_TEST
        rows = [i for i, key in enumerate(keys) if (key in bundle.test_keys) == wanted]
    if not rows:
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail=f"no rows in subset '{args.subset}'"))

    raw = count_matrix([records[i] for i in rows])
    X = scaling.transform(raw)
    _print_header(CLI_HEADER_EXPLAIN)
    print(f"{STATUS_RUNNING} {EXPLAIN_ROWS.format(rows=len(rows), subset=args.subset)}")
    explanations = explain_all(bundle.model, X, config.threads)
    summary = shap_summary(explanations, X, raw)
    row_keys = [keys[i] for i in rows]
    write_shap_exports(out_dir, row_keys, explanations, summary, config.to_header_dict())

    print(EXPLAIN_BASE_VALUE.format(value=explanations[0].base_value))
    for feature, mean_abs, mean in summary.importance_rows():
        print(EXPLAIN_IMPORTANCE_LINE.format(feature=feature, mean_abs=mean_abs, mean=mean))
    if args.check_local_accuracy:
        print(EXPLAIN_LOCAL_ACCURACY.format(value=local_accuracy_residual(bundle.model, explanations, X)))
    if args.oracle_check:
        count = min(args.oracle_check, X.shape[0])
        print(EXPLAIN_ORACLE.format(value=oracle_difference(bundle.model, X[:count]), rows=count))
    print(f"{STATUS_SUCCESS} {EXPLAIN_WRITTEN.format(path=out_dir)}")
    return EXIT_SUCCESS


def _format_correlation(value: float | None) -> str:
    return REPORT_UNDEFINED if value is None else f"{value:.4f}"


def report_command(args: argparse.Namespace) -> int:
    """Write the correlation, histogram, importance and saturation tables.

    Returns:
        Process exit code.

    """
    setup_logger("pqc_expressibility.cli")
    config = build_config(args)
    out_dir = _out_dir(config)
    header = config.to_header_dict()
    _print_header(CLI_HEADER_REPORT)

    if args.counts_only:
        rows = grid_gate_counts(resolve_catalog(config.catalog), _grid_filter(config))
        counts = np.array([row.counts.select(ELEMENTARY_COUNT_COLUMNS) for row in rows], dtype=np.float64)
        matrix = correlation_from_counts(counts.reshape(len(rows), len(ELEMENTARY_COUNT_COLUMNS)))
    else:
        records = load_dataset(_dataset_path(args, config))
        matrix = correlation_matrix(records)
        histogram = expressibility_histogram(records, args.bin_width, default_variants(config.max_layers))
        write_histogram(out_dir / HISTOGRAM_FILE_NAME, histogram, header)
        for variant in sorted(histogram.counts):
            total = int(np.sum(histogram.counts[variant]))
            print(REPORT_HISTOGRAM_LINE.format(variant=variant, count=total, bins=histogram.n_bins, width=histogram.bin_width))
        if histogram.n_bins:
            print(
                REPORT_ZERO_BIN.format(
                    base=int(histogram.counts[VARIANT_LAYERS_ONLY][0]),
                    base_name=VARIANT_LAYERS_ONLY,
                    constrained=int(histogram.counts[VARIANT_PARAM_CAP][0]),
                    constrained_name=VARIANT_PARAM_CAP,
                    decrease=f"{zero_bin_reduction(histogram, VARIANT_LAYERS_ONLY, VARIANT_PARAM_CAP):.1%}",
                ),
            )
    write_correlation(out_dir / CORRELATION_FILE_NAME, matrix, header)
    print(REPORT_CORRELATION_PAIR.format(a="ry", b="frz", value=_format_correlation(matrix.get("ry", "frz"))))

    if args.shap_dir:
        _, summary = read_shap_values(Path(args.shap_dir) / SHAP_VALUES_FILE_NAME)
        write_importance(out_dir / IMPORTANCE_FILE_NAME, summary, header)
        saturation = saturation_diagnostic(summary)
        write_saturation(out_dir / SATURATION_FILE_NAME, saturation, header)
        for feature, mean_abs, mean in summary.importance_rows():
            print(EXPLAIN_IMPORTANCE_LINE.format(feature=feature, mean_abs=mean_abs, mean=mean))
        for row in saturation:
            means = ", ".join(f"{m:+.4f}" for m in row.quartile_means)
            print(REPORT_SATURATION_LINE.format(feature=row.feature, means=means, flat=row.flattening))

    print(f"{STATUS_SUCCESS} {REPORT_WRITTEN.format(path=out_dir)}")
    return EXIT_SUCCESS


# Parser ------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand (unset values fall back to env vars)."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help=CLI_HELP_CATALOG_PATH)
    common.add_argument("--qubits", help=CLI_HELP_QUBITS)
    common.add_argument("--layers", help=CLI_HELP_LAYERS)
    common.add_argument("--samples", type=int, help=CLI_HELP_SAMPLES)
    common.add_argument("--bins", type=int, help=CLI_HELP_BINS)
    common.add_argument("--reps", type=int, help=CLI_HELP_REPS)
    common.add_argument("--seed", type=int, help=CLI_HELP_SEED)
    common.add_argument("--threads", type=int, help=CLI_HELP_THREADS)
    common.add_argument("--out", help=CLI_HELP_OUT)
    common.add_argument("--resume", action="store_true", help=CLI_HELP_RESUME)
    common.add_argument("--param-cap", action="store_true", help=CLI_HELP_PARAM_CAP)
    common.add_argument("--test-fraction", type=float, help=CLI_HELP_TEST_FRACTION)
    common.add_argument("--model", choices=ALL_MODELS, help=CLI_HELP_MODEL)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with all subcommands."""
    parser = argparse.ArgumentParser(prog="pqc-expr", description=CLI_DESCRIPTION)
    parser.add_argument("--version", action="version", version=get_version(), help=CLI_HELP_VERSION)
    subparsers = parser.add_subparsers(dest="command", help=CLI_HELP_COMMANDS)
    common = _common_parser()

    # catalog
    catalog_parser = subparsers.add_parser(CLI_COMMAND_CATALOG, parents=[common], help=CLI_HELP_CATALOG)
    catalog_parser.add_argument("--list", action="store_true", help=CLI_HELP_LIST)
    catalog_parser.add_argument("--aggregate", action="store_true", help=CLI_HELP_AGGREGATE)
    catalog_parser.add_argument("--template", type=int, help=CLI_HELP_TEMPLATE)

    # decompose
    decompose_parser = subparsers.add_parser(CLI_COMMAND_DECOMPOSE, parents=[common], help=CLI_HELP_DECOMPOSE)
    decompose_parser.add_argument("--template", type=int, required=True, help=CLI_HELP_TEMPLATE)

    # expr
    expr_parser = subparsers.add_parser(CLI_COMMAND_EXPR, parents=[common], help=CLI_HELP_EXPR)
    expr_parser.add_argument("--template", type=int, help=CLI_HELP_TEMPLATE)
    expr_parser.add_argument("--reference", choices=REFERENCE_KINDS, help=CLI_HELP_REFERENCE)
    expr_parser.add_argument("--convergence", metavar="S1,S2,...", help=CLI_HELP_CONVERGENCE)
    expr_parser.add_argument("--json", action="store_true", help=CLI_HELP_JSON)

    # dataset
    dataset_parser = subparsers.add_parser(CLI_COMMAND_DATASET, parents=[common], help=CLI_HELP_DATASET)
    dataset_parser.add_argument("--mlflow", action="store_true", help=CLI_HELP_MLFLOW)

    # train
    train_parser = subparsers.add_parser(CLI_COMMAND_TRAIN, parents=[common], help=CLI_HELP_TRAIN)
    train_parser.add_argument("--dataset", help=CLI_HELP_DATASET_PATH)
    train_parser.add_argument("--rounds", type=int, help=CLI_HELP_ROUNDS)
    train_parser.add_argument("--learning-rate", type=float, help=CLI_HELP_LEARNING_RATE)
    train_parser.add_argument("--max-leaves", type=int, help=CLI_HELP_MAX_LEAVES)
    train_parser.add_argument("--min-samples-leaf", type=int, help=CLI_HELP_MIN_SAMPLES_LEAF)
    train_parser.add_argument("--subsample", type=float, help=CLI_HELP_SUBSAMPLE)
    train_parser.add_argument("--lasso-lambda", type=float, help=CLI_HELP_LASSO_LAMBDA)
    train_parser.add_argument("--mlflow", action="store_true", help=CLI_HELP_MLFLOW)

    # explain
    explain_parser = subparsers.add_parser(CLI_COMMAND_EXPLAIN, parents=[common], help=CLI_HELP_EXPLAIN)
    explain_parser.add_argument("--dataset", help=CLI_HELP_DATASET_PATH)
    explain_parser.add_argument("--model-file", help=CLI_HELP_MODEL_FILE)
    explain_parser.add_argument("--subset", choices=SHAP_SUBSETS, default=SUBSET_ALL, help=CLI_HELP_SUBSET)
    explain_parser.add_argument("--check-local-accuracy", action="store_true", help=CLI_HELP_CHECK_LOCAL)
    explain_parser.add_argument("--oracle-check", type=int, metavar="N", default=0, help=CLI_HELP_ORACLE_CHECK)

    # report
    report_parser = subparsers.add_parser(CLI_COMMAND_REPORT, parents=[common], help=CLI_HELP_REPORT)
    report_parser.add_argument("--dataset", help=CLI_HELP_DATASET_PATH)
    report_parser.add_argument("--counts-only", action="store_true", help=CLI_HELP_COUNTS_ONLY)
    report_parser.add_argument("--bin-width", type=float, default=DEFAULT_HIST_BIN_WIDTH, help=CLI_HELP_BIN_WIDTH)
    report_parser.add_argument("--shap-dir", help=CLI_HELP_SHAP_DIR)
    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    CLI_COMMAND_CATALOG: catalog_command,
    CLI_COMMAND_DECOMPOSE: decompose_command,
    CLI_COMMAND_EXPR: expr_command,
    CLI_COMMAND_DATASET: dataset_command,
    CLI_COMMAND_TRAIN: train_command,
    CLI_COMMAND_EXPLAIN: explain_command,
    CLI_COMMAND_REPORT: report_command,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI entry point.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:]).

    Returns:
        Process exit code (0 on success, the error's exit code otherwise).

    """
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return handler(args)
    except KeyboardInterrupt:
        print(f"\n{STATUS_WARNING} {ERROR_INTERRUPTED}")
        return EXIT_INTERRUPTED
    except PqcExprError as e:
        print(f"{STATUS_ERROR} {e}")
        return e.exit_code
    except Exception as e:  # pragma: no cover - last-resort guard
        print(f"{STATUS_ERROR} {ERROR_UNEXPECTED.format(error=e)}")
        return PqcExprError.exit_code


if __name__ == "__main__":
    sys.exit(main())
