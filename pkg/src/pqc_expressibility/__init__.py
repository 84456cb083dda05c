"""Expressibility of parameterized quantum circuits, and what drives it.

Public API:
    - Catalog: `default_catalog`, `load_catalog`, `compile_instance`, `gate_counts`.
    - Simulation: `run_circuit`, `fidelity` (dense statevectors, complex128).
    - Expressibility: `estimate_expressibility` (KL divergence against Haar).
    - Dataset: `generate`, `load_dataset`, `feature_matrix`, `correlation_matrix`.
    - Models: `fit_gbt`, `fit_lasso`, `train_test_split`, `r2`.
    - Explanations: `tree_shap`, `brute_force_shap`, `explain_all`.
    - __version__: Package version string (best-effort).
"""

from __future__ import annotations

from .catalog import (
    CircuitTemplate,
    GateCountVector,
    compile_instance,
    decompose,
    default_catalog,
    gate_counts,
    instantiate,
    load_catalog,
    param_count,
)
from .circuit import CircuitInstance, GateKind, GateOp, StateVector, fidelity, run_circuit
from .dataset import (
    ExpressibilityRecord,
    GridFilter,
    correlation_matrix,
    enumerate_grid,
    expressibility_histogram,
    feature_matrix,
    generate,
    load_dataset,
)
from .errors import PqcExprError
from .explain import brute_force_shap, explain_all, saturation_diagnostic, shap_summary, tree_shap
from .expressibility import SamplingConfig, estimate_expressibility, haar_bin_masses, kl_divergence
from .models import fit_gbt, fit_lasso, load_model, predict, r2, save_model, train_test_split
from .utils import get_version

__version__ = get_version()


__all__ = [
    "CircuitInstance",
    "CircuitTemplate",
    "ExpressibilityRecord",
    "GateCountVector",
    "GateKind",
    "GateOp",
    "GridFilter",
    "PqcExprError",
    "SamplingConfig",
    "StateVector",
    "__version__",
    "brute_force_shap",
    "compile_instance",
    "correlation_matrix",
    "decompose",
    "default_catalog",
    "enumerate_grid",
    "estimate_expressibility",
    "explain_all",
    "expressibility_histogram",
    "feature_matrix",
    "fidelity",
    "fit_gbt",
    "fit_lasso",
    "gate_counts",
    "generate",
    "haar_bin_masses",
    "instantiate",
    "kl_divergence",
    "load_catalog",
    "load_dataset",
    "load_model",
    "param_count",
    "predict",
    "r2",
    "run_circuit",
    "save_model",
    "saturation_diagnostic",
    "shap_summary",
    "train_test_split",
    "tree_shap",
]
