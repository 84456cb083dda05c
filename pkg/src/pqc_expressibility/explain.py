"""Shapley attributions for the boosted-tree model.

`tree_shap_values` implements path-dependent TreeSHAP: a feature absent from a
coalition is marginalized by following both children of its splits, weighted
by their training cover. The path bookkeeping (extend / unwind / unwound sum)
is carried for all rows at once, so each tree is walked a single time per
batch. `brute_force_shap_values` enumerates every coalition with the same
conditional expectation and serves as a test oracle.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .constants import FEATURE_NAMES, MAX_BRUTE_FORCE_FEATURES, ROTATION_FEATURES
from .errors import InsufficientDataError, ModelError
from .messages import (
    ERROR_LENGTH_MISMATCH,
    ERROR_MISSING_COVER,
    ERROR_NO_EXPLANATIONS,
    ERROR_NOT_TREE_MODEL,
    ERROR_QUARTILES,
    ERROR_TOO_MANY_FEATURES,
)
from .models.base import FloatArray, Regressor
from .models.gbt import GBTModel, Tree

# Path-dependent TreeSHAP ---------------------------------------------------------


@dataclass
class _Path:
    """Unique feature path from the root to the current node.

    `zeros` are scalar cover fractions; `ones` and `weights` hold one value per
    explained row. Entries are replaced, never modified in place, so copies
    can share arrays.
    """

    features: list[int] = field(default_factory=list)
    zeros: list[float] = field(default_factory=list)
    ones: list[FloatArray] = field(default_factory=list)
    weights: list[FloatArray] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.features) - 1

    def copy(self) -> _Path:
        return _Path(list(self.features), list(self.zeros), list(self.ones), list(self.weights))

    def extend(self, zero: float, one: FloatArray, feature: int) -> None:
        depth = len(self.features)
        self.features.append(feature)
        self.zeros.append(zero)
        self.ones.append(one)
        self.weights.append(np.ones_like(one) if depth == 0 else np.zeros_like(one))
        for i in range(depth - 1, -1, -1):
            self.weights[i + 1] = self.weights[i + 1] + one * self.weights[i] * (i + 1) / (depth + 1)
            self.weights[i] = zero * self.weights[i] * (depth - i) / (depth + 1)

    def unwind(self, index: int) -> None:
        depth = self.depth
        one, zero = self.ones[index], self.zeros[index]
        nonzero = one != 0
        safe_one = np.where(nonzero, one, 1.0)
        next_portion = self.weights[depth]
        for i in range(depth - 1, -1, -1):
            previous = self.weights[i]
            unwound = np.where(
                nonzero,
                next_portion * (depth + 1) / ((i + 1) * safe_one),
                previous * (depth + 1) / (zero * (depth - i)),
            )
            next_portion = np.where(nonzero, previous - unwound * zero * (depth - i) / (depth + 1), next_portion)
            self.weights[i] = unwound
        # weights keep their slots; the descriptive fields shift down
        del self.features[index], self.zeros[index], self.ones[index]
        self.weights.pop()

    def unwound_sum(self, index: int) -> FloatArray:
        depth = self.depth
        one, zero = self.ones[index], self.zeros[index]
        nonzero = one != 0
        safe_one = np.where(nonzero, one, 1.0)
        next_portion = self.weights[depth]
        total = np.zeros_like(one)
        for i in range(depth - 1, -1, -1):
            scaled = next_portion * (depth + 1) / ((i + 1) * safe_one)
            total = total + np.where(nonzero, scaled, self.weights[i] / zero / ((depth - i) / (depth + 1)))
            next_portion = np.where(nonzero, self.weights[i] - scaled * zero * (depth - i) / (depth + 1), next_portion)
        return total


def _check_covers(tree: Tree, index: int) -> None:
    bad = np.flatnonzero(~(tree.covers > 0))
    if bad.size:
        raise ModelError(ERROR_MISSING_COVER.format(tree=index, node=int(bad[0])))


def _tree_shap(tree: Tree, X: FloatArray, phi: FloatArray) -> None:
    """Add the attributions of one tree to phi (rows, features)."""

    def recurse(node: int, parent: _Path, zero: float, one: FloatArray, feature: int) -> None:
        path = parent.copy()
        path.extend(zero, one, feature)
        if tree.is_leaf(node):
            value = tree.values[node]
            for i in range(1, path.depth + 1):
                phi[:, path.features[i]] += path.unwound_sum(i) * (path.ones[i] - path.zeros[i]) * value
            return

        split = int(tree.features[node])
        left, right = int(tree.children_left[node]), int(tree.children_right[node])
        incoming_zero, incoming_one = 1.0, np.ones(X.shape[0])
        if split in path.features:
            index = path.features.index(split)
            incoming_zero, incoming_one = path.zeros[index], path.ones[index]
            path.unwind(index)
        goes_left = X[:, split] <= tree.thresholds[node]
        cover = tree.covers[node]
        recurse(left, path, tree.covers[left] / cover * incoming_zero, incoming_one * goes_left, split)
        recurse(right, path, tree.covers[right] / cover * incoming_zero, incoming_one * ~goes_left, split)

    recurse(0, _Path(), 1.0, np.ones(X.shape[0]), -1)


def _require_tree_model(model: Regressor) -> GBTModel:
    if not isinstance(model, GBTModel):
        raise ModelError(ERROR_NOT_TREE_MODEL.format(kind=model.kind))
    for index, tree in enumerate(model.trees):
        _check_covers(tree, index)
    return model


def tree_shap_values(model: Regressor, X: ArrayLike) -> tuple[float, FloatArray]:
    """Exact TreeSHAP attributions for every row of X.

    Args:
        model: A trained boosted-tree model.
        X: Normalized feature matrix (or a single vector).

    Returns:
        (base_value, phi) where phi has shape (rows, features) and
        base_value + phi.sum(axis=1) equals the model prediction.

    Raises:
        ModelError: For non-tree models, missing covers or wrong arity.

    """
    gbt = _require_tree_model(model)
    matrix = gbt.check_features(X)
    phi = np.zeros_like(matrix)
    for tree in gbt.trees:
        _tree_shap(tree, matrix, phi)
    return gbt.expected_value(), gbt.learning_rate * phi


# Brute-force oracle --------------------------------------------------------------


def _coalition_values(tree: Tree, X: FloatArray, n_features: int) -> FloatArray:
    """Path-dependent expectation of one tree for every row and every coalition mask."""
    masks = np.arange(1 << n_features)

    def visit(node: int) -> FloatArray:
        if tree.is_leaf(node):
            return np.full((X.shape[0], masks.shape[0]), tree.values[node])
        split = int(tree.features[node])
        left, right = int(tree.children_left[node]), int(tree.children_right[node])
        left_values, right_values = visit(left), visit(right)
        routed = np.where((X[:, split] <= tree.thresholds[node])[:, None], left_values, right_values)
        left_cover, right_cover = tree.covers[left], tree.covers[right]
        averaged = (left_cover * left_values + right_cover * right_values) / (left_cover + right_cover)
        present = ((masks >> split) & 1).astype(bool)
        return np.where(present[None, :], routed, averaged)

    return visit(0)


def brute_force_shap_values(model: Regressor, X: ArrayLike) -> tuple[float, FloatArray]:
    """Shapley values by enumerating all 2^M coalitions.

    Raises:
        ModelError: For non-tree models, wrong arity, or more than 12 features.

    """
    gbt = _require_tree_model(model)
    matrix = gbt.check_features(X)
    n_features = matrix.shape[1]
    if n_features > MAX_BRUTE_FORCE_FEATURES:
        raise ModelError(ERROR_TOO_MANY_FEATURES.format(max=MAX_BRUTE_FORCE_FEATURES, value=n_features))

    values = np.zeros((matrix.shape[0], 1 << n_features))
    for tree in gbt.trees:
        values += _coalition_values(tree, matrix, n_features)
    values *= gbt.learning_rate

    masks = np.arange(1 << n_features)
    sizes = np.array([bin(int(mask)).count("1") for mask in masks])
    weights = np.array(
        [math.factorial(s) * math.factorial(n_features - s - 1) / math.factorial(n_features) for s in range(n_features)]
    )
    phi = np.zeros_like(matrix)
    for feature in range(n_features):
        bit = 1 << feature
        without = masks[(masks & bit) == 0]
        phi[:, feature] = (values[:, without | bit] - values[:, without]) @ weights[sizes[without]]
    return gbt.expected_value(), phi


# Explanations and summaries ------------------------------------------------------


@dataclass(frozen=True)
class ShapExplanation:
    """Attribution of one prediction: base_value + sum(phi) == f(x)."""

    base_value: float
    phi: FloatArray
    row: int
    features: tuple[str, ...] = FEATURE_NAMES

    @property
    def total(self) -> float:
        return self.base_value + float(np.sum(self.phi))


def tree_shap(model: Regressor, x: ArrayLike, row: int = 0) -> ShapExplanation:
    """TreeSHAP explanation of a single feature vector."""
    base, phi = tree_shap_values(model, np.asarray(x, dtype=np.float64).reshape(1, -1))
    return ShapExplanation(base, phi[0], row, _feature_names(phi.shape[1]))


def brute_force_shap(model: Regressor, x: ArrayLike, row: int = 0) -> ShapExplanation:
    """Oracle explanation of a single feature vector."""
    base, phi = brute_force_shap_values(model, np.asarray(x, dtype=np.float64).reshape(1, -1))
    return ShapExplanation(base, phi[0], row, _feature_names(phi.shape[1]))


def _feature_names(count: int) -> tuple[str, ...]:
    return FEATURE_NAMES if count == len(FEATURE_NAMES) else tuple(f"x{i}" for i in range(count))


def explain_all(model: Regressor, X: ArrayLike, threads: int = 1) -> list[ShapExplanation]:
    """Explain every row of X, in row order.

    Rows are split into contiguous chunks explained concurrently; every row's
    values are independent of the chunking.
    """
    gbt = _require_tree_model(model)
    matrix = gbt.check_features(X)
    chunks = [chunk for chunk in np.array_split(np.arange(matrix.shape[0]), max(1, threads)) if chunk.size]
    if len(chunks) <= 1:
        results = [tree_shap_values(gbt, matrix)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(lambda rows: tree_shap_values(gbt, matrix[rows]), chunks))
    names = _feature_names(matrix.shape[1])
    explanations = []
    for rows, (base, phi) in zip(chunks, results, strict=True):
        explanations.extend(ShapExplanation(base, phi[k], int(row), names) for k, row in enumerate(rows))
    return explanations


def local_accuracy_residual(model: Regressor, explanations: Sequence[ShapExplanation], X: ArrayLike) -> float:
    """Largest |base_value + sum(phi) - f(x)| over the explained rows.

    Raises:
        ModelError: If the explanation count differs from the row count.

    """
    predictions = np.atleast_1d(model.predict(np.atleast_2d(np.asarray(X, dtype=np.float64))))
    if len(explanations) != predictions.shape[0]:
        raise ModelError(ERROR_LENGTH_MISMATCH.format(left=len(explanations), right=predictions.shape[0]))
    if not explanations:
        return 0.0
    totals = np.array([e.total for e in explanations])
    return float(np.max(np.abs(totals - predictions)))


def oracle_difference(model: Regressor, X: ArrayLike) -> float:
    """Largest absolute difference between TreeSHAP and the brute-force oracle."""
    _, fast = tree_shap_values(model, X)
    _, exact = brute_force_shap_values(model, X)
    return float(np.max(np.abs(fast - exact))) if fast.size else 0.0


@dataclass(frozen=True)
class ShapSummary:
    """Attributions of many rows with the feature values they explain.

    Attributes:
        features: Feature names.
        phi: Attributions (rows, features).
        normalized_values: Min-max scaled features (rows, features).
        gate_counts: Raw gate counts (rows, features).

    """

    features: tuple[str, ...]
    phi: FloatArray
    normalized_values: FloatArray
    gate_counts: FloatArray

    @property
    def mean_abs_phi(self) -> FloatArray:
        return np.mean(np.abs(self.phi), axis=0)

    @property
    def mean_phi(self) -> FloatArray:
        return np.mean(self.phi, axis=0)

    def importance_rows(self) -> list[tuple[str, float, float]]:
        """(feature, mean |phi|, mean phi), most important first."""
        order = sorted(range(len(self.features)), key=lambda j: -self.mean_abs_phi[j])
        return [(self.features[j], float(self.mean_abs_phi[j]), float(self.mean_phi[j])) for j in order]

    def beeswarm_rows(self) -> list[tuple[str, float, float]]:
        """(feature, normalized value, phi) for every row and feature."""
        return [
            (name, float(self.normalized_values[i, j]), float(self.phi[i, j]))
            for j, name in enumerate(self.features)
            for i in range(self.phi.shape[0])
        ]

    def dependence_rows(self, feature: str) -> list[tuple[float, float]]:
        """(gate count, phi) pairs of one feature."""
        j = self.features.index(feature)
        return [(float(count), float(value)) for count, value in zip(self.gate_counts[:, j], self.phi[:, j], strict=True)]


def shap_summary(
    explanations: Sequence[ShapExplanation],
    feature_values: ArrayLike,
    gate_counts: ArrayLike | None = None,
) -> ShapSummary:
    """Collect explanations with their normalized values (and raw counts).

    Raises:
        ModelError: With no explanations or mismatched row counts.

    """
    if not explanations:
        raise ModelError(ERROR_NO_EXPLANATIONS)
    phi = np.vstack([e.phi for e in explanations])
    values = np.asarray(feature_values, dtype=np.float64).reshape(phi.shape[0], -1)
    counts = values if gate_counts is None else np.asarray(gate_counts, dtype=np.float64).reshape(phi.shape[0], -1)
    if values.shape != phi.shape or counts.shape != phi.shape:
        raise ModelError(ERROR_LENGTH_MISMATCH.format(left=phi.shape, right=values.shape))
    return ShapSummary(explanations[0].features, phi, values, counts)


@dataclass(frozen=True)
class SaturationRow:
    """Quartile means of one feature's attributions ordered by gate count."""

    feature: str
    quartile_means: tuple[float, float, float, float]

    @property
    def flattening(self) -> bool:
        q1, q2, q3, q4 = self.quartile_means
        return abs(q4 - q3) < abs(q2 - q1)


def saturation_diagnostic(summary: ShapSummary, features: Sequence[str] = ROTATION_FEATURES) -> list[SaturationRow]:
    """Check whether attributions level off at high gate counts.

    Rows are ordered by gate count (stable) and cut into 4 near-equal groups.

    Raises:
        InsufficientDataError: With fewer than 4 rows.

    """
    n_rows = summary.phi.shape[0]
    if n_rows < 4:
        raise InsufficientDataError(ERROR_QUARTILES.format(count=n_rows))
    rows = []
    for name in features:
        j = summary.features.index(name)
        order = np.argsort(summary.gate_counts[:, j], kind="stable")
        means = tuple(float(np.mean(summary.phi[part, j])) for part in np.array_split(order, 4))
        rows.append(SaturationRow(name, means))
    return rows


__all__ = [
    "SaturationRow",
    "ShapExplanation",
    "ShapSummary",
    "brute_force_shap",
    "brute_force_shap_values",
    "explain_all",
    "local_accuracy_residual",
    "oracle_difference",
    "saturation_diagnostic",
    "shap_summary",
    "tree_shap",
    "tree_shap_values",
]
