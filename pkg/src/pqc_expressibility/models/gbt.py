"""Least-squares gradient-boosted regression trees.

Each round fits one tree to the current residuals. Trees grow leaf-wise: the
leaf with the largest split gain is expanded next (ties go to the leaf created
first) until `max_leaves` is reached or no split improves the squared error.
Split search is exact over sorted feature values; a row goes left when
``x[feature] <= threshold``.

Trees are stored as flat node arrays (children, feature, threshold, value,
cover) so prediction and TreeSHAP can walk them without recursion into Python
objects.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from ..constants import (
    DEFAULT_GBT_LEARNING_RATE,
    DEFAULT_GBT_MAX_LEAVES,
    DEFAULT_GBT_MIN_SAMPLES_LEAF,
    DEFAULT_GBT_ROUNDS,
    DEFAULT_GBT_SUBSAMPLE,
    MODEL_GBT,
    SPLIT_GAIN_TOLERANCE,
)
from ..dataset import FeatureScaling
from ..errors import InsufficientDataError, ModelError
from ..messages import ERROR_HYPERPARAMS, ERROR_INSUFFICIENT_DATA, ERROR_MODEL_FILE, LOG_GBT_ROUND
from ..utils import safe_log, setup_logger
from .base import FloatArray, Regressor, validate_training_data

logger = setup_logger(__name__)

LEAF = -1


@dataclass(frozen=True)
class GBTHyperparams:
    """Boosting hyperparameters.

    Attributes:
        n_rounds: Number of trees.
        learning_rate: Shrinkage applied to each tree.
        max_leaves: Leaf budget per tree.
        min_samples_leaf: Minimum training rows in every leaf.
        subsample: Fraction of rows drawn (without replacement) per round;
            1.0 disables subsampling.

    """

    n_rounds: int = DEFAULT_GBT_ROUNDS
    learning_rate: float = DEFAULT_GBT_LEARNING_RATE
    max_leaves: int = DEFAULT_GBT_MAX_LEAVES
    min_samples_leaf: int = DEFAULT_GBT_MIN_SAMPLES_LEAF
    subsample: float = DEFAULT_GBT_SUBSAMPLE

    def __post_init__(self) -> None:
        checks = {
            "n_rounds": self.n_rounds >= 0,
            "learning_rate": self.learning_rate > 0,
            "max_leaves": self.max_leaves >= 1,
            "min_samples_leaf": self.min_samples_leaf >= 1,
            "subsample": 0.0 < self.subsample <= 1.0,
        }
        for name, ok in checks.items():
            if not ok:
                raise ModelError(ERROR_HYPERPARAMS.format(name=name, value=getattr(self, name)))


@dataclass
class TreeNode:
    """Node used while growing; leaves have `feature == LEAF`."""

    rows: FloatArray
    value: float
    cover: int
    feature: int = LEAF
    threshold: float = 0.0
    left: int = LEAF
    right: int = LEAF


@dataclass(frozen=True)
class Tree:
    """Flat array form of one regression tree (node 0 is the root)."""

    children_left: np.ndarray
    children_right: np.ndarray
    features: np.ndarray
    thresholds: np.ndarray
    values: np.ndarray
    covers: np.ndarray

    @classmethod
    def from_nodes(cls, nodes: Sequence[TreeNode]) -> Tree:
        return cls(
            children_left=np.array([n.left for n in nodes], dtype=np.int64),
            children_right=np.array([n.right for n in nodes], dtype=np.int64),
            features=np.array([n.feature for n in nodes], dtype=np.int64),
            thresholds=np.array([n.threshold for n in nodes], dtype=np.float64),
            values=np.array([n.value for n in nodes], dtype=np.float64),
            covers=np.array([n.cover for n in nodes], dtype=np.float64),
        )

    @property
    def n_nodes(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.children_left == LEAF))

    def is_leaf(self, node: int) -> bool:
        return bool(self.children_left[node] == LEAF)

    def expected_value(self) -> float:
        """Cover-weighted mean of the leaf values."""
        leaves = self.children_left == LEAF
        return float(np.sum(self.values[leaves] * self.covers[leaves]) / self.covers[0])

    def predict(self, X: FloatArray) -> FloatArray:
        """Leaf value reached by every row of X."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        active = self.children_left[node] != LEAF
        while np.any(active):
            current = node[active]
            goes_left = X[rows[active], self.features[current]] <= self.thresholds[current]
            node[active] = np.where(goes_left, self.children_left[current], self.children_right[current])
            active = self.children_left[node] != LEAF
        return self.values[node]

    def to_dict(self) -> dict[str, list[Any]]:
        return {
            "children_left": self.children_left.tolist(),
            "children_right": self.children_right.tolist(),
            "features": self.features.tolist(),
            "thresholds": self.thresholds.tolist(),
            "values": self.values.tolist(),
            "covers": self.covers.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Tree:
        return cls(
            children_left=np.asarray(data["children_left"], dtype=np.int64),
            children_right=np.asarray(data["children_right"], dtype=np.int64),
            features=np.asarray(data["features"], dtype=np.int64),
            thresholds=np.asarray(data["thresholds"], dtype=np.float64),
            values=np.asarray(data["values"], dtype=np.float64),
            covers=np.asarray(data["covers"], dtype=np.float64),
        )


@dataclass(frozen=True)
class SplitCandidate:
    gain: float
    feature: int
    threshold: float
    left_rows: np.ndarray
    right_rows: np.ndarray


def _best_split(X: FloatArray, residuals: FloatArray, rows: np.ndarray, min_samples_leaf: int) -> SplitCandidate | None:
    """Exact greedy search; ties keep the lowest feature, then the lowest threshold."""
    n = rows.shape[0]
    if n < 2 * min_samples_leaf:
        return None
    r = residuals[rows]
    total = float(np.sum(r))
    parent_score = total * total / n
    sizes = np.arange(1, n)
    allowed = (sizes >= min_samples_leaf) & (n - sizes >= min_samples_leaf)
    best: SplitCandidate | None = None
    for feature in range(X.shape[1]):
        order = np.argsort(X[rows, feature], kind="stable")
        xs = X[rows[order], feature]
        left_sums = np.cumsum(r[order])[:-1]
        valid = allowed & (xs[:-1] < xs[1:])
        if not np.any(valid):
            continue
        gains = left_sums**2 / sizes + (total - left_sums) ** 2 / (n - sizes) - parent_score
        gains = np.where(valid, gains, -np.inf)
        top = float(np.max(gains))
        k = int(np.argmax(gains >= top - SPLIT_GAIN_TOLERANCE))
        gain = float(gains[k])
        if gain <= SPLIT_GAIN_TOLERANCE:
            continue
        if best is not None and gain <= best.gain + SPLIT_GAIN_TOLERANCE:
            continue
        low, high = float(xs[k]), float(xs[k + 1])
        threshold = 0.5 * (low + high)
        if not low <= threshold < high:
            threshold = low
        best = SplitCandidate(gain, feature, threshold, np.sort(rows[order[: k + 1]]), np.sort(rows[order[k + 1 :]]))
    return best


def grow_tree(X: FloatArray, residuals: FloatArray, rows: np.ndarray, max_leaves: int, min_samples_leaf: int) -> Tree:
    """Fit one least-squares tree on `rows` of X, leaf-wise.

    Args:
        X: Feature matrix.
        residuals: Targets of this round.
        rows: Training row indices (sorted).
        max_leaves: Leaf budget.
        min_samples_leaf: Minimum rows per leaf.

    Returns:
        The fitted tree; leaf values are mean residuals, covers are row counts.

    """
    nodes = [TreeNode(rows=rows, value=float(np.mean(residuals[rows])), cover=int(rows.shape[0]))]
    heap: list[tuple[float, int, SplitCandidate]] = []

    def push(node_id: int) -> None:
        candidate = _best_split(X, residuals, nodes[node_id].rows, min_samples_leaf)
        if candidate is not None:
            heapq.heappush(heap, (-candidate.gain, node_id, candidate))

    push(0)
    n_leaves = 1
    while heap and n_leaves < max_leaves:
        _, node_id, candidate = heapq.heappop(heap)
        parent = nodes[node_id]
        for side_rows in (candidate.left_rows, candidate.right_rows):
            nodes.append(TreeNode(rows=side_rows, value=float(np.mean(residuals[side_rows])), cover=int(side_rows.shape[0])))
        parent.feature = candidate.feature
        parent.threshold = candidate.threshold
        parent.left, parent.right = len(nodes) - 2, len(nodes) - 1
        n_leaves += 1
        push(parent.left)
        push(parent.right)
    return Tree.from_nodes(nodes)


@dataclass(frozen=True)
class GBTModel(Regressor):
    """Trained boosted ensemble.

    Prediction is ``base_score + learning_rate * sum(tree(x))``.
    """

    kind: ClassVar[str] = MODEL_GBT

    base_score: float
    learning_rate: float
    trees: tuple[Tree, ...]
    hyperparams: GBTHyperparams
    n_features: int
    scaling: FeatureScaling | None = None
    loss_history: tuple[float, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)

    def predict_batch(self, X: FloatArray) -> FloatArray:
        total = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            total += tree.predict(X)
        return self.base_score + self.learning_rate * total

    def expected_value(self) -> float:
        """Cover-weighted expectation of the ensemble output."""
        return self.base_score + self.learning_rate * sum(tree.expected_value() for tree in self.trees)

    def used_features(self) -> set[int]:
        return {int(f) for tree in self.trees for f in tree.features if f != LEAF}

    def to_dict(self) -> dict[str, Any]:
        return {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "n_features": self.n_features,
            "hyperparams": asdict(self.hyperparams),
            "scaling": None if self.scaling is None else self.scaling.to_dict(),
            "loss_history": list(self.loss_history),
            "metadata": dict(self.metadata),
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> GBTModel:
        try:
            trees = tuple(Tree.from_dict(raw) for raw in data["trees"])
            for index, tree in enumerate(trees):
                _check_tree(tree, index)
            return cls(
                base_score=float(data["base_score"]),
                learning_rate=float(data["learning_rate"]),
                trees=trees,
                hyperparams=GBTHyperparams(**data["hyperparams"]),
                n_features=int(data["n_features"]),
                scaling=None if data.get("scaling") is None else FeatureScaling.from_dict(data["scaling"]),
                loss_history=tuple(float(v) for v in data.get("loss_history", ())),
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ModelError):
                raise
            raise ModelError(ERROR_MODEL_FILE.format(path="<gbt>", detail=e)) from e


def _check_tree(tree: Tree, index: int) -> None:
    n = tree.n_nodes
    arrays = (tree.children_right, tree.features, tree.thresholds, tree.values, tree.covers)
    if n == 0 or any(a.shape[0] != n for a in arrays):
        raise ModelError(ERROR_MODEL_FILE.format(path="<gbt>", detail=f"tree {index} has inconsistent arrays"))
    for node in range(n):
        left, right = int(tree.children_left[node]), int(tree.children_right[node])
        if (left == LEAF) != (right == LEAF) or not (left == LEAF or 0 < left < n and 0 < right < n):
            raise ModelError(ERROR_MODEL_FILE.format(path="<gbt>", detail=f"tree {index} node {node} has bad children"))


def fit_gbt(
    X: ArrayLike,
    y: ArrayLike,
    hyperparams: GBTHyperparams | None = None,
    seed: int = 0,
    scaling: FeatureScaling | None = None,
) -> GBTModel:
    """Fit a boosted ensemble by stagewise least squares.

    Args:
        X: Feature matrix (rows, features).
        y: Targets.
        hyperparams: Boosting settings (defaults: 200 rounds, lr 0.1, 31 leaves,
            5 rows per leaf, no subsampling).
        seed: Seed of the row subsampling stream.
        scaling: Normalization metadata stored with the model.

    Returns:
        The trained model; `loss_history[k]` is the training MSE after k rounds.

    Raises:
        ModelError: On bad shapes or non-finite values.
        InsufficientDataError: With fewer rows than `min_samples_leaf`.

    """
    params = hyperparams or GBTHyperparams()
    features, targets = validate_training_data(X, y)
    n = features.shape[0]
    if n == 0 or n < params.min_samples_leaf:
        detail = f"{n} rows, min_samples_leaf={params.min_samples_leaf}"
        raise InsufficientDataError(ERROR_INSUFFICIENT_DATA.format(detail=detail))

    rng = np.random.default_rng(seed)
    base = float(np.mean(targets))
    prediction = np.full(n, base)
    history = [float(np.mean((targets - prediction) ** 2))]
    all_rows = np.arange(n)
    sample_size = max(params.min_samples_leaf, int(round(params.subsample * n)))
    trees = []
    for round_index in range(params.n_rounds):
        residuals = targets - prediction
        rows = all_rows if sample_size >= n else np.sort(rng.choice(n, size=sample_size, replace=False))
        tree = grow_tree(features, residuals, rows, params.max_leaves, params.min_samples_leaf)
        trees.append(tree)
        prediction = prediction + params.learning_rate * tree.predict(features)
        history.append(float(np.mean((targets - prediction) ** 2)))
        if logger.isEnabledFor(logging.DEBUG):
            safe_log(logger, logging.DEBUG, LOG_GBT_ROUND, round_index + 1, params.n_rounds, history[-1])

    return GBTModel(
        base_score=base,
        learning_rate=params.learning_rate,
        trees=tuple(trees),
        hyperparams=params,
        n_features=features.shape[1],
        scaling=scaling,
        loss_history=tuple(history),
    )


def predict(model: Regressor, x: ArrayLike) -> FloatArray | float:
    """Predict one feature vector (float) or a matrix (array).

    Raises:
        ModelError: If the feature count does not match the model.

    """
    return model.predict(x)


__all__ = [
    "LEAF",
    "GBTHyperparams",
    "GBTModel",
    "Tree",
    "TreeNode",
    "fit_gbt",
    "grow_tree",
    "predict",
]
