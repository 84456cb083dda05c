"""Unit tests for the plot-ready report tables."""

import numpy as np
import pytest

from pqc_expressibility.artifacts import read_table
from pqc_expressibility.constants import FEATURE_NAMES, PREDICTION_COLUMNS
from pqc_expressibility.dataset import ExpressibilityHistogram, correlation_from_counts
from pqc_expressibility.errors import DatasetError, MissingInputError
from pqc_expressibility.explain import SaturationRow, ShapExplanation, shap_summary
from pqc_expressibility.expressibility import ConvergenceRow
from pqc_expressibility.report import (
    read_shap_values,
    write_convergence,
    write_correlation,
    write_histogram,
    write_predictions,
    write_saturation,
    write_shap_exports,
)


def _summary(n_rows=5):
    rng = np.random.default_rng(3)
    phi = rng.normal(size=(n_rows, 6))
    counts = rng.integers(0, 20, size=(n_rows, 6)).astype(float)
    explanations = [ShapExplanation(1.5, phi[i], i) for i in range(n_rows)]
    return explanations, shap_summary(explanations, counts / 20.0, counts)


class TestAnalysisTables:
    """Test correlation, histogram and convergence tables."""

    def test_correlation_writes_na(self, tmp_path):
        counts = np.array([[1, 0, 2], [2, 0, 4], [3, 0, 7]], dtype=float)
        path = write_correlation(tmp_path / "c.csv", correlation_from_counts(counts, names=("a", "b", "c")), {"seed": 1})
        table = read_table(path, expected_columns=("gate", "a", "b", "c"))
        assert table.rows[0][:3] == ["a", "1.0", "NA"]
        assert table.rows[1] == ["b", "NA", "1.0", "NA"]

    def test_histogram_pads_shorter_variants(self, tmp_path):
        histogram = ExpressibilityHistogram(0.5, {"layers_only": np.array([3, 1, 2]), "param_cap": np.array([2])})
        table = read_table(write_histogram(tmp_path / "h.csv", histogram))
        assert table.rows == [["0.0", "0.5", "3", "2"], ["0.5", "1.0", "1", "0"], ["1.0", "1.5", "2", "0"]]

    def test_convergence(self, tmp_path):
        rows = [ConvergenceRow(100, 0.5, 0.1), ConvergenceRow(200, 0.25, 0.05)]
        table = read_table(write_convergence(tmp_path / "v.csv", rows), expected_columns=("samples", "kl_mean", "kl_std"))
        assert table.rows == [["100", "0.5", "0.1"], ["200", "0.25", "0.05"]]


class TestModelTables:
    """Test prediction and saturation tables."""

    def test_predictions_leave_missing_models_empty(self, tmp_path):
        path = write_predictions(tmp_path / "p.csv", [(1, 2, 3)], [0.5], {"gbt": [0.25]})
        table = read_table(path, expected_columns=PREDICTION_COLUMNS)
        assert table.rows == [["1", "2", "3", "0.5", "0.25", ""]]

    def test_saturation(self, tmp_path):
        rows = [SaturationRow("rx", (-1.5, 1.25, 1.85, 2.05))]
        table = read_table(write_saturation(tmp_path / "s.csv", rows))
        assert table.rows == [["rx", "-1.5", "1.25", "1.85", "2.05", "1"]]


class TestShapTables:
    """Test SHAP exports and reading them back."""

    def test_exports_written(self, tmp_path):
        explanations, summary = _summary()
        keys = [(1, 2, k) for k in range(1, 6)]
        exports = write_shap_exports(tmp_path, keys, explanations, summary, {"seed": 2024})
        assert exports.values.is_file()
        assert len(read_table(exports.beeswarm).rows) == 30
        assert [p.name for p in exports.dependence] == [f"dependence_{name}.csv" for name in FEATURE_NAMES]
        importance = read_table(exports.importance).rows
        assert [float(row[1]) for row in importance] == sorted((float(row[1]) for row in importance), reverse=True)

    def test_values_read_back(self, tmp_path):
        explanations, summary = _summary()
        keys = [(4, 3, k) for k in range(1, 6)]
        exports = write_shap_exports(tmp_path, keys, explanations, summary)
        read_keys, restored = read_shap_values(exports.values)
        assert read_keys == keys
        assert np.array_equal(restored.phi, summary.phi)
        assert np.array_equal(restored.gate_counts, summary.gate_counts)
        assert np.array_equal(restored.normalized_values, summary.normalized_values)

    def test_corrupt_values(self, tmp_path):
        explanations, summary = _summary()
        exports = write_shap_exports(tmp_path, [(1, 2, k) for k in range(1, 6)], explanations, summary)
        text = exports.values.read_text(encoding="utf-8").replace("\n1,2,3,", "\n1,x,3,", 1)
        exports.values.write_text(text, encoding="utf-8")
        with pytest.raises(DatasetError):
            read_shap_values(exports.values)

    def test_missing_values(self, tmp_path):
        with pytest.raises(MissingInputError):
            read_shap_values(tmp_path / "shap_values.csv")
