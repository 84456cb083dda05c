"""Unit tests for CLI functionality."""

import json
import math
from unittest.mock import patch

import pytest

from pqc_expressibility.artifacts import read_table, write_table
from pqc_expressibility.catalog import GateCountVector
from pqc_expressibility.cli import build_config, build_parser, main
from pqc_expressibility.constants import DATASET_COLUMNS
from pqc_expressibility.dataset import load_dataset

BEFORE_ROW = GateCountVector(rx=68, ry=44, rz=76, frz=0, h=4, cnot=14, cz=10, crx=33, cry=0, crz=33)
AFTER_ROW = GateCountVector(rx=68, ry=110, rz=142, frz=66, h=4, cnot=146, cz=10, crx=0, cry=0, crz=0)


@pytest.fixture
def trained(tmp_path, synthetic_dataset):
    """Output directory holding models trained on the synthetic dataset."""
    out = tmp_path / "out"
    code = main(
        [
            "train",
            "--dataset", str(synthetic_dataset),
            "--out", str(out),
            "--rounds", "20",
            "--max-leaves", "4",
            "--lasso-lambda", "0.001",
        ],
    )
    assert code == 0
    return out


class TestParser:
    """Test argument parsing and configuration assembly."""

    def test_no_command_prints_usage(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().out

    def test_flags_override_environment(self, monkeypatch):
        monkeypatch.setenv("PQC_EXPR_SAMPLES", "300")
        monkeypatch.setenv("PQC_EXPR_SEED", "9")
        args = build_parser().parse_args(["expr", "--reference", "idle", "--samples", "50"])
        config = build_config(args)
        assert config.samples == 50
        assert config.seed == 9

    def test_invalid_flag_value(self, capsys):
        assert main(["expr", "--reference", "idle", "--bins", "1"]) == 2
        assert "❌" in capsys.readouterr().out


class TestCatalogCommand:
    """Test the catalog and decompose commands."""

    def test_list(self, capsys):
        assert main(["catalog", "--list"]) == 0
        lines = capsys.readouterr().out.rstrip().splitlines()
        assert len(lines) == 19
        assert lines[0].startswith(" 1: ")

    def test_aggregate_counts(self, capsys):
        assert main(["catalog", "--aggregate"]) == 0
        out = capsys.readouterr().out
        assert f"n=4 L=1 Before: {BEFORE_ROW.describe()}" in out
        assert f"n=4 L=1 After: {AFTER_ROW.describe()}" in out

    def test_single_template(self, capsys):
        assert main(["catalog", "--template", "2", "--qubits", "3"]) == 0
        out = capsys.readouterr().out
        assert "id=2 n=3 L=1 Before" in out
        assert "id=2 n=3 L=1 After" in out

    def test_unknown_template(self):
        assert main(["catalog", "--template", "42"]) == 2

    def test_range_rejected_for_single_instance(self):
        assert main(["catalog", "--aggregate", "--qubits", "2..4"]) == 2

    def test_missing_catalog_file(self, tmp_path):
        assert main(["catalog", "--list", "--catalog", str(tmp_path / "none.json")]) == 3

    def test_decompose(self, capsys):
        assert main(["decompose", "--template", "3", "--qubits", "2"]) == 0
        out = capsys.readouterr().out
        assert "Before" in out
        assert "After" in out


class TestExprCommand:
    """Test single-instance expressibility."""

    def test_idle_reference_hits_ln_bins(self, capsys):
        assert main(["expr", "--reference", "idle", "--samples", "100", "--reps", "2", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kl_mean"] == pytest.approx(math.log(75))
        assert payload["kl_std"] == pytest.approx(0.0, abs=1e-12)
        assert payload["bins"] == 75

    def test_template_instance(self, capsys):
        code = main(["expr", "--template", "1", "--qubits", "2", "--samples", "60", "--bins", "10", "--reps", "2", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kl_mean"] >= 0.0
        assert len(payload["per_repetition"]) == 2

    def test_same_seed_same_output(self, capsys):
        argv = ["expr", "--template", "2", "--qubits", "2", "--samples", "40", "--bins", "10", "--reps", "2", "--json"]
        main(argv)
        first = capsys.readouterr().out
        main([*argv, "--threads", "3"])
        assert capsys.readouterr().out == first

    @pytest.mark.parametrize("argv", [["expr"], ["expr", "--reference", "rx", "--template", "1"]])
    def test_template_or_reference_required(self, argv):
        assert main(argv) == 2

    def test_convergence_table(self, tmp_path):
        code = main(["expr", "--reference", "rx", "--convergence", "50,100", "--reps", "2", "--bins", "10", "--out", str(tmp_path)])
        assert code == 0
        table = read_table(tmp_path / "convergence.csv", expected_columns=("samples", "kl_mean", "kl_std"))
        assert [row[0] for row in table.rows] == ["50", "100"]

    def test_bad_convergence_list(self):
        assert main(["expr", "--reference", "rx", "--convergence", "50,lots"]) == 2


class TestDatasetCommand:
    """Test dataset generation from the CLI."""

    def test_tiny_grid(self, tmp_path, capsys):
        path = tmp_path / "tiny.csv"
        code = main(["dataset", "--qubits", "2", "--layers", "1", "--samples", "20", "--bins", "10", "--reps", "1", "--out", str(path)])
        assert code == 0
        records = load_dataset(path)
        assert len(records) == 19
        assert {r.samples for r in records} == {20}
        assert "19 computed, 0 resumed, 19 total" in capsys.readouterr().out

    def test_resume_skips_existing_rows(self, tmp_path):
        argv = ["dataset", "--qubits", "2", "--layers", "1", "--samples", "20", "--bins", "10", "--reps", "1", "--out", str(tmp_path)]
        assert main(argv) == 0
        first = (tmp_path / "dataset.csv").read_bytes()
        assert main([*argv, "--resume"]) == 0
        assert (tmp_path / "dataset.csv").read_bytes() == first

    def test_summary_tracked(self, tmp_path):
        argv = ["dataset", "--qubits", "2", "--layers", "1", "--samples", "20", "--bins", "10", "--reps", "1", "--out", str(tmp_path), "--mlflow"]
        with patch("pqc_expressibility.cli.log_run", return_value="run-2") as mock_log:
            assert main(argv) == 0
        _, metrics, artifacts = mock_log.call_args.args
        assert metrics == {"rows_total": 19, "rows_computed": 19, "rows_skipped": 0}
        assert artifacts == [tmp_path / "dataset.csv"]

    def test_interrupt_returns_130(self, tmp_path):
        with patch("pqc_expressibility.cli.generate", side_effect=KeyboardInterrupt):
            assert main(["dataset", "--qubits", "2", "--layers", "1", "--out", str(tmp_path)]) == 130


class TestTrainCommand:
    """Test model training from the CLI."""

    def test_outputs(self, trained):
        for name in ("model_gbt.json", "model_lasso.json", "holdout_predictions.csv", "metrics.txt"):
            assert (trained / name).is_file()
        metrics = dict(
            line.split("=", 1) for line in (trained / "metrics.txt").read_text(encoding="utf-8").splitlines() if not line.startswith("#")
        )
        assert metrics["n_train"] == "154"
        assert metrics["n_test"] == "17"
        assert float(metrics["gbt_r2_train"]) > 0.3
        assert float(metrics["lasso_lambda"]) == 0.001
        assert len(read_table(trained / "holdout_predictions.csv").rows) == 17

    def test_single_model(self, tmp_path, synthetic_dataset):
        out = tmp_path / "lasso_only"
        assert main(["train", "--dataset", str(synthetic_dataset), "--out", str(out), "--model", "lasso", "--lasso-lambda", "0.01"]) == 0
        assert (out / "model_lasso.json").is_file()
        assert not (out / "model_gbt.json").exists()

    def test_missing_dataset(self, tmp_path):
        assert main(["train", "--dataset", str(tmp_path / "absent.csv"), "--out", str(tmp_path)]) == 3

    def test_too_few_rows(self, tmp_path, synthetic_records):
        path = write_table(tmp_path / "small.csv", DATASET_COLUMNS, [r.to_row() for r in synthetic_records[:3]])
        assert main(["train", "--dataset", str(path), "--out", str(tmp_path)]) == 5

    def test_corrupt_dataset(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        assert main(["train", "--dataset", str(path), "--out", str(tmp_path)]) == 4

    def test_mlflow_logging(self, tmp_path, synthetic_dataset, capsys):
        with patch("pqc_expressibility.cli.log_run", return_value="run-1") as mock_log:
            code = main(["train", "--dataset", str(synthetic_dataset), "--out", str(tmp_path), "--model", "lasso", "--mlflow"])
        assert code == 0
        params, metrics, artifacts = mock_log.call_args.args
        assert params["seed"] == 2024
        assert "lasso_r2_test" in metrics
        assert any(str(path).endswith("metrics.txt") for path in artifacts)
        assert "run-1" in capsys.readouterr().out


class TestExplainCommand:
    """Test SHAP exports from the CLI."""

    def test_all_rows(self, trained, synthetic_dataset, capsys):
        code = main(
            [
                "explain",
                "--dataset", str(synthetic_dataset),
                "--out", str(trained),
                "--check-local-accuracy",
                "--oracle-check", "5",
            ],
        )
        assert code == 0
        assert len(read_table(trained / "shap_values.csv").rows) == 171
        assert (trained / "dependence_cnot.csv").is_file()
        out = capsys.readouterr().out
        assert "max_local_accuracy_residual=" in out
        assert (trained / "importance.csv").is_file()

    def test_test_subset(self, trained, synthetic_dataset):
        code = main(["explain", "--dataset", str(synthetic_dataset), "--out", str(trained), "--subset", "test"])
        assert code == 0
        assert len(read_table(trained / "shap_values.csv").rows) == 17

    def test_linear_model_rejected(self, trained, synthetic_dataset):
        code = main(["explain", "--dataset", str(synthetic_dataset), "--out", str(trained), "--model-file", str(trained / "model_lasso.json")])
        assert code == 4

    def test_missing_model(self, tmp_path, synthetic_dataset):
        assert main(["explain", "--dataset", str(synthetic_dataset), "--out", str(tmp_path)]) == 3


class TestReportCommand:
    """Test the report tables."""

    def test_counts_only(self, tmp_path, capsys):
        assert main(["report", "--counts-only", "--qubits", "2..4", "--layers", "1..3", "--out", str(tmp_path)]) == 0
        assert "Pearson(ry, frz)" in capsys.readouterr().out
        table = read_table(tmp_path / "correlation.csv")
        assert [row[0] for row in table.rows] == ["rx", "ry", "rz", "frz", "h", "cnot", "cz"]

    def test_dataset_and_shap(self, trained, synthetic_dataset, capsys):
        assert main(["explain", "--dataset", str(synthetic_dataset), "--out", str(trained)]) == 0
        report_dir = trained / "report"
        code = main(["report", "--dataset", str(synthetic_dataset), "--shap-dir", str(trained), "--out", str(report_dir), "--bin-width", "0.5"])
        assert code == 0
        for name in ("correlation.csv", "expr_histogram.csv", "importance.csv", "saturation.csv"):
            assert (report_dir / name).is_file()
        assert "0-bin count" in capsys.readouterr().out
        assert [row[0] for row in read_table(report_dir / "saturation.csv").rows] == ["rx", "ry", "rz"]

    def test_missing_dataset(self, tmp_path):
        assert main(["report", "--dataset", str(tmp_path / "absent.csv"), "--out", str(tmp_path)]) == 3
