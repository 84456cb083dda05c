"""End-to-end runs of the dataset -> train -> explain -> report pipeline."""

import os

import numpy as np
import pytest

from pqc_expressibility.artifacts import read_table
from pqc_expressibility.catalog import default_catalog
from pqc_expressibility.cli import main
from pqc_expressibility.config import get_env_bool
from pqc_expressibility.dataset import GridFilter, feature_matrix, generate, load_dataset
from pqc_expressibility.explain import explain_all, local_accuracy_residual
from pqc_expressibility.expressibility import SamplingConfig
from pqc_expressibility.models import GBTHyperparams, fit_gbt, load_model, r2

DESK_SCALE = get_env_bool("PQC_EXPR_RUN_DESK_SCALE", False)
FULL_SCALE = get_env_bool("PQC_EXPR_RUN_FULL_SCALE", False)

TINY_GRID = ["--qubits", "2..3", "--layers", "1..2", "--samples", "60", "--bins", "15", "--reps", "2"]


@pytest.mark.integration
class TestPipelineFlow:
    """Run every command on a small grid."""

    def test_full_pipeline(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["dataset", *TINY_GRID, "--out", str(out)]) == 0
        records = load_dataset(out / "dataset.csv")
        assert len(records) == 19 * 2 + 19 * 2
        assert all(r.kl_mean >= 0.0 for r in records)

        assert main(["train", "--out", str(out), "--rounds", "30", "--max-leaves", "6", "--min-samples-leaf", "2"]) == 0
        bundle = load_model(out / "model_gbt.json")
        assert len(bundle.test_keys) == 7

        assert main(["explain", "--out", str(out), "--check-local-accuracy", "--oracle-check", "8"]) == 0
        assert len(read_table(out / "shap_values.csv").rows) == len(records)

        assert main(["report", "--out", str(out), "--shap-dir", str(out)]) == 0
        for name in ("correlation.csv", "expr_histogram.csv", "importance.csv", "saturation.csv"):
            assert (out / name).is_file()
        assert "Pearson(ry, frz)" in capsys.readouterr().out

    def test_interrupted_dataset_resumes_to_identical_file(self, tmp_path):
        sampling = SamplingConfig(n_pairs=30, n_bins=10, n_repetitions=2, master_seed=5)
        grid_filter = GridFilter(qubits=(2, 2), layers=(1, 2))
        catalog = default_catalog()

        def stop_after_ten(done, _total, _record):
            if done == 10:
                raise KeyboardInterrupt

        path = tmp_path / "dataset.csv"
        with pytest.raises(KeyboardInterrupt):
            generate(catalog, grid_filter, sampling, path, threads=2, on_record=stop_after_ten)
        summary = generate(catalog, grid_filter, sampling, path, resume=True, threads=3)
        assert summary.skipped == 10

        reference = tmp_path / "reference.csv"
        generate(catalog, grid_filter, sampling, reference)
        assert path.read_bytes() == reference.read_bytes()


def _metrics(out):
    lines = (out / "metrics.txt").read_text(encoding="utf-8").splitlines()
    return {key: float(value) for key, value in (line.split("=", 1) for line in lines if not line.startswith("#"))}


def _run_pipeline(out, grid):
    assert main(["dataset", *grid, "--out", str(out)]) == 0
    assert main(["train", "--out", str(out)]) == 0
    assert main(["explain", "--out", str(out), "--subset", "test", "--check-local-accuracy"]) == 0
    return _metrics(out)


@pytest.mark.integration
class TestModelQuality:
    """Small grid with enough sampling for the models to separate."""

    def test_gbt_learns_reduced_grid(self, tmp_path):
        out = tmp_path / "reduced"
        metrics = _run_pipeline(
            out, ["--qubits", "2..4", "--layers", "1..5", "--samples", "500", "--bins", "30", "--reps", "2"]
        )
        assert metrics["n_train"] + metrics["n_test"] == 19 * 3 * 5
        assert metrics["gbt_r2_test"] > 0.3
        assert metrics["gbt_r2_test"] >= metrics["lasso_r2_test"] - 0.05

        rows = read_table(out / "importance.csv").rows
        assert len(rows) == 6
        assert "cnot" in [row[0] for row in rows[:3]]


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.skipif(not DESK_SCALE, reason="set PQC_EXPR_RUN_DESK_SCALE=1 to run desk-scale checks")
class TestDeskScale:
    """Larger runs that take minutes rather than seconds."""

    def test_model_learns_expressibility(self, tmp_path):
        sampling = SamplingConfig(n_pairs=2000, n_bins=75, n_repetitions=3, master_seed=2024)
        path = tmp_path / "dataset.csv"
        generate(default_catalog(), GridFilter(qubits=(2, 5), layers=(1, 4)), sampling, path, threads=os.cpu_count() or 1)
        records = load_dataset(path)
        X, y, scaling = feature_matrix(records)
        rng = np.random.default_rng(0)
        test = rng.permutation(len(records))[: len(records) // 10]
        train = np.setdiff1d(np.arange(len(records)), test)

        model = fit_gbt(X[train], y[train], GBTHyperparams(), scaling=scaling)
        assert r2(model.predict(X[test]), y[test]) > 0.5
        explanations = explain_all(model, X[test], threads=2)
        assert local_accuracy_residual(model, explanations, X[test]) <= 1e-9

    def test_gate_count_attributions(self, tmp_path):
        out = tmp_path / "desk"
        metrics = _run_pipeline(out, ["--qubits", "2..8", "--layers", "1..5", "--samples", "4000", "--reps", "3"])
        assert len(load_dataset(out / "dataset.csv")) == 665
        assert metrics["gbt_r2_test"] >= 0.6
        assert metrics["gbt_r2_test"] > metrics["lasso_r2_test"]

        rows = read_table(out / "importance.csv").rows
        assert rows[0][0] == "cnot"
        mean_phi = {row[0]: float(row[2]) for row in rows}
        assert mean_phi["cnot"] > 0.0
        assert min(("rx", "ry", "rz"), key=mean_phi.__getitem__) == "rx"
        assert mean_phi["rx"] < 0.0


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.skipif(not FULL_SCALE, reason="set PQC_EXPR_RUN_FULL_SCALE=1 to run the full grid")
class TestFullScale:
    """Full grid with default sampling; expect hours on a workstation."""

    def test_holdout_r2(self, tmp_path):
        metrics = _run_pipeline(tmp_path / "full", ["--qubits", "2..18", "--layers", "1..5"])
        assert metrics["n_train"] + metrics["n_test"] == 1615
        assert metrics["gbt_r2_test"] == pytest.approx(0.86, abs=0.05)
        assert metrics["lasso_r2_test"] == pytest.approx(0.21, abs=0.10)
