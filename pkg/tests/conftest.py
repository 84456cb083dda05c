"""Test configuration and fixtures."""

import os

import numpy as np
import pytest

from pqc_expressibility.constants import ENV_PREFIX


@pytest.fixture(autouse=True)
def clean_environment():
    """Clean up environment variables and caches before and after each test."""
    from pqc_expressibility.cache import clear_caches
    clear_caches()

    original_env = {key: value for key, value in os.environ.items() if key.startswith(ENV_PREFIX)}
    for key in original_env:
        del os.environ[key]
    os.environ["PQC_EXPR_THREADS"] = "1"

    yield

    clear_caches()
    for key in list(os.environ.keys()):
        if key.startswith(ENV_PREFIX):
            del os.environ[key]
    os.environ.update(original_env)


@pytest.fixture
def step_data():
    """Two clusters on feature 0 with a clean step in the target."""
    rng = np.random.default_rng(7)
    X = rng.uniform(0.0, 1.0, size=(80, 3))
    y = np.where(X[:, 0] <= 0.5, 1.0, 3.0)
    return X, y


@pytest.fixture
def smooth_data():
    """Six features with an interaction, the shape of the gate-count table."""
    rng = np.random.default_rng(11)
    X = rng.uniform(0.0, 1.0, size=(120, 6))
    y = 2.0 * X[:, 0] - X[:, 1] + 0.5 * X[:, 2] * X[:, 3] + np.sin(3.0 * X[:, 4])
    return X, y


def _synthetic_kl(n_qubits, n_params, cnot):
    return 4.0 / (1.0 + 0.15 * n_params) + 0.02 * n_qubits + (0.3 if cnot == 0 else 0.0)


@pytest.fixture
def synthetic_records():
    """Gate-count records of a small grid with a smooth made-up KL target."""
    from pqc_expressibility.catalog import default_catalog
    from pqc_expressibility.constants import ELEMENTARY_COUNT_COLUMNS
    from pqc_expressibility.dataset import ExpressibilityRecord, GridFilter, grid_gate_counts

    rows = grid_gate_counts(default_catalog(), GridFilter(qubits=(2, 4), layers=(1, 3)))
    return [
        ExpressibilityRecord(
            row.entry.template_id,
            row.entry.n_qubits,
            row.entry.n_layers,
            *row.counts.select(ELEMENTARY_COUNT_COLUMNS),
            row.n_params,
            _synthetic_kl(row.entry.n_qubits, row.n_params, row.counts.cnot),
            0.01,
            1000,
            75,
            10,
            2024,
        )
        for row in rows
    ]


@pytest.fixture
def synthetic_dataset(tmp_path, synthetic_records):
    """Dataset CSV of `synthetic_records`."""
    from pqc_expressibility.artifacts import write_table
    from pqc_expressibility.constants import DATASET_COLUMNS

    return write_table(tmp_path / "dataset.csv", DATASET_COLUMNS, [r.to_row() for r in synthetic_records], {"seed": 2024})
