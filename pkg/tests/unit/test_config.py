"""Unit tests for configuration utilities."""

import os

import pytest

from pqc_expressibility.config import (
    RunConfig,
    get_default_threads,
    get_env_bool,
    get_env_float,
    get_env_int,
    get_env_var,
    get_log_level,
    parse_range,
)
from pqc_expressibility.errors import ConfigError


class TestEnvHelpers:
    """Test environment variable helpers."""

    def test_get_env_var_with_default(self):
        assert get_env_var("PQC_EXPR_NONEXISTENT", "fallback") == "fallback"
        assert get_env_var("PQC_EXPR_NONEXISTENT") is None

    def test_get_env_bool(self):
        os.environ["PQC_EXPR_PARAM_CAP"] = "Yes"
        assert get_env_bool("PQC_EXPR_PARAM_CAP") is True
        os.environ["PQC_EXPR_PARAM_CAP"] = "off"
        assert get_env_bool("PQC_EXPR_PARAM_CAP", True) is False

    def test_get_env_int_invalid_falls_back(self):
        os.environ["PQC_EXPR_SAMPLES"] = "many"
        assert get_env_int("PQC_EXPR_SAMPLES", 20_000) == 20_000
        os.environ["PQC_EXPR_SAMPLES"] = " 500 "
        assert get_env_int("PQC_EXPR_SAMPLES", 20_000) == 500

    def test_get_env_float(self):
        os.environ["PQC_EXPR_TEST_FRACTION"] = "0.25"
        assert get_env_float("PQC_EXPR_TEST_FRACTION", 0.1) == 0.25
        os.environ["PQC_EXPR_TEST_FRACTION"] = "a quarter"
        assert get_env_float("PQC_EXPR_TEST_FRACTION", 0.1) == 0.1

    def test_log_level_uppercased(self):
        os.environ["PQC_EXPR_LOG_LEVEL"] = "warning"
        assert get_log_level() == "WARNING"

    def test_unknown_log_level_falls_back(self):
        os.environ["PQC_EXPR_LOG_LEVEL"] = "verbose"
        assert get_log_level() == "INFO"

    def test_blank_variable_is_unset(self):
        os.environ["PQC_EXPR_SEED"] = "  "
        assert get_env_var("PQC_EXPR_SEED", "2024") == "2024"
        assert get_env_int("PQC_EXPR_SEED", 7) == 7

    def test_default_threads_from_env(self):
        os.environ["PQC_EXPR_THREADS"] = "3"
        assert get_default_threads() == 3
        os.environ["PQC_EXPR_THREADS"] = "0"
        assert get_default_threads() == 1


class TestParseRange:
    """Test inclusive range parsing."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [("4", (4, 4)), ("2..18", (2, 18)), (" 1..5 ", (1, 5)), (3, (3, 3)), ((2, 4), (2, 4))],
    )
    def test_valid(self, value, expected):
        assert parse_range(value) == expected

    @pytest.mark.parametrize("value", ["", "a..b", "5..2", "1..", "two"])
    def test_invalid(self, value):
        with pytest.raises(ConfigError):
            parse_range(value)


class TestRunConfig:
    """Test run configuration validation."""

    def test_defaults_validate(self):
        config = RunConfig(command="dataset").validate()
        assert config.samples == 20_000
        assert config.bins == 75
        assert config.reps == 10

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"samples": 0},
            {"bins": 1},
            {"reps": 0},
            {"seed": -1},
            {"threads": 0},
            {"qubits": (0, 4)},
            {"qubits": (2, 19)},
            {"layers": (0, 2)},
            {"test_fraction": 0.0},
            {"test_fraction": 1.0},
            {"lasso_lambda": -0.1},
        ],
    )
    def test_invalid_fields(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig(command="dataset", **kwargs).validate()

    def test_header_excludes_execution_details(self):
        header = RunConfig(command="dataset", threads=8, resume=True).to_header_dict()
        assert "threads" not in header
        assert "resume" not in header
        assert header["qubits"] == [2, 18]
        assert header["samples"] == 20_000

    def test_header_independent_of_threads(self):
        a = RunConfig(command="expr", threads=1).to_header_dict()
        b = RunConfig(command="expr", threads=16).to_header_dict()
        assert a == b
