"""Unit tests for the exception hierarchy."""

import pytest

from pqc_expressibility.errors import (
    CatalogError,
    CircuitError,
    ConfigError,
    DatasetError,
    InsufficientDataError,
    MissingInputError,
    ModelError,
    PqcExprError,
    TrackingError,
    UnknownTemplateError,
)


class TestExitCodes:
    """Test the exit code carried by each error."""

    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (PqcExprError, 1),
            (CircuitError, 1),
            (TrackingError, 1),
            (ConfigError, 2),
            (UnknownTemplateError, 2),
            (MissingInputError, 3),
            (CatalogError, 4),
            (DatasetError, 4),
            (ModelError, 4),
            (InsufficientDataError, 5),
        ],
    )
    def test_exit_code(self, error, code):
        assert error.exit_code == code
        assert issubclass(error, PqcExprError)

    def test_unknown_template_is_catalog_error(self):
        with pytest.raises(CatalogError):
            raise UnknownTemplateError("Unknown template id 42")

    def test_missing_input_is_file_not_found(self):
        assert issubclass(MissingInputError, FileNotFoundError)
