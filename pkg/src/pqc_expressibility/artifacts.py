"""Reading and writing of output artifacts.

Every artifact starts with two comment lines::

    # pqc-expressibility <version>
    # config: {"bins": 75, ...}

followed by either a CSV table or a JSON document. The config line holds the
run configuration with sorted keys and no timestamps, so rerunning with those
settings reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np

from .constants import COMMENT_PREFIX, HEADER_CONFIG_KEY, PACKAGE_NAME
from .errors import DatasetError, MissingInputError
from .messages import ERROR_DATASET_HEADER, ERROR_DATASET_NOT_FOUND
from .utils import get_version


def header_lines(config: Mapping[str, Any] | None = None) -> list[str]:
    """Return the comment header lines for an artifact.

    Args:
        config: Run configuration to embed; omitted when None.

    Returns:
        Lines without trailing newlines.

    """
    lines = [f"{COMMENT_PREFIX} {PACKAGE_NAME} {get_version()}"]
    if config is not None:
        payload = json.dumps(dict(config), sort_keys=True, separators=(",", ":"))
        lines.append(f"{COMMENT_PREFIX} {HEADER_CONFIG_KEY}: {payload}")
    return lines


def parse_header_lines(lines: Iterable[str]) -> dict[str, Any]:
    """Recover the embedded config from comment lines.

    Args:
        lines: Raw comment lines (with or without the leading marker).

    Returns:
        The config mapping, or an empty dict when no config line is present.

    """
    marker = f"{HEADER_CONFIG_KEY}:"
    for raw in lines:
        text = raw.lstrip(COMMENT_PREFIX).strip()
        if text.startswith(marker):
            try:
                data = json.loads(text[len(marker) :].strip())
            except json.JSONDecodeError:
                return {}
            return data if isinstance(data, dict) else {}
    return {}


def format_value(value: Any) -> str:
    """Render a cell so that reading it back is exact (floats use repr)."""
    if isinstance(value, bool | np.bool_):
        return "1" if value else "0"
    if isinstance(value, float | np.floating):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


class TableWriter:
    """Incremental CSV writer that flushes after every row.

    Used as a context manager::

        with TableWriter(path, columns, config) as writer:
            writer.write_row(row)
    """

    def __init__(self, path: str | Path, columns: Sequence[str], config: Mapping[str, Any] | None = None) -> None:
        """Remember the destination; the file is opened on enter."""
        self.path = Path(path)
        self.columns = tuple(columns)
        self.config = config
        self.rows_written = 0
        self._handle: IO[str] | None = None
        self._writer: Any = None

    def __enter__(self) -> TableWriter:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = self.path.open("w", encoding="utf-8", newline="")
        for line in header_lines(self.config):
            self._handle.write(line + "\n")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(self.columns)
        self._handle.flush()
        return self

    def write_row(self, row: Sequence[Any]) -> None:
        """Write one row and flush it to disk."""
        self._writer.writerow([format_value(value) for value in row])
        assert self._handle is not None
        self._handle.flush()
        self.rows_written += 1

    def __exit__(self, *exc: object) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def write_table(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: Mapping[str, Any] | None = None,
) -> Path:
    """Write a complete CSV table with the artifact header.

    Args:
        path: Destination file.
        columns: Column names.
        rows: Row values in column order.
        config: Run configuration for the header.

    Returns:
        The written path.

    """
    with TableWriter(path, columns, config) as writer:
        for row in rows:
            writer.write_row(row)
    return Path(path)


@dataclass
class Table:
    """A parsed artifact table."""

    config: dict[str, Any]
    columns: tuple[str, ...]
    rows: list[list[str]] = field(default_factory=list)
    # 1-based file line number of each row, for diagnostics
    line_numbers: list[int] = field(default_factory=list)
    truncated_tail: bool = False


def read_table(path: str | Path, expected_columns: Sequence[str] | None = None) -> Table:
    """Read a CSV artifact, skipping comment lines.

    Every row a writer completes ends with a newline, so a final data line
    without one is an interrupted write, even when its cell count looks right
    (the cut may fall inside the last cell). It is dropped and reported
    through `Table.truncated_tail`.

    Args:
        path: File to read.
        expected_columns: When given, the column header must match exactly.

    Returns:
        Parsed table.

    Raises:
        MissingInputError: If the file does not exist.
        DatasetError: If the column header is missing or unexpected.

    """
    file_path = Path(path)
    if not file_path.is_file():
        msg = ERROR_DATASET_NOT_FOUND.format(path=file_path)
        raise MissingInputError(msg)

    text = file_path.read_text(encoding="utf-8")
    lines = text.split("\n")
    ends_with_newline = text.endswith("\n")
    if ends_with_newline:
        lines = lines[:-1]

    comments: list[str] = []
    columns: tuple[str, ...] | None = None
    table_rows: list[list[str]] = []
    numbers: list[int] = []
    truncated = False
    for index, line in enumerate(lines, start=1):
        if line.startswith(COMMENT_PREFIX):
            comments.append(line)
            continue
        if not line.strip():
            continue
        cells = next(csv.reader([line]))
        if columns is None:
            columns = tuple(cells)
            continue
        is_last = index == len(lines)
        if is_last and not ends_with_newline:
            truncated = True
            continue
        table_rows.append(cells)
        numbers.append(index)

    if columns is None or (expected_columns is not None and columns != tuple(expected_columns)):
        msg = ERROR_DATASET_HEADER.format(path=file_path, header=",".join(columns or ()))
        raise DatasetError(msg)
    return Table(
        config=parse_header_lines(comments),
        columns=columns,
        rows=table_rows,
        line_numbers=numbers,
        truncated_tail=truncated,
    )


def write_document(path: str | Path, document: Mapping[str, Any], config: Mapping[str, Any] | None = None) -> Path:
    """Write a JSON document preceded by the artifact header.

    Args:
        path: Destination file.
        document: JSON-serializable mapping.
        config: Run configuration for the header.

    Returns:
        The written path.

    """
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    body = json.dumps(document, sort_keys=True, indent=1)
    file_path.write_text("\n".join([*header_lines(config), body]) + "\n", encoding="utf-8")
    return file_path


def read_document(path: str | Path) -> tuple[dict[str, Any], Any]:
    """Read a JSON document artifact.

    Args:
        path: File written by `write_document`.

    Returns:
        `(header config, parsed document)`.

    Raises:
        MissingInputError: If the file does not exist.
        json.JSONDecodeError: If the body is not valid JSON.

    """
    file_path = Path(path)
    if not file_path.is_file():
        msg = ERROR_DATASET_NOT_FOUND.format(path=file_path)
        raise MissingInputError(msg)
    comments: list[str] = []
    body: list[str] = []
    for line in file_path.read_text(encoding="utf-8").splitlines():
        if not body and line.startswith(COMMENT_PREFIX):
            comments.append(line)
        else:
            body.append(line)
    return parse_header_lines(comments), json.loads("\n".join(body))


def write_key_values(path: str | Path, values: Mapping[str, Any], config: Mapping[str, Any] | None = None) -> Path:
    """Write `key=value` lines (in mapping order) after the artifact header."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [*header_lines(config), *(f"{key}={format_value(value)}" for key, value in values.items())]
    file_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return file_path


__all__ = [
    "Table",
    "TableWriter",
    "format_value",
    "header_lines",
    "parse_header_lines",
    "read_document",
    "read_table",
    "write_document",
    "write_key_values",
    "write_table",
]
