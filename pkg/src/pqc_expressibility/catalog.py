"""Catalog of circuit templates.

Templates are data: an ordered list of blocks, each applying one gate kind
along a qubit pattern. `instantiate` expands a template for a register size and
layer count, `decompose` rewrites controlled rotations into the elementary gate
set, and `gate_counts` / `param_count` tally the result.

Catalog file schema (JSON)::

    [{"id": 1, "description": "...",
      "blocks": [{"kind": "single_qubit_layer", "gate": "RX", "pattern": "all_qubits"}, ...]},
     ...]
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Any

from .cache import instance_cache, memoize
from .circuit import CircuitInstance, GateKind, GateOp
from .constants import (
    BLOCK_ENTANGLING_PATTERN,
    BLOCK_KINDS,
    BLOCK_SINGLE_QUBIT_LAYER,
    CATALOG_FIELD_BLOCKS,
    CATALOG_FIELD_DESCRIPTION,
    CATALOG_FIELD_GATE,
    CATALOG_FIELD_ID,
    CATALOG_FIELD_KIND,
    CATALOG_FIELD_PATTERN,
    CATALOG_RESOURCE_NAME,
    CATALOG_RESOURCE_PACKAGE,
    ENTANGLING_PATTERNS,
    HALF_PI,
    PATTERN_ALL_QUBITS,
    PATTERN_ALL_TO_ALL,
    PATTERN_CHAIN,
    PATTERN_EVEN_BONDS,
    PATTERN_ODD_BOND_QUBITS,
    PATTERN_ODD_BONDS,
    PATTERN_RING,
    PATTERN_RING_REVERSE,
    SINGLE_QUBIT_PATTERNS,
)
from .errors import CatalogError, MissingInputError, UnknownTemplateError
from .messages import (
    ERROR_BLOCK_GATE_MISMATCH,
    ERROR_BLOCK_PATTERN_MISMATCH,
    ERROR_CATALOG_DUPLICATE_ID,
    ERROR_CATALOG_EMPTY,
    ERROR_CATALOG_FIELD,
    ERROR_CATALOG_NOT_FOUND,
    ERROR_CATALOG_NOT_LIST,
    ERROR_CATALOG_PARSE,
    ERROR_INSTANCE_SIZE,
    ERROR_UNKNOWN_BLOCK_KIND,
    ERROR_UNKNOWN_GATE,
    ERROR_UNKNOWN_PATTERN,
    ERROR_UNKNOWN_TEMPLATE,
    LOG_CATALOG_LOADED,
    PROBLEM_EMPTY_BLOCKS,
    PROBLEM_MISSING,
    PROBLEM_NOT_INT,
    PROBLEM_NOT_OBJECT,
    PROBLEM_NOT_STR,
)
from .utils import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Block:
    """One gate kind applied along a qubit pattern."""

    kind: str
    gate: GateKind
    pattern: str

    def qubits(self, n_qubits: int) -> list[int]:
        """Target qubits of a single-qubit layer, ascending."""
        if self.pattern == PATTERN_ALL_QUBITS:
            return list(range(n_qubits))
        # PATTERN_ODD_BOND_QUBITS: qubits touched by (1,2), (3,4), ...
        return [q for start in range(1, n_qubits - 1, 2) for q in (start, start + 1)]

    def pairs(self, n_qubits: int) -> list[tuple[int, int]]:
        """(control, target) pairs of an entangling pattern."""
        n = n_qubits
        if self.pattern == PATTERN_CHAIN:
            return [(i, i + 1) for i in range(n - 1)]
        if self.pattern == PATTERN_RING:
            return [(i, (i + 1) % n) for i in range(n)]
        if self.pattern == PATTERN_RING_REVERSE:
            return [(i, (i - 1) % n) for i in range(n)]
        if self.pattern == PATTERN_ALL_TO_ALL:
            return [(c, t) for c in range(n) for t in range(n) if t != c]
        if self.pattern == PATTERN_EVEN_BONDS:
            return [(i, i + 1) for i in range(0, n - 1, 2)]
        return [(i, i + 1) for i in range(1, n - 1, 2)]


@dataclass(frozen=True)
class CircuitTemplate:
    """A catalog entry: ordered blocks repeated once per layer."""

    id: int
    blocks: tuple[Block, ...]
    description: str = ""

    @property
    def min_qubits(self) -> int:
        """Smallest register the template can be instantiated on."""
        return 2 if any(block.kind == BLOCK_ENTANGLING_PATTERN for block in self.blocks) else 1


@dataclass(frozen=True)
class GateCountVector:
    """Gate tally per kind."""

    rx: int = 0
    ry: int = 0
    rz: int = 0
    frz: int = 0
    h: int = 0
    cnot: int = 0
    cz: int = 0
    crx: int = 0
    cry: int = 0
    crz: int = 0

    @classmethod
    def from_mapping(cls, counts: dict[str, int]) -> GateCountVector:
        return cls(**{key: int(counts.get(key, 0)) for key in cls.names()})

    @staticmethod
    def names() -> tuple[str, ...]:
        return tuple(f.name for f in fields(GateCountVector))

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.names()}

    def total(self) -> int:
        return sum(self.as_dict().values())

    def select(self, names: Sequence[str]) -> tuple[int, ...]:
        """Counts for the given column names, in order."""
        return tuple(getattr(self, name) for name in names)

    def __add__(self, other: GateCountVector) -> GateCountVector:
        return GateCountVector(*(a + b for a, b in zip(self.as_dict().values(), other.as_dict().values(), strict=True)))

    def describe(self) -> str:
        return " ".join(f"{name.upper()}={value}" for name, value in self.as_dict().items())


# Loading ---------------------------------------------------------------------


def _field_error(source: str, position: int, field_name: str, problem: str) -> CatalogError:
    return CatalogError(ERROR_CATALOG_FIELD.format(source=source, position=position, field=field_name, problem=problem))


def _parse_block(raw: Any, source: str, position: int) -> Block:
    if not isinstance(raw, dict):
        raise _field_error(source, position, CATALOG_FIELD_BLOCKS, PROBLEM_NOT_OBJECT)
    for key in (CATALOG_FIELD_KIND, CATALOG_FIELD_GATE, CATALOG_FIELD_PATTERN):
        if key not in raw:
            raise _field_error(source, position, key, PROBLEM_MISSING)
        if not isinstance(raw[key], str):
            raise _field_error(source, position, key, PROBLEM_NOT_STR)

    kind = raw[CATALOG_FIELD_KIND]
    if kind not in BLOCK_KINDS:
        raise _field_error(source, position, CATALOG_FIELD_KIND, ERROR_UNKNOWN_BLOCK_KIND.format(value=kind))
    try:
        gate = GateKind(raw[CATALOG_FIELD_GATE])
    except ValueError:
        problem = ERROR_UNKNOWN_GATE.format(value=raw[CATALOG_FIELD_GATE])
        raise _field_error(source, position, CATALOG_FIELD_GATE, problem) from None
    # FRZ only arises from decomposition; templates cannot place it
    if gate is GateKind.FRZ or gate.is_two_qubit != (kind == BLOCK_ENTANGLING_PATTERN):
        problem = ERROR_BLOCK_GATE_MISMATCH.format(gate=gate.value, kind=kind)
        raise _field_error(source, position, CATALOG_FIELD_GATE, problem)

    pattern = raw[CATALOG_FIELD_PATTERN]
    if pattern not in SINGLE_QUBIT_PATTERNS + ENTANGLING_PATTERNS:
        raise _field_error(source, position, CATALOG_FIELD_PATTERN, ERROR_UNKNOWN_PATTERN.format(value=pattern))
    allowed = SINGLE_QUBIT_PATTERNS if kind == BLOCK_SINGLE_QUBIT_LAYER else ENTANGLING_PATTERNS
    if pattern not in allowed:
        problem = ERROR_BLOCK_PATTERN_MISMATCH.format(pattern=pattern, kind=kind)
        raise _field_error(source, position, CATALOG_FIELD_PATTERN, problem)
    return Block(kind=kind, gate=gate, pattern=pattern)


def parse_catalog(text: str, source: str = "<string>") -> list[CircuitTemplate]:
    """Parse and validate catalog JSON text.

    Args:
        text: Catalog document.
        source: Name used in diagnostics.

    Returns:
        Templates sorted by id.

    Raises:
        CatalogError: On malformed JSON, schema violations, unknown gate kinds
            or patterns, duplicate ids, or an empty catalog.

    """
    if not text.strip():
        raise CatalogError(ERROR_CATALOG_EMPTY.format(source=source))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = ERROR_CATALOG_PARSE.format(source=source, line=e.lineno, column=e.colno, detail=e.msg)
        raise CatalogError(msg) from e
    if not isinstance(data, list):
        raise CatalogError(ERROR_CATALOG_NOT_LIST.format(source=source))
    if not data:
        raise CatalogError(ERROR_CATALOG_EMPTY.format(source=source))

    templates: dict[int, CircuitTemplate] = {}
    for position, entry in enumerate(data, start=1):
        if not isinstance(entry, dict):
            raise _field_error(source, position, CATALOG_FIELD_ID, PROBLEM_NOT_OBJECT)
        template_id = entry.get(CATALOG_FIELD_ID)
        if template_id is None:
            raise _field_error(source, position, CATALOG_FIELD_ID, PROBLEM_MISSING)
        if isinstance(template_id, bool) or not isinstance(template_id, int) or template_id < 1:
            raise _field_error(source, position, CATALOG_FIELD_ID, PROBLEM_NOT_INT)
        if template_id in templates:
            raise CatalogError(ERROR_CATALOG_DUPLICATE_ID.format(source=source, id=template_id))
        description = entry.get(CATALOG_FIELD_DESCRIPTION, "")
        if not isinstance(description, str):
            raise _field_error(source, position, CATALOG_FIELD_DESCRIPTION, PROBLEM_NOT_STR)
        raw_blocks = entry.get(CATALOG_FIELD_BLOCKS)
        if not isinstance(raw_blocks, list) or not raw_blocks:
            raise _field_error(source, position, CATALOG_FIELD_BLOCKS, PROBLEM_EMPTY_BLOCKS)
        blocks = tuple(_parse_block(raw, source, position) for raw in raw_blocks)
        templates[template_id] = CircuitTemplate(id=template_id, blocks=blocks, description=description)

    return [templates[key] for key in sorted(templates)]


def load_catalog(path: str | Path) -> list[CircuitTemplate]:
    """Load a catalog file.

    Args:
        path: JSON catalog path.

    Returns:
        Templates sorted by id.

    Raises:
        MissingInputError: If the file does not exist.
        CatalogError: If the file does not validate.

    """
    file_path = Path(path)
    if not file_path.is_file():
        raise MissingInputError(ERROR_CATALOG_NOT_FOUND.format(path=file_path))
    templates = parse_catalog(file_path.read_text(encoding="utf-8"), source=str(file_path))
    logger.debug(LOG_CATALOG_LOADED, len(templates), file_path)
    return templates


def default_catalog() -> list[CircuitTemplate]:
    """Return the shipped 19-template catalog."""
    resource = resources.files(CATALOG_RESOURCE_PACKAGE).joinpath(CATALOG_RESOURCE_NAME)
    return parse_catalog(resource.read_text(encoding="utf-8"), source=CATALOG_RESOURCE_NAME)


def resolve_catalog(path: str | Path | None) -> list[CircuitTemplate]:
    """Load `path` when given, otherwise the shipped catalog."""
    return default_catalog() if path is None else load_catalog(path)


def get_template(catalog: Iterable[CircuitTemplate], template_id: int) -> CircuitTemplate:
    """Look up a template by id.

    Raises:
        UnknownTemplateError: If no template has that id.

    """
    for template in catalog:
        if template.id == template_id:
            return template
    raise UnknownTemplateError(ERROR_UNKNOWN_TEMPLATE.format(id=template_id))


# Instantiation and decomposition ---------------------------------------------


def instantiate(template: CircuitTemplate, n_qubits: int, n_layers: int) -> CircuitInstance:
    """Expand a template into a flat gate list.

    The whole block list is repeated `n_layers` times. Within a block gates are
    ordered by ascending qubit (or control, then target) index, and every
    parameterized gate receives the next fresh slot.

    Args:
        template: Template to expand.
        n_qubits: Register size.
        n_layers: Number of repetitions.

    Returns:
        The circuit instance.

    Raises:
        CatalogError: If the size is below what the template's patterns need.

    """
    if n_layers < 1 or n_qubits < template.min_qubits:
        msg = ERROR_INSTANCE_SIZE.format(
            id=template.id,
            min_qubits=template.min_qubits,
            n_qubits=n_qubits,
            n_layers=n_layers,
        )
        raise CatalogError(msg)

    gates: list[GateOp] = []
    slot = 0
    for _ in range(n_layers):
        for block in template.blocks:
            if block.kind == BLOCK_SINGLE_QUBIT_LAYER:
                placements: list[tuple[int | None, int]] = [(None, q) for q in block.qubits(n_qubits)]
            else:
                placements = list(block.pairs(n_qubits))
            for control, target in placements:
                if block.gate.is_parameterized:
                    gates.append(GateOp(block.gate, target, control, slot))
                    slot += 1
                else:
                    gates.append(GateOp(block.gate, target, control))
    return CircuitInstance(template.id, n_qubits, n_layers, tuple(gates), slot)


def _decompose_gate(gate: GateOp) -> list[GateOp]:
    if not gate.kind.is_controlled_rotation:
        return [gate]
    assert gate.control is not None
    control, target, slot, half = gate.control, gate.target, gate.slot, 0.5 * gate.multiplier
    axis = GateKind.RZ if gate.kind is GateKind.CRZ else GateKind.RY
    core = [
        GateOp(axis, target, slot=slot, multiplier=half),
        GateOp(GateKind.CNOT, target, control),
        GateOp(axis, target, slot=slot, multiplier=-half),
        GateOp(GateKind.CNOT, target, control),
    ]
    if gate.kind is not GateKind.CRX:
        return core
    # RZ(-pi/2) RY RZ(pi/2) turns the Y rotation into an X rotation
    return [
        GateOp(GateKind.FRZ, target, fixed_angle=HALF_PI),
        *core,
        GateOp(GateKind.FRZ, target, fixed_angle=-HALF_PI),
    ]


def decompose(instance: CircuitInstance) -> CircuitInstance:
    """Rewrite CRX/CRY/CRZ into {RY, RZ, FRZ, CNOT}; other gates pass through.

    Sub-gates reuse the parent's slot with multipliers of +1/2 and -1/2, so the
    parameter space is unchanged.
    """
    if instance.is_elementary:
        return instance
    gates = tuple(sub for gate in instance.gates for sub in _decompose_gate(gate))
    return CircuitInstance(instance.template_id, instance.n_qubits, instance.n_layers, gates, instance.n_params)


@memoize(
    instance_cache,
    key_fn=lambda template, n_qubits, n_layers, decomposed=True: (template, n_qubits, n_layers, decomposed),
)
def compile_instance(template: CircuitTemplate, n_qubits: int, n_layers: int, decomposed: bool = True) -> CircuitInstance:
    """Memoized `instantiate` (+ `decompose`) for repeated grid lookups."""
    instance = instantiate(template, n_qubits, n_layers)
    if decomposed:
        instance = decompose(instance)
    return instance


def gate_counts(instance: CircuitInstance) -> GateCountVector:
    """Exact tally of gates by kind."""
    counts: dict[str, int] = {}
    for gate in instance.gates:
        name = gate.kind.value.lower()
        counts[name] = counts.get(name, 0) + 1
    return GateCountVector.from_mapping(counts)


def param_count(instance: CircuitInstance) -> int:
    """Number of distinct parameter slots."""
    return len({gate.slot for gate in instance.gates if gate.slot is not None})


def aggregate_counts(
    catalog: Iterable[CircuitTemplate],
    n_qubits: int,
    n_layers: int,
    decomposed: bool = False,
) -> GateCountVector:
    """Sum gate counts over every template at one size."""
    total = GateCountVector()
    for template in catalog:
        total = total + gate_counts(compile_instance(template, n_qubits, n_layers, decomposed))
    return total


__all__ = [
    "Block",
    "CircuitInstance",
    "CircuitTemplate",
    "GateCountVector",
    "aggregate_counts",
    "compile_instance",
    "decompose",
    "default_catalog",
    "gate_counts",
    "get_template",
    "instantiate",
    "load_catalog",
    "param_count",
    "parse_catalog",
    "resolve_catalog",
]
