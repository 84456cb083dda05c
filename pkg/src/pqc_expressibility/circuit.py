"""Dense statevector simulation of the supported gate set.

Amplitudes are stored as complex128 arrays. Qubit 0 is the least-significant
bit of the amplitude index. Internally a batch of states is viewed as a tensor
of shape ``(batch, 2, ..., 2)`` where qubit ``q`` lives on axis ``n - q``, so a
single-qubit gate only touches two strided views of the array.

Rotations follow R_A(theta) = exp(-i * theta * A / 2) for A in {X, Y, Z}.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .constants import (
    GATE_CNOT,
    GATE_CRX,
    GATE_CRY,
    GATE_CRZ,
    GATE_CZ,
    GATE_FRZ,
    GATE_H,
    GATE_RX,
    GATE_RY,
    GATE_RZ,
    HALF_PI,
    MAX_BATCH_AMPLITUDES,
    MAX_QUBITS,
    MAX_UNITARY_QUBITS,
    MIN_QUBITS,
)
from .errors import CircuitError
from .messages import (
    ERROR_ANGLE_MISSING,
    ERROR_ANGLE_SUPERFLUOUS,
    ERROR_CONTROL_EQUALS_TARGET,
    ERROR_CONTROL_FORBIDDEN,
    ERROR_CONTROL_REQUIRED,
    ERROR_DIMENSION_MISMATCH,
    ERROR_FIXED_ANGLE,
    ERROR_PARAM_COUNT,
    ERROR_QUBIT_COUNT,
    ERROR_QUBIT_INDEX,
    ERROR_SLOT_FORBIDDEN,
    ERROR_SLOT_RANGE,
    ERROR_SLOT_REQUIRED,
    ERROR_STATE_LENGTH,
    ERROR_UNITARY_TOO_LARGE,
)

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class GateKind(str, Enum):
    """Supported gate kinds."""

    RX = GATE_RX
    RY = GATE_RY
    RZ = GATE_RZ
    FRZ = GATE_FRZ
    H = GATE_H
    CNOT = GATE_CNOT
    CZ = GATE_CZ
    CRX = GATE_CRX
    CRY = GATE_CRY
    CRZ = GATE_CRZ

    @property
    def is_two_qubit(self) -> bool:
        return self in _TWO_QUBIT_KINDS

    @property
    def is_parameterized(self) -> bool:
        return self in _PARAMETERIZED_KINDS

    @property
    def is_controlled_rotation(self) -> bool:
        return self in _CONTROLLED_ROTATIONS

    @property
    def is_elementary(self) -> bool:
        return not self.is_controlled_rotation


_TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.CRX, GateKind.CRY, GateKind.CRZ})
_CONTROLLED_ROTATIONS = frozenset({GateKind.CRX, GateKind.CRY, GateKind.CRZ})
_PARAMETERIZED_KINDS = frozenset(
    {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CRX, GateKind.CRY, GateKind.CRZ},
)
_ROTATION_AXIS = {
    GateKind.RX: GateKind.RX,
    GateKind.RY: GateKind.RY,
    GateKind.RZ: GateKind.RZ,
    GateKind.FRZ: GateKind.RZ,
    GateKind.CRX: GateKind.RX,
    GateKind.CRY: GateKind.RY,
    GateKind.CRZ: GateKind.RZ,
}


@dataclass(frozen=True)
class GateOp:
    """One gate of a circuit instance.

    Attributes:
        kind: Gate kind.
        target: Target qubit.
        control: Control qubit for two-qubit kinds, otherwise None.
        slot: Parameter slot for parameterized kinds, otherwise None.
        multiplier: Angle applied is ``params[slot] * multiplier``; decomposed
            sub-gates use +0.5 or -0.5 and share the parent slot.
        fixed_angle: Angle of an FRZ gate (+pi/2 or -pi/2).

    """

    kind: GateKind
    target: int
    control: int | None = None
    slot: int | None = None
    multiplier: float = 1.0
    fixed_angle: float | None = None

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.target < 0:
            msg = ERROR_QUBIT_INDEX.format(index=self.target, n_qubits="any")
            raise CircuitError(msg)
        if kind.is_two_qubit:
            if self.control is None:
                msg = ERROR_CONTROL_REQUIRED.format(kind=kind.value)
                raise CircuitError(msg)
            if self.control < 0:
                msg = ERROR_QUBIT_INDEX.format(index=self.control, n_qubits="any")
                raise CircuitError(msg)
            if self.control == self.target:
                msg = ERROR_CONTROL_EQUALS_TARGET.format(index=self.target)
                raise CircuitError(msg)
        elif self.control is not None:
            msg = ERROR_CONTROL_FORBIDDEN.format(kind=kind.value)
            raise CircuitError(msg)
        if kind.is_parameterized and self.slot is None:
            msg = ERROR_SLOT_REQUIRED.format(kind=kind.value)
            raise CircuitError(msg)
        if not kind.is_parameterized and self.slot is not None:
            msg = ERROR_SLOT_FORBIDDEN.format(kind=kind.value)
            raise CircuitError(msg)
        if kind is GateKind.FRZ:
            if self.fixed_angle is None or abs(abs(self.fixed_angle) - HALF_PI) > 1e-15:
                msg = ERROR_FIXED_ANGLE.format(angle=self.fixed_angle)
                raise CircuitError(msg)
        elif self.fixed_angle is not None:
            msg = ERROR_FIXED_ANGLE.format(angle=self.fixed_angle)
            raise CircuitError(msg)

    @property
    def qubits(self) -> tuple[int, ...]:
        """Touched qubits, control first."""
        return (self.target,) if self.control is None else (self.control, self.target)

    def adjoint(self) -> GateOp:
        """Return the inverse gate on the same qubits and slot."""
        if self.kind is GateKind.FRZ:
            assert self.fixed_angle is not None
            return GateOp(self.kind, self.target, fixed_angle=-self.fixed_angle)
        if self.kind.is_parameterized:
            return GateOp(self.kind, self.target, self.control, self.slot, -self.multiplier)
        return self

    def describe(self) -> str:
        """Short human-readable form such as ``CRX(c=0, t=1, p3*0.5)``."""
        parts = [] if self.control is None else [f"c={self.control}"]
        parts.append(f"t={self.target}")
        if self.slot is not None:
            parts.append(f"p{self.slot}" if self.multiplier == 1.0 else f"p{self.slot}*{self.multiplier:+g}")
        if self.fixed_angle is not None:
            parts.append("+pi/2" if self.fixed_angle > 0 else "-pi/2")
        return f"{self.kind.value}({', '.join(parts)})"


@dataclass(frozen=True)
class CircuitInstance:
    """Flattened, ordered gate list of a template at fixed size.

    Attributes:
        template_id: Catalog id, 0 for ad-hoc circuits.
        n_qubits: Register size.
        n_layers: Layer repetitions the gates were expanded from.
        gates: Gates in application order.
        n_params: Number of distinct parameter slots.

    """

    template_id: int
    n_qubits: int
    n_layers: int
    gates: tuple[GateOp, ...]
    n_params: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < MIN_QUBITS:
            msg = ERROR_QUBIT_COUNT.format(min=MIN_QUBITS, max=MAX_QUBITS, value=self.n_qubits)
            raise CircuitError(msg)
        next_slot = 0
        for gate in self.gates:
            for qubit in gate.qubits:
                if qubit >= self.n_qubits:
                    msg = ERROR_QUBIT_INDEX.format(index=qubit, n_qubits=self.n_qubits)
                    raise CircuitError(msg)
            if gate.slot is not None:
                if gate.slot == next_slot:
                    next_slot += 1
                elif gate.slot > next_slot:
                    msg = ERROR_SLOT_RANGE.format(last=self.n_params - 1)
                    raise CircuitError(msg)
        if next_slot != self.n_params:
            msg = ERROR_SLOT_RANGE.format(last=self.n_params - 1)
            raise CircuitError(msg)

    @property
    def is_elementary(self) -> bool:
        """True when no controlled rotations remain."""
        return all(gate.kind.is_elementary for gate in self.gates)


class StateVector:
    """Dense amplitude array of an n-qubit register.

    Gate application mutates the amplitudes in place; a state is owned by
    one task at a time.
    """

    __slots__ = ("amplitudes", "n_qubits")

    def __init__(self, n_qubits: int, amplitudes: ArrayLike | None = None) -> None:
        """Create |0...0> or wrap the given amplitudes (copied)."""
        _check_qubits(n_qubits)
        dim = 1 << n_qubits
        if amplitudes is None:
            data = np.zeros(dim, dtype=np.complex128)
            data[0] = 1.0
        else:
            data = np.array(amplitudes, dtype=np.complex128).reshape(-1)
            if data.shape[0] != dim:
                msg = ERROR_STATE_LENGTH.format(length=data.shape[0], n_qubits=n_qubits)
                raise CircuitError(msg)
        self.n_qubits = n_qubits
        self.amplitudes: ComplexArray = data

    @classmethod
    def zero(cls, n_qubits: int) -> StateVector:
        return cls(n_qubits)

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


def _check_qubits(n_qubits: int) -> None:
    if not MIN_QUBITS <= n_qubits <= MAX_QUBITS:
        msg = ERROR_QUBIT_COUNT.format(min=MIN_QUBITS, max=MAX_QUBITS, value=n_qubits)
        raise CircuitError(msg)


# Kernels ---------------------------------------------------------------------


def _index(ndim: int, fixed: dict[int, int]) -> tuple[slice | int, ...]:
    idx: list[slice | int] = [slice(None)] * ndim
    for axis, value in fixed.items():
        idx[axis] = value
    return tuple(idx)


def _broadcast(values: FloatArray | ComplexArray, ndim: int) -> FloatArray | ComplexArray:
    # (batch,) -> (batch, 1, ..., 1) to scale a pair view of rank ndim
    return values.reshape((-1,) + (1,) * (ndim - 1))


def _rotate(psi: ComplexArray, axis: int, axis_kind: GateKind, angles: FloatArray, fixed: dict[int, int]) -> None:
    idx0 = _index(psi.ndim, {**fixed, axis: 0})
    idx1 = _index(psi.ndim, {**fixed, axis: 1})
    rank = psi.ndim - 1 - len(fixed)
    if axis_kind is GateKind.RZ:
        phase = np.exp(-0.5j * angles)
        psi[idx0] *= _broadcast(phase, rank)
        psi[idx1] *= _broadcast(np.conj(phase), rank)
        return
    c = _broadcast(np.cos(0.5 * angles), rank)
    s = _broadcast(np.sin(0.5 * angles), rank)
    a0 = psi[idx0].copy()
    a1 = psi[idx1]
    if axis_kind is GateKind.RX:
        psi[idx0] = c * a0 - 1j * s * a1
        psi[idx1] = c * a1 - 1j * s * a0
    else:
        psi[idx0] = c * a0 - s * a1
        psi[idx1] = s * a0 + c * a1


def _apply_kernel(psi: ComplexArray, n_qubits: int, gate: GateOp, angles: FloatArray | None) -> None:
    """Apply one gate to a batched tensor view in place."""
    kind = gate.kind
    target_axis = n_qubits - gate.target
    if kind is GateKind.H:
        idx0 = _index(psi.ndim, {target_axis: 0})
        idx1 = _index(psi.ndim, {target_axis: 1})
        a0 = psi[idx0].copy()
        a1 = psi[idx1]
        psi[idx0] = (a0 + a1) * _INV_SQRT2
        psi[idx1] = (a0 - a1) * _INV_SQRT2
        return
    if kind is GateKind.FRZ:
        assert gate.fixed_angle is not None
        fixed_angles = np.full(psi.shape[0], gate.fixed_angle)
        _rotate(psi, target_axis, GateKind.RZ, fixed_angles, {})
        return
    if not kind.is_two_qubit:
        assert angles is not None
        _rotate(psi, target_axis, _ROTATION_AXIS[kind], angles, {})
        return

    assert gate.control is not None
    control_axis = n_qubits - gate.control
    if kind is GateKind.CNOT:
        idx10 = _index(psi.ndim, {control_axis: 1, target_axis: 0})
        idx11 = _index(psi.ndim, {control_axis: 1, target_axis: 1})
        swapped = psi[idx10].copy()
        psi[idx10] = psi[idx11]
        psi[idx11] = swapped
        return
    if kind is GateKind.CZ:
        psi[_index(psi.ndim, {control_axis: 1, target_axis: 1})] *= -1.0
        return
    assert angles is not None
    _rotate(psi, target_axis, _ROTATION_AXIS[kind], angles, {control_axis: 1})


def _gate_angles(gate: GateOp, params: FloatArray) -> FloatArray | None:
    if gate.slot is None:
        return None
    return params[:, gate.slot] * gate.multiplier


def _apply_sequence(psi: ComplexArray, n_qubits: int, gates: Sequence[GateOp], params: FloatArray) -> None:
    for gate in gates:
        _apply_kernel(psi, n_qubits, gate, _gate_angles(gate, params))


# Public API --------------------------------------------------------------------


def apply_gate(state: StateVector, gate: GateOp, angle: float | None = None) -> StateVector:
    """Apply one gate to a state in place.

    Args:
        state: State to transform.
        gate: Gate to apply.
        angle: Value of the gate's parameter slot (radians); the gate's
            multiplier is applied on top. Required iff the gate has a slot.

    Returns:
        The same (mutated) state, for chaining.

    Raises:
        CircuitError: On out-of-range qubits or a missing/superfluous angle.

    """
    for qubit in gate.qubits:
        if qubit >= state.n_qubits:
            msg = ERROR_QUBIT_INDEX.format(index=qubit, n_qubits=state.n_qubits)
            raise CircuitError(msg)
    if gate.slot is not None and angle is None:
        raise CircuitError(ERROR_ANGLE_MISSING.format(gate=gate.describe()))
    if gate.slot is None and angle is not None:
        raise CircuitError(ERROR_ANGLE_SUPERFLUOUS.format(gate=gate.describe()))

    n = state.n_qubits
    psi = state.amplitudes.reshape((1,) + (2,) * n)
    angles = None if angle is None else np.array([float(angle) * gate.multiplier])
    _apply_kernel(psi, n, gate, angles)
    return state


def _as_param_matrix(instance: CircuitInstance, params: ArrayLike) -> FloatArray:
    array = np.asarray(params, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2 or array.shape[1] != instance.n_params:
        actual = array.shape[-1] if array.ndim else 0
        msg = ERROR_PARAM_COUNT.format(expected=instance.n_params, actual=actual)
        raise CircuitError(msg)
    return array


def run_circuit_batch(instance: CircuitInstance, params: ArrayLike, initial: ArrayLike | None = None) -> ComplexArray:
    """Simulate the circuit for a batch of parameter vectors.

    Args:
        instance: Circuit to run.
        params: Array of shape ``(batch, n_params)``.
        initial: Optional starting amplitudes of shape ``(batch, 2^n)``;
            defaults to |0...0> for every row.

    Returns:
        Final amplitudes of shape ``(batch, 2^n)``.

    Raises:
        CircuitError: On a parameter-count mismatch or unsupported size.

    """
    _check_qubits(instance.n_qubits)
    matrix = _as_param_matrix(instance, params)
    n = instance.n_qubits
    dim = 1 << n
    batch = matrix.shape[0]
    if initial is None:
        states = np.zeros((batch, dim), dtype=np.complex128)
        states[:, 0] = 1.0
    else:
        states = np.array(initial, dtype=np.complex128).reshape(batch, dim)
    _apply_sequence(states.reshape((batch,) + (2,) * n), n, instance.gates, matrix)
    return states


def run_circuit(instance: CircuitInstance, params: ArrayLike) -> StateVector:
    """Return U_C(params)|0...0> by sequential gate application.

    Args:
        instance: Circuit to run.
        params: One angle per parameter slot (radians).

    Returns:
        Final state.

    Raises:
        CircuitError: If the parameter count does not match.

    """
    vector = np.asarray(params, dtype=np.float64).reshape(-1)
    if vector.shape[0] != instance.n_params:
        msg = ERROR_PARAM_COUNT.format(expected=instance.n_params, actual=vector.shape[0])
        raise CircuitError(msg)
    amplitudes = run_circuit_batch(instance, vector.reshape(1, -1))[0]
    return StateVector(instance.n_qubits, amplitudes)


def circuit_unitary(instance: CircuitInstance, params: ArrayLike) -> ComplexArray:
    """Build the full 2^n x 2^n unitary by running every basis state.

    Raises:
        CircuitError: If n_qubits exceeds the unitary size guard.

    """
    if instance.n_qubits > MAX_UNITARY_QUBITS:
        msg = ERROR_UNITARY_TOO_LARGE.format(max=MAX_UNITARY_QUBITS, value=instance.n_qubits)
        raise CircuitError(msg)
    dim = 1 << instance.n_qubits
    vector = _as_param_matrix(instance, params)
    if vector.shape[0] != 1:
        msg = ERROR_PARAM_COUNT.format(expected=instance.n_params, actual=vector.shape)
        raise CircuitError(msg)
    columns = run_circuit_batch(instance, np.repeat(vector, dim, axis=0), initial=np.eye(dim, dtype=np.complex128))
    # row k holds U|k>, i.e. column k of U
    return columns.T.copy()


def fidelity(a: StateVector, b: StateVector) -> float:
    """Return |<a|b>|^2 clamped to [0, 1].

    Raises:
        CircuitError: If the states have different sizes.

    """
    if a.n_qubits != b.n_qubits:
        msg = ERROR_DIMENSION_MISMATCH.format(left=a.n_qubits, right=b.n_qubits)
        raise CircuitError(msg)
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return float(min(1.0, max(0.0, abs(overlap) ** 2)))


def fidelity_batch(a: ComplexArray, b: ComplexArray) -> FloatArray:
    """Row-wise fidelities of two amplitude batches, clamped to [0, 1]."""
    if a.shape != b.shape:
        msg = ERROR_DIMENSION_MISMATCH.format(left=a.shape, right=b.shape)
        raise CircuitError(msg)
    overlaps = np.einsum("ij,ij->i", np.conj(a), b)
    return np.clip(np.abs(overlaps) ** 2, 0.0, 1.0)


def concatenated_fidelity(instance: CircuitInstance, theta: ArrayLike, phi: ArrayLike) -> float:
    """Probability of |0...0> after U(theta) followed by U(phi)^dagger.

    This is the single-register construction of the fidelity between the two
    parameterizations; it must agree with `fidelity` of two forward runs.
    """
    theta_row = _as_param_matrix(instance, theta)
    phi_row = _as_param_matrix(instance, phi)
    n = instance.n_qubits
    states = run_circuit_batch(instance, theta_row)
    adjoint = [gate.adjoint() for gate in reversed(instance.gates)]
    _apply_sequence(states.reshape((1,) + (2,) * n), n, adjoint, phi_row)
    return float(min(1.0, abs(states[0, 0]) ** 2))


def gate_matrix(kind: GateKind | str, angle: float | None = None) -> ComplexArray:
    """Canonical matrix of a gate kind.

    Two-qubit matrices use the basis order |control, target> = |00>, |01>,
    |10>, |11>, i.e. the control is the most significant bit.

    Args:
        kind: Gate kind.
        angle: Rotation angle for RX/RY/RZ/FRZ/CRX/CRY/CRZ.

    Returns:
        2x2 or 4x4 complex matrix.

    """
    gate_kind = GateKind(kind)
    if gate_kind is GateKind.H:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) * _INV_SQRT2
    if gate_kind is GateKind.CNOT:
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128)
    if gate_kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(np.complex128)
    if angle is None:
        raise CircuitError(ERROR_ANGLE_MISSING.format(gate=gate_kind.value))
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    axis = _ROTATION_AXIS[gate_kind]
    if axis is GateKind.RX:
        block = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    elif axis is GateKind.RY:
        block = np.array([[c, -s], [s, c]], dtype=np.complex128)
    else:
        block = np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)]).astype(np.complex128)
    if not gate_kind.is_two_qubit:
        return block
    matrix = np.eye(4, dtype=np.complex128)
    matrix[2:, 2:] = block
    return matrix


__all__ = [
    "CircuitInstance",
    "GateKind",
    "GateOp",
    "StateVector",
    "apply_gate",
    "circuit_unitary",
    "concatenated_fidelity",
    "fidelity",
    "fidelity_batch",
    "gate_matrix",
    "run_circuit",
    "run_circuit_batch",
]
