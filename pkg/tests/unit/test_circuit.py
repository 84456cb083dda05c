"""Unit tests for the statevector simulator."""

import math

import numpy as np
import pytest

from pqc_expressibility.circuit import (
    CircuitInstance,
    GateKind,
    GateOp,
    StateVector,
    apply_gate,
    circuit_unitary,
    concatenated_fidelity,
    fidelity,
    gate_matrix,
    run_circuit,
    run_circuit_batch,
)
from pqc_expressibility.errors import CircuitError


def _basis(n_qubits, index):
    amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
    amplitudes[index] = 1.0
    return StateVector(n_qubits, amplitudes)


def _random_instance():
    gates = (
        GateOp(GateKind.RX, 0, slot=0),
        GateOp(GateKind.RY, 1, slot=1),
        GateOp(GateKind.H, 2),
        GateOp(GateKind.CNOT, 1, 0),
        GateOp(GateKind.CRZ, 2, 1, slot=2),
        GateOp(GateKind.FRZ, 0, fixed_angle=math.pi / 2),
        GateOp(GateKind.CZ, 0, 2),
        GateOp(GateKind.CRX, 0, 2, slot=3),
        GateOp(GateKind.RZ, 1, slot=4),
    )
    return CircuitInstance(0, 3, 1, gates, 5)


class TestGateOp:
    """Test gate validation."""

    def test_two_qubit_gate_requires_control(self):
        with pytest.raises(CircuitError):
            GateOp(GateKind.CNOT, 1)

    def test_control_equal_to_target_rejected(self):
        with pytest.raises(CircuitError):
            GateOp(GateKind.CZ, 1, 1)

    def test_single_qubit_gate_rejects_control(self):
        with pytest.raises(CircuitError):
            GateOp(GateKind.H, 0, 1)

    def test_parameterized_gate_requires_slot(self):
        with pytest.raises(CircuitError):
            GateOp(GateKind.RY, 0)

    def test_fixed_angle_only_for_frz(self):
        with pytest.raises(CircuitError):
            GateOp(GateKind.FRZ, 0, fixed_angle=0.3)
        with pytest.raises(CircuitError):
            GateOp(GateKind.H, 0, fixed_angle=math.pi / 2)

    def test_string_kind_is_coerced(self):
        gate = GateOp("RX", 0, slot=0)
        assert gate.kind is GateKind.RX

    def test_describe(self):
        assert GateOp(GateKind.CRX, 1, 0, slot=3, multiplier=0.5).describe() == "CRX(c=0, t=1, p3*+0.5)"
        assert GateOp(GateKind.FRZ, 2, fixed_angle=-math.pi / 2).describe() == "FRZ(t=2, -pi/2)"


class TestCircuitInstance:
    """Test instance validation."""

    def test_qubit_index_out_of_range(self):
        with pytest.raises(CircuitError):
            CircuitInstance(0, 2, 1, (GateOp(GateKind.H, 2),), 0)

    def test_slots_must_be_dense(self):
        with pytest.raises(CircuitError):
            CircuitInstance(0, 1, 1, (GateOp(GateKind.RX, 0, slot=1),), 2)

    def test_is_elementary(self):
        assert not _random_instance().is_elementary
        assert CircuitInstance(0, 2, 1, (GateOp(GateKind.CNOT, 1, 0),), 0).is_elementary


class TestSimulation:
    """Test gate semantics and state evolution."""

    def test_rx_pi_flips_qubit(self):
        state = apply_gate(StateVector(1), GateOp(GateKind.RX, 0, slot=0), math.pi)
        assert abs(state.amplitudes[1]) ** 2 == pytest.approx(1.0, abs=1e-15)

    def test_hadamard_superposition(self):
        state = apply_gate(StateVector(1), GateOp(GateKind.H, 0))
        assert np.allclose(state.amplitudes, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)

    def test_cnot_truth_table(self):
        # |q1 q0> = |01> has index 1; CNOT(control 0, target 1) gives |11>
        state = apply_gate(_basis(2, 1), GateOp(GateKind.CNOT, 1, 0))
        assert abs(state.amplitudes[3]) == pytest.approx(1.0)

    def test_cnot_leaves_control_zero_untouched(self):
        state = apply_gate(_basis(2, 2), GateOp(GateKind.CNOT, 1, 0))
        assert abs(state.amplitudes[2]) == pytest.approx(1.0)

    def test_cz_phase(self):
        state = apply_gate(_basis(2, 3), GateOp(GateKind.CZ, 1, 0))
        assert state.amplitudes[3] == pytest.approx(-1.0)

    def test_missing_angle_raises(self):
        with pytest.raises(CircuitError):
            apply_gate(StateVector(1), GateOp(GateKind.RX, 0, slot=0))

    def test_superfluous_angle_raises(self):
        with pytest.raises(CircuitError):
            apply_gate(StateVector(1), GateOp(GateKind.H, 0), 0.2)

    def test_gate_outside_register_raises(self):
        with pytest.raises(CircuitError):
            apply_gate(StateVector(1), GateOp(GateKind.H, 1))

    def test_parameter_count_mismatch(self):
        with pytest.raises(CircuitError):
            run_circuit(_random_instance(), [0.1, 0.2])

    def test_norm_preserved(self):
        rng = np.random.default_rng(3)
        state = run_circuit(_random_instance(), rng.uniform(0, 2 * math.pi, 5))
        assert state.norm() == pytest.approx(1.0, abs=1e-12)

    def test_batch_matches_single_runs(self):
        rng = np.random.default_rng(5)
        params = rng.uniform(0, 2 * math.pi, size=(4, 5))
        batch = run_circuit_batch(_random_instance(), params)
        for row in range(4):
            single = run_circuit(_random_instance(), params[row])
            assert np.allclose(batch[row], single.amplitudes, atol=1e-13)

    def test_state_length_checked(self):
        with pytest.raises(CircuitError):
            StateVector(2, [1.0, 0.0])


class TestUnitary:
    """Test unitaries and gate matrices."""

    def test_unitarity(self):
        rng = np.random.default_rng(9)
        unitary = circuit_unitary(_random_instance(), rng.uniform(0, 2 * math.pi, 5))
        assert np.allclose(unitary.conj().T @ unitary, np.eye(8), atol=1e-12)

    def test_controlled_rotation_matches_gate_matrix(self):
        # control on the high qubit so the basis order matches gate_matrix
        for kind in (GateKind.CRX, GateKind.CRY, GateKind.CRZ):
            instance = CircuitInstance(0, 2, 1, (GateOp(kind, 0, 1, slot=0),), 1)
            assert np.allclose(circuit_unitary(instance, [0.7]), gate_matrix(kind, 0.7), atol=1e-12)

    def test_rotation_convention(self):
        angle = 0.4
        expected = np.array([[math.cos(angle / 2), -1j * math.sin(angle / 2)], [-1j * math.sin(angle / 2), math.cos(angle / 2)]])
        assert np.allclose(gate_matrix(GateKind.RX, angle), expected)

    def test_unitary_size_guard(self):
        instance = CircuitInstance(0, 11, 1, (), 0)
        with pytest.raises(CircuitError):
            circuit_unitary(instance, [])


class TestFidelity:
    """Test fidelity helpers."""

    def test_identical_states(self):
        state = run_circuit(_random_instance(), np.full(5, 0.3))
        assert fidelity(state, state.copy()) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_states(self):
        assert fidelity(_basis(2, 0), _basis(2, 3)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(CircuitError):
            fidelity(StateVector(1), StateVector(2))

    def test_concatenated_construction_agrees(self):
        rng = np.random.default_rng(13)
        theta, phi = rng.uniform(0, 2 * math.pi, 5), rng.uniform(0, 2 * math.pi, 5)
        instance = _random_instance()
        direct = fidelity(run_circuit(instance, theta), run_circuit(instance, phi))
        assert concatenated_fidelity(instance, theta, phi) == pytest.approx(direct, abs=1e-12)
