import numpy as np
import pytest

from vqprep.circuits import (
    BoundCircuit,
    Circuit,
    GateSpec,
    adjoint,
    bind,
    circuit_from_gates,
    dag_depth,
    dense_unitary,
    execute,
    from_text,
    to_text,
)
from vqprep.statevector import StateVector, ValidationError, new_zero_state


def random_state(n_qubits, rng):
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return StateVector(n_qubits, amps / np.linalg.norm(amps))


def random_circuit(n_qubits, n_gates, rng):
    gates = []
    slot = 0
    for _ in range(n_gates):
        roll = rng.integers(0, 5)
        if roll < 2:
            gates.append(GateSpec(str(rng.choice(["RX", "RY", "RZ"])), (int(rng.integers(0, n_qubits)),), slot))
            slot += 1
        elif roll == 2:
            gates.append(GateSpec("H", (int(rng.integers(0, n_qubits)),)))
        elif roll == 3:
            a, b = rng.choice(n_qubits, size=2, replace=False)
            gates.append(GateSpec("MCZ", (int(a), int(b))))
        else:
            a, b = rng.choice(n_qubits, size=2, replace=False)
            gates.append(GateSpec(str(rng.choice(["CRX", "CRZ"])), (int(a), int(b)), slot))
            slot += 1
    circ = circuit_from_gates(n_qubits, gates)
    return circ, rng.uniform(0, 2 * np.pi, circ.n_params)


class TestGateSpec:
    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            GateSpec("CNOT", (0, 1), None)

    def test_rotation_needs_slot(self):
        with pytest.raises(ValidationError):
            GateSpec("RY", (0,), None)

    def test_fixed_gate_rejects_slot(self):
        with pytest.raises(ValidationError):
            GateSpec("H", (0,), 0)

    def test_mcz_arity(self):
        with pytest.raises(ValidationError):
            GateSpec("MCZ", (0,), None)

    def test_crx_arity(self):
        with pytest.raises(ValidationError):
            GateSpec("CRX", (0, 1, 2), 0)


class TestCircuitValidation:
    def test_slot_gap_rejected(self):
        with pytest.raises(ValidationError):
            Circuit(2, (GateSpec("RY", (0,), 0), GateSpec("RY", (1,), 2)), 3)

    def test_duplicate_slot_rejected(self):
        with pytest.raises(ValidationError):
            Circuit(2, (GateSpec("RY", (0,), 0), GateSpec("RY", (1,), 0)), 1)

    def test_qubit_out_of_range(self):
        with pytest.raises(ValidationError):
            Circuit(2, (GateSpec("H", (3,)),), 0)

    def test_bind_length_mismatch(self):
        circ = circuit_from_gates(1, [GateSpec("RY", (0,), 0)])
        with pytest.raises(ValidationError):
            bind(circ, [0.1, 0.2])


class TestExecute:
    def test_empty_circuit_is_identity(self):
        circ = circuit_from_gates(2, [])
        out = execute(bind(circ, []), new_zero_state(2))
        np.testing.assert_allclose(out.amplitudes, [1, 0, 0, 0])

    def test_single_hadamard(self):
        circ = circuit_from_gates(1, [GateSpec("H", (0,))])
        out = execute(bind(circ, []), new_zero_state(1))
        np.testing.assert_allclose(out.amplitudes, [1, 1] / np.sqrt(2), atol=1e-12)

    def test_norm_preserved_random_circuits(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            circ, theta = random_circuit(3, 12, rng)
            out = execute(bind(circ, theta), random_state(3, rng))
            assert abs(out.norm() - 1.0) < 1e-10

    def test_adjoint_inverts(self):
        rng = np.random.default_rng(22)
        for _ in range(30):
            circ, theta = random_circuit(3, 12, rng)
            s = random_state(3, rng)
            bound = bind(circ, theta)
            back = execute(adjoint(bound), execute(bound, s))
            np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-10)

    def test_adjoint_involution(self):
        rng = np.random.default_rng(23)
        circ, theta = random_circuit(3, 10, rng)
        bound = bind(circ, theta)
        twice = adjoint(adjoint(bound))
        s = random_state(3, rng)
        np.testing.assert_allclose(
            execute(twice, s).amplitudes, execute(bound, s).amplitudes, atol=1e-12
        )


class TestDagDepth:
    def test_empty(self):
        assert dag_depth(circuit_from_gates(3, [])) == 0

    def test_disjoint_column(self):
        circ = circuit_from_gates(3, [GateSpec("RY", (q,), q) for q in range(3)])
        assert dag_depth(circ) == 1

    def test_serial_chain(self):
        circ = circuit_from_gates(1, [GateSpec("RY", (0,), k) for k in range(5)])
        assert dag_depth(circ) == 5

    def test_two_qubit_gate_synchronizes(self):
        gates = [GateSpec("RY", (0,), 0), GateSpec("MCZ", (0, 1)), GateSpec("RY", (1,), 1)]
        assert dag_depth(circuit_from_gates(2, gates)) == 3

    def test_depth_monotone_under_append(self):
        rng = np.random.default_rng(24)
        circ, _ = random_circuit(3, 15, rng)
        for cut in range(len(circ.gates)):
            prefix = circuit_from_gates(3, circ.gates[: cut + 1])
            shorter = circuit_from_gates(3, circ.gates[:cut])
            assert dag_depth(prefix) >= dag_depth(shorter)


class TestDenseUnitary:
    def test_empty_is_identity(self):
        u = dense_unitary(bind(circuit_from_gates(2, []), []))
        np.testing.assert_allclose(u, np.eye(4))

    def test_cz_matrix(self):
        u = dense_unitary(bind(circuit_from_gates(2, [GateSpec("MCZ", (0, 1))]), []))
        np.testing.assert_allclose(u, np.diag([1, 1, 1, -1]))

    def test_unitarity(self):
        rng = np.random.default_rng(25)
        for _ in range(10):
            circ, theta = random_circuit(3, 10, rng)
            u = dense_unitary(bind(circ, theta))
            np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-10)

    def test_matches_execute_columns(self):
        rng = np.random.default_rng(26)
        circ, theta = random_circuit(2, 8, rng)
        bound = bind(circ, theta)
        u = dense_unitary(bound)
        out = execute(bound, new_zero_state(2))
        np.testing.assert_allclose(u[:, 0], out.amplitudes, atol=1e-12)


class TestTextRoundTrip:
    def test_round_trip(self):
        rng = np.random.default_rng(27)
        circ, _ = random_circuit(3, 12, rng)
        assert from_text(to_text(circ)) == circ

    def test_bad_kind_rejected(self):
        with pytest.raises(ValidationError):
            from_text("# n_qubits=2\nSWAP 0,1\n")
