"""Target entangled states, explicit preparation circuits, and completed unitaries.

The training loop only ever uses the target through V-dagger; any unitary
whose first column equals the target amplitudes works, so by default V is
a Gram-Schmidt completion of the target vector. Explicit circuits for GHZ
and W exist to populate the depth comparison report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import BoundCircuit, Circuit, GateSpec, bind, circuit_from_gates, execute
from .statevector import StateVector, ValidationError, new_zero_state


@dataclass(frozen=True)
class TargetState:
    name: str
    n_qubits: int
    state: StateVector


@dataclass(frozen=True)
class TargetUnitary:
    mode: str  # "explicit_circuit" | "completed_matrix"
    circuit: Circuit | None = None
    matrix: np.ndarray | None = None


def ghz_state(n_qubits: int) -> TargetState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    if n_qubits < 2:
        raise ValidationError("GHZ needs at least 2 qubits")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return TargetState("GHZ", n_qubits, StateVector(n_qubits, amps))


def w_state(n_qubits: int) -> TargetState:
    """Equal superposition of all weight-1 basis states."""
    if n_qubits < 2:
        raise ValidationError("W needs at least 2 qubits")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    for q in range(n_qubits):
        amps[1 << (n_qubits - 1 - q)] = 1.0 / np.sqrt(n_qubits)
    return TargetState("W", n_qubits, StateVector(n_qubits, amps))


# Printed 3-qubit AME coefficients; squared magnitudes sum to ~1.000674,
# so the state is renormalized after construction.
AME3_RAW = {
    0b000: 0.27,
    0b100: 0.377,
    0b010: 0.326,
    0b001: 0.363,
    0b111: 0.74 * np.exp(-0.79j * np.pi),
}


def ame3_raw_norm_squared() -> float:
    return float(sum(abs(a) ** 2 for a in AME3_RAW.values()))


def ame3_state() -> TargetState:
    amps = np.zeros(8, dtype=np.complex128)
    for idx, a in AME3_RAW.items():
        amps[idx] = a
    amps /= np.linalg.norm(amps)
    return TargetState("AME3", 3, StateVector(3, amps))


def custom_target(amplitudes, name: str = "custom") -> TargetState:
    amps = np.asarray(amplitudes, dtype=np.complex128)
    n = int(np.log2(amps.shape[0]))
    if 2**n != amps.shape[0]:
        raise ValidationError("custom target length must be a power of 2")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-6:
        raise ValidationError(f"custom target norm {norm:.8f} is outside the 1e-6 tolerance")
    return TargetState(name, n, StateVector(n, amps / norm))


def load_custom_target(path) -> TargetState:
    """Text format: one `index real imag` triple per line; missing indices are zero."""
    entries = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            idx_s, re_s, im_s = line.split()
            entries[int(idx_s)] = float(re_s) + 1j * float(im_s)
    if not entries:
        raise ValidationError(f"no amplitudes found in {path}")
    dim = 1
    while dim <= max(entries):
        dim *= 2
    amps = np.zeros(dim, dtype=np.complex128)
    for idx, a in entries.items():
        amps[idx] = a
    return custom_target(amps)


def _cx_gates(control: int, target: int) -> list[GateSpec]:
    # CX = H(t) CZ(c,t) H(t), exact in this gate set
    return [GateSpec("H", (target,)), GateSpec("MCZ", (control, target)), GateSpec("H", (target,))]


def ghz_circuit(n_qubits: int) -> Circuit:
    """H on qubit 0, then CX fanning out from qubit 0 to every other qubit."""
    if n_qubits < 2:
        raise ValidationError("GHZ needs at least 2 qubits")
    gates = [GateSpec("H", (0,))]
    for t in range(1, n_qubits):
        gates.extend(_cx_gates(0, t))
    return circuit_from_gates(n_qubits, gates)


def _cry_gates(control: int, target: int, slot: int) -> list[GateSpec]:
    # controlled-Ry by conjugating controlled-Rx with Rz(+-pi/2) on the target
    return [
        GateSpec("RZ", (target,), slot),
        GateSpec("CRX", (control, target), slot + 1),
        GateSpec("RZ", (target,), slot + 2),
    ]


def w_circuit(n_qubits: int) -> tuple[Circuit, np.ndarray]:
    """Excitation-spreading W preparation; returns (circuit, bound angles).

    Rx(pi) puts the excitation on qubit 0 (up to global phase), then a chain
    of controlled-Ry rotations splits amplitude down the register, each
    followed by CX to move the excitation marker.
    """
    if n_qubits < 2:
        raise ValidationError("W needs at least 2 qubits")
    gates = []
    theta = []
    slot = 0
    gates.append(GateSpec("RX", (0,), slot))
    theta.append(np.pi)
    slot += 1
    for i in range(n_qubits - 1):
        remaining = n_qubits - i
        angle = 2.0 * np.arccos(np.sqrt(1.0 / remaining))
        gates.extend(_cry_gates(i, i + 1, slot))
        theta.extend([-np.pi / 2.0, angle, np.pi / 2.0])
        slot += 3
        gates.extend(_cx_gates(i + 1, i))
    return circuit_from_gates(n_qubits, gates), np.asarray(theta)


def target_circuit(target: TargetState) -> BoundCircuit | None:
    """Explicit preparation circuit where one exists (GHZ, W); None otherwise."""
    if target.name == "GHZ":
        circ = ghz_circuit(target.n_qubits)
        return bind(circ, np.zeros(circ.n_params))
    if target.name == "W":
        circ, theta = w_circuit(target.n_qubits)
        return bind(circ, theta)
    return None


def completed_unitary(target: TargetState) -> TargetUnitary:
    """Dense unitary whose column 0 is the target; Gram-Schmidt completion."""
    dim = 2**target.n_qubits
    cols = [target.state.amplitudes / np.linalg.norm(target.state.amplitudes)]
    for j in range(dim):
        if len(cols) == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[j] = 1.0
        for c in cols:
            v -= np.vdot(c, v) * c
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            cols.append(v / norm)
    mat = np.column_stack(cols)
    return TargetUnitary(mode="completed_matrix", matrix=mat)


def make_target(name: str, n_qubits: int) -> TargetState:
    name_u = name.upper()
    if name_u == "GHZ":
        return ghz_state(n_qubits)
    if name_u == "W":
        return w_state(n_qubits)
    if name_u in ("AME", "AME3"):
        if n_qubits != 3:
            raise ValidationError("AME target is only defined for 3 qubits")
        return ame3_state()
    raise ValidationError(f"unknown target {name!r}")
