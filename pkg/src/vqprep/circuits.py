"""Parameterized circuit IR: gate sequences, binding, adjoints, DAG depth.

A Circuit is an ordered list of GateSpec entries over a fixed register.
Rotation gates reference parameter slots; binding attaches a concrete
angle vector. Depth is computed by greedy as-soon-as-possible layering
where every gate, regardless of arity, costs one layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .statevector import (
    CapacityError,
    StateVector,
    ValidationError,
    _H_MATRIX,
    basis_state,
    mcz_mask,
    rotation_matrix,
)

PARAMETERIZED_KINDS = ("RX", "RY", "RZ", "CRX", "CRZ")
FIXED_KINDS = ("H", "MCZ")
GATE_KINDS = PARAMETERIZED_KINDS + FIXED_KINDS

_ROTATION_AXIS = {"RX": "x", "RY": "y", "RZ": "z", "CRX": "x", "CRZ": "z"}


@dataclass(frozen=True)
class GateSpec:
    kind: str
    qubits: tuple[int, ...]
    param_slot: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(f"duplicate qubits in {self.kind} gate: {self.qubits}")
        arity = len(self.qubits)
        if self.kind in ("RX", "RY", "RZ", "H") and arity != 1:
            raise ValidationError(f"{self.kind} acts on exactly one qubit")
        if self.kind in ("CRX", "CRZ") and arity != 2:
            raise ValidationError(f"{self.kind} acts on exactly two qubits")
        if self.kind == "MCZ" and arity < 2:
            raise ValidationError("MCZ needs at least 2 qubits")
        if self.kind in PARAMETERIZED_KINDS:
            if self.param_slot is None or self.param_slot < 0:
                raise ValidationError(f"{self.kind} requires a parameter slot")
        elif self.param_slot is not None:
            raise ValidationError(f"{self.kind} carries no parameter")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[GateSpec, ...]
    n_params: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        slots = []
        for g in self.gates:
            if any(q >= self.n_qubits or q < 0 for q in g.qubits):
                raise ValidationError(f"gate {g} out of range for {self.n_qubits} qubits")
            if g.param_slot is not None:
                slots.append(g.param_slot)
        if sorted(slots) != list(range(self.n_params)):
            raise ValidationError(
                f"param slots must cover 0..{self.n_params - 1} exactly once, got {sorted(slots)}"
            )


@dataclass(frozen=True)
class BoundCircuit:
    circuit: Circuit
    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        object.__setattr__(self, "theta", theta)
        if theta.shape != (self.circuit.n_params,):
            raise ValidationError(
                f"theta must have length {self.circuit.n_params}, got {theta.shape}"
            )
        if not np.all(np.isfinite(theta)):
            raise ValidationError("theta entries must be finite")


def circuit_from_gates(n_qubits: int, gates) -> Circuit:
    """Build a Circuit, inferring n_params from the slots present."""
    gates = tuple(gates)
    slots = [g.param_slot for g in gates if g.param_slot is not None]
    return Circuit(n_qubits, gates, max(slots) + 1 if slots else 0)


def bind(circuit: Circuit, theta) -> BoundCircuit:
    return BoundCircuit(circuit, np.asarray(theta, dtype=np.float64))


def apply_gate_inplace(amps: np.ndarray, n_qubits: int, gate: GateSpec, angle: float | None):
    """Apply one gate to a raw amplitude buffer (the hot path)."""
    if gate.kind == "H":
        m = _H_MATRIX
        backend.apply_1q(amps, n_qubits, gate.qubits[0], m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    elif gate.kind == "MCZ":
        backend.apply_mcz(amps, n_qubits, mcz_mask(n_qubits, gate.qubits))
    elif gate.kind in ("RX", "RY", "RZ"):
        m = rotation_matrix(_ROTATION_AXIS[gate.kind], angle)
        backend.apply_1q(amps, n_qubits, gate.qubits[0], m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    else:  # CRX / CRZ
        m = rotation_matrix(_ROTATION_AXIS[gate.kind], angle)
        backend.apply_c1q(
            amps, n_qubits, gate.qubits[0], gate.qubits[1], m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        )


def execute_inplace(bound: BoundCircuit, amps: np.ndarray):
    n = bound.circuit.n_qubits
    theta = bound.theta
    for g in bound.circuit.gates:
        apply_gate_inplace(amps, n, g, theta[g.param_slot] if g.param_slot is not None else None)


def execute(bound: BoundCircuit, input_state: StateVector) -> StateVector:
    if input_state.n_qubits != bound.circuit.n_qubits:
        raise ValidationError("circuit and state qubit counts differ")
    out = input_state.copy()
    execute_inplace(bound, out.amplitudes)
    return out


def adjoint(bound: BoundCircuit) -> BoundCircuit:
    """Reverse gate order and negate all rotation angles; H and MCZ are self-adjoint."""
    rev = Circuit(bound.circuit.n_qubits, tuple(reversed(bound.circuit.gates)), bound.circuit.n_params)
    return BoundCircuit(rev, -bound.theta)


def dag_depth(circuit: Circuit) -> int:
    """ASAP layering depth: each gate lands one past the deepest gate sharing a qubit."""
    level = [0] * circuit.n_qubits
    depth = 0
    for g in circuit.gates:
        layer = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = layer
        depth = max(depth, layer)
    return depth


def dense_unitary(bound: BoundCircuit) -> np.ndarray:
    """Full 2^N x 2^N matrix of the bound circuit; small-N test oracle."""
    n = bound.circuit.n_qubits
    if n > 10:
        raise CapacityError("dense_unitary is capped at 10 qubits")
    dim = 2**n
    mat = np.empty((dim, dim), dtype=np.complex128)
    for b in range(dim):
        mat[:, b] = execute(bound, basis_state(n, b)).amplitudes
    return mat


def to_text(circuit: Circuit) -> str:
    """Line-oriented serialization: one gate per line, `KIND q0[,q1,...] [slot=k]`."""
    lines = [f"# n_qubits={circuit.n_qubits}"]
    for g in circuit.gates:
        parts = [g.kind, ",".join(str(q) for q in g.qubits)]
        if g.param_slot is not None:
            parts.append(f"slot={g.param_slot}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str, n_qubits: int | None = None) -> Circuit:
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "n_qubits=" in line and n_qubits is None:
                n_qubits = int(line.split("n_qubits=")[1].split()[0])
            continue
        parts = line.split()
        kind = parts[0]
        qubits = tuple(int(q) for q in parts[1].split(","))
        slot = None
        if len(parts) > 2:
            if not parts[2].startswith("slot="):
                raise ValidationError(f"malformed gate line: {raw!r}")
            slot = int(parts[2][len("slot="):])
        gates.append(GateSpec(kind, qubits, slot))
    if n_qubits is None:
        raise ValidationError("n_qubits not given and no header line present")
    return circuit_from_gates(n_qubits, gates)
