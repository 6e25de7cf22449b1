"""Dense statevector simulation of N-qubit registers.

Convention used everywhere in this package: qubit 0 is the most
significant bit of the basis index, so for n qubits basis index b has
qubit q equal to ``(b >> (n - 1 - q)) & 1``. States are compared only via
overlaps, never amplitude-wise, since global phase is unobservable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend

MAX_QUBITS = 20

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


class ValidationError(ValueError):
    """Inconsistent or out-of-contract input."""


class CapacityError(ValidationError):
    """Register size outside the supported range."""


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValidationError(
                f"amplitude array must have length 2^{self.n_qubits}, got shape {self.amplitudes.shape}"
            )

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class ProbabilityVector:
    n_qubits: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.shape != (2**self.n_qubits,):
            raise ValidationError("probability vector length must be 2^n_qubits")


@dataclass
class ShotCounts:
    counts: dict[int, int]
    total_shots: int

    def frequencies(self, n_qubits: int) -> np.ndarray:
        freq = np.zeros(2**n_qubits)
        for idx, c in self.counts.items():
            freq[idx] = c / self.total_shots
        return freq


def new_zero_state(n_qubits: int) -> StateVector:
    """|0...0> on n_qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    state = new_zero_state(n_qubits)
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """exp(-i*angle/2 * sigma_axis) as a 2x2 matrix."""
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if axis == "z":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=np.complex128)
    raise ValidationError(f"unknown rotation axis {axis!r}")


def _check_qubit(state: StateVector, qubit: int):
    if not 0 <= qubit < state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.n_qubits}-qubit state")


def apply_single_qubit_rotation(state: StateVector, axis: str, angle: float, qubit: int) -> StateVector:
    if not np.isfinite(angle):
        raise ValidationError("rotation angle must be finite")
    _check_qubit(state, qubit)
    m = rotation_matrix(axis, angle)
    out = state.copy()
    backend.apply_1q(out.amplitudes, out.n_qubits, qubit, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return out


def apply_hadamard(state: StateVector, qubit: int) -> StateVector:
    _check_qubit(state, qubit)
    out = state.copy()
    m = _H_MATRIX
    backend.apply_1q(out.amplitudes, out.n_qubits, qubit, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return out


def mcz_mask(n_qubits: int, qubits) -> int:
    qubits = tuple(qubits)
    if len(set(qubits)) != len(qubits):
        raise IndexError(f"duplicate qubit indices in {qubits}")
    mask = 0
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise IndexError(f"qubit {q} out of range for {n_qubits}-qubit state")
        mask |= 1 << (n_qubits - 1 - q)
    return mask


def apply_multi_controlled_z(state: StateVector, qubits) -> StateVector:
    """Negate the amplitude of every basis state with all listed qubits set."""
    qubits = tuple(qubits)
    if len(qubits) < 2:
        raise ValidationError("multi-controlled Z needs at least 2 qubits")
    mask = mcz_mask(state.n_qubits, qubits)
    out = state.copy()
    backend.apply_mcz(out.amplitudes, out.n_qubits, mask)
    return out


def apply_controlled_rotation(state: StateVector, control: int, target: int, axis: str, angle: float) -> StateVector:
    if control == target:
        raise IndexError("control and target must differ")
    _check_qubit(state, control)
    _check_qubit(state, target)
    m = rotation_matrix(axis, angle)
    out = state.copy()
    backend.apply_c1q(out.amplitudes, out.n_qubits, control, target, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return out


def probabilities(state: StateVector) -> ProbabilityVector:
    return ProbabilityVector(state.n_qubits, np.abs(state.amplitudes) ** 2)


def sample_counts(probs: ProbabilityVector, shots: int, rng_seed) -> ShotCounts:
    """Multinomial sample of measurement outcomes; deterministic per seed.

    rng_seed may be an int or any numpy SeedSequence entropy (e.g. a tuple),
    which gives cheap derived independent streams.
    """
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p = np.asarray(probs.probs, dtype=np.float64)
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError("invalid probability vector")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    draws = rng.multinomial(shots, p)
    counts = {int(i): int(c) for i, c in enumerate(draws) if c > 0}
    return ShotCounts(counts=counts, total_shots=shots)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError("inner product requires equal qubit counts")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, the phase-insensitive overlap."""
    return abs(inner_product(a, b)) ** 2
