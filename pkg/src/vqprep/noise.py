"""Readout-error channel, calibration matrices, and direct-inversion mitigation.

The channel flips each measured bit independently with probability
epsilon, i.e. the 2^N distribution is multiplied by the N-fold tensor
power of [[1-e, e], [e, 1-e]]. Mitigation solves the calibration system
directly and projects back onto the simplex by clipping and renormalizing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import ProbabilityVector, ShotCounts, ValidationError, sample_counts


class MitigationError(RuntimeError):
    """Calibration matrix unusable for direct inversion."""


@dataclass(frozen=True)
class ReadoutNoiseModel:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise ValidationError(f"readout error rate must be in [0, 0.5), got {self.epsilon}")

    def single_qubit_matrix(self) -> np.ndarray:
        e = self.epsilon
        return np.array([[1.0 - e, e], [e, 1.0 - e]])


@dataclass(frozen=True)
class CalibrationMatrix:
    n_qubits: int
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64)
        object.__setattr__(self, "m", m)
        dim = 2**self.n_qubits
        if m.shape != (dim, dim):
            raise ValidationError(f"calibration matrix must be {dim}x{dim}")
        if np.any(m < 0):
            raise ValidationError("calibration matrix entries must be nonnegative")
        if np.max(np.abs(m.sum(axis=0) - 1.0)) > 1e-9:
            raise ValidationError("calibration matrix columns must sum to 1")

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.m))


def apply_readout_noise_array(probs: np.ndarray, n_qubits: int, model: ReadoutNoiseModel) -> np.ndarray:
    if model.epsilon == 0.0:
        return probs.copy()
    conf = model.single_qubit_matrix()
    out = probs.reshape((2,) * n_qubits).copy()
    for q in range(n_qubits):
        out = np.moveaxis(np.tensordot(conf, np.moveaxis(out, q, 0), axes=1), 0, q)
    return out.reshape(-1)


def apply_readout_noise(probs: ProbabilityVector, model: ReadoutNoiseModel) -> ProbabilityVector:
    return ProbabilityVector(probs.n_qubits, apply_readout_noise_array(probs.probs, probs.n_qubits, model))


def analytic_calibration_column(n_qubits: int, model: ReadoutNoiseModel, basis_index: int) -> np.ndarray:
    one_hot = np.zeros(2**n_qubits)
    one_hot[basis_index] = 1.0
    return apply_readout_noise_array(one_hot, n_qubits, model)


def build_calibration_matrix(n_qubits: int, model: ReadoutNoiseModel, shots: int | None = 10_000,
                             seed=0) -> CalibrationMatrix:
    """Empirical calibration: one noisy basis-state preparation per column.

    shots=None yields the exact analytic channel matrix.
    """
    dim = 2**n_qubits
    mat = np.empty((dim, dim))
    for j in range(dim):
        column = analytic_calibration_column(n_qubits, model, j)
        if shots is not None:
            counts = sample_counts(ProbabilityVector(n_qubits, column), shots, (seed, j))
            column = counts.frequencies(n_qubits)
        mat[:, j] = column
    return CalibrationMatrix(n_qubits, mat)


def mitigate(cal: CalibrationMatrix, noisy: ProbabilityVector) -> ProbabilityVector:
    """Direct inversion: solve M x = p_noisy, clip negatives, renormalize."""
    if noisy.n_qubits != cal.n_qubits:
        raise ValidationError("calibration matrix and distribution sizes differ")
    cond = cal.condition_number()
    if not np.isfinite(cond) or cond > 1e8:
        raise MitigationError(f"calibration matrix is ill-conditioned (cond={cond:.3e})")
    x = np.linalg.solve(cal.m, noisy.probs)
    x = np.clip(x, 0.0, None)
    total = x.sum()
    if total <= 0.0:
        raise MitigationError("mitigated distribution vanished after clipping")
    return ProbabilityVector(noisy.n_qubits, x / total)


def mitigate_counts(cal: CalibrationMatrix, counts: ShotCounts, n_qubits: int) -> ProbabilityVector:
    return mitigate(cal, ProbabilityVector(n_qubits, counts.frequencies(n_qubits)))


def save_calibration(cal: CalibrationMatrix, path):
    np.savetxt(path, cal.m, header=f"n_qubits={cal.n_qubits}")


def load_calibration(path) -> CalibrationMatrix:
    m = np.loadtxt(path)
    n = int(np.log2(m.shape[0]))
    return CalibrationMatrix(n, m)
