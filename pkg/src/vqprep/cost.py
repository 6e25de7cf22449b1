"""Cost, gradients, metric tensor, and the gradient-variance diagnostic.

The cost is the Fubini-Study distance sqrt(1 - p0), where p0 is the
probability of the all-zeros outcome after applying the ansatz and the
adjoint target unitary to |0...0>. Gradients of p0 use the exact
parameter-shift rule (all rotation generators have eigenvalues +-1/2);
the distance gradient follows by the chain rule with a small floor on the
denominator, since the square root is singular at p0 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import BoundCircuit, Circuit, bind, execute_inplace
from .noise import CalibrationMatrix, ReadoutNoiseModel, apply_readout_noise_array, mitigate
from .statevector import ProbabilityVector, ValidationError, sample_counts
from .targets import TargetUnitary

COST_FLOOR = 1e-6


class UnsupportedModeError(ValidationError):
    """Operation not available in the configured evaluation mode."""


@dataclass(frozen=True)
class EvaluationMode:
    kind: str = "exact"  # "exact" | "shots"
    shots: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "shots"):
            raise ValidationError(f"unknown evaluation mode {self.kind!r}")
        if self.kind == "shots" and self.shots < 1:
            raise ValidationError("shot count must be >= 1")

    @classmethod
    def exact(cls) -> "EvaluationMode":
        return cls("exact")

    @classmethod
    def with_shots(cls, shots: int = 10_000, seed: int = 0) -> "EvaluationMode":
        return cls("shots", shots, seed)


@dataclass
class CostContext:
    ansatz: Circuit
    target: TargetUnitary
    mode: EvaluationMode = field(default_factory=EvaluationMode.exact)
    noise: ReadoutNoiseModel | None = None
    mitigation: CalibrationMatrix | None = None

    def __post_init__(self):
        if self.mode.kind != "shots" and (self.noise is not None or self.mitigation is not None):
            raise ValidationError("noise and mitigation are only permitted in shots mode")
        if self.target.matrix is None:
            raise ValidationError("cost evaluation requires a dense target unitary")


def _final_amplitudes(ctx: CostContext, theta: np.ndarray) -> np.ndarray:
    """V-dagger U(theta) |0...0> as a raw amplitude buffer."""
    n = ctx.ansatz.n_qubits
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = 1.0
    execute_inplace(bind(ctx.ansatz, theta), amps)
    return ctx.target.matrix.conj().T @ amps


def pipeline_distribution(ctx: CostContext, theta) -> ProbabilityVector:
    amps = _final_amplitudes(ctx, np.asarray(theta, dtype=np.float64))
    return ProbabilityVector(ctx.ansatz.n_qubits, np.abs(amps) ** 2)


def overlap_probability(ctx: CostContext, theta, eval_seed=None) -> float:
    """p0: exact overlap in exact mode, empirical frequency in shots mode.

    eval_seed overrides the mode's base seed; gradient evaluations pass
    derived seeds so every shifted evaluation has its own stream.
    """
    dist = pipeline_distribution(ctx, theta)
    if ctx.mode.kind == "exact":
        return float(min(max(dist.probs[0], 0.0), 1.0))
    if ctx.noise is not None:
        dist = ProbabilityVector(dist.n_qubits, apply_readout_noise_array(dist.probs, dist.n_qubits, ctx.noise))
    seed = ctx.mode.seed if eval_seed is None else eval_seed
    counts = sample_counts(dist, ctx.mode.shots, seed)
    freq = counts.frequencies(dist.n_qubits)
    if ctx.mitigation is not None:
        freq = mitigate(ctx.mitigation, ProbabilityVector(dist.n_qubits, freq)).probs
    return float(min(max(freq[0], 0.0), 1.0))


def cost(ctx: CostContext, theta, eval_seed=None) -> float:
    """Fubini-Study distance sqrt(1 - p0), clamped into [0, 1]."""
    p0 = overlap_probability(ctx, theta, eval_seed=eval_seed)
    return float(np.sqrt(max(0.0, 1.0 - p0)))


def p0_gradient(ctx: CostContext, theta, seed_offset: int = 0) -> np.ndarray:
    """Parameter-shift gradient of p0: [p0(+pi/2) - p0(-pi/2)] / 2 per slot."""
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.empty_like(theta)
    for k in range(theta.shape[0]):
        shifted = theta.copy()
        shifted[k] += np.pi / 2.0
        plus = overlap_probability(ctx, shifted, eval_seed=(ctx.mode.seed, seed_offset, k + 1, 0))
        shifted[k] -= np.pi
        minus = overlap_probability(ctx, shifted, eval_seed=(ctx.mode.seed, seed_offset, k + 1, 1))
        grad[k] = (plus - minus) / 2.0
    return grad


def gradient(ctx: CostContext, theta, seed_offset: int = 0) -> np.ndarray:
    """Gradient of the distance; denominator floored to keep steps finite near p0 = 1."""
    theta = np.asarray(theta, dtype=np.float64)
    c = cost(ctx, theta, eval_seed=(ctx.mode.seed, seed_offset, 0, 0))
    return -p0_gradient(ctx, theta, seed_offset=seed_offset) / (2.0 * max(c, COST_FLOOR))


def _derivative_state(ansatz: Circuit, theta: np.ndarray, k: int) -> np.ndarray:
    """d/d theta_k of U(theta)|0...0> by generator insertion.

    Each rotation contributes -i/2 times its (possibly control-projected)
    Pauli generator right after the gate that carries slot k.
    """
    n = ansatz.n_qubits
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = 1.0
    idx = np.arange(2**n)
    from .circuits import apply_gate_inplace

    for g in ansatz.gates:
        angle = theta[g.param_slot] if g.param_slot is not None else None
        apply_gate_inplace(amps, n, g, angle)
        if g.param_slot == k:
            axis = {"RX": "x", "RY": "y", "RZ": "z", "CRX": "x", "CRZ": "z"}[g.kind]
            tq = g.qubits[-1]
            tbit = 1 << (n - 1 - tq)
            if g.kind in ("CRX", "CRZ"):
                cbit = 1 << (n - 1 - g.qubits[0])
                amps = np.where((idx & cbit).astype(bool), amps, 0.0)
            if axis == "x":
                amps = amps[idx ^ tbit]
            elif axis == "y":
                flipped = amps[idx ^ tbit]
                sign = np.where((idx & tbit).astype(bool), 1.0, -1.0)
                amps = 1j * sign * flipped
            else:
                sign = np.where((idx & tbit).astype(bool), -1.0, 1.0)
                amps = sign * amps
            amps = -0.5j * amps
            amps = np.ascontiguousarray(amps)
    return amps


def fubini_study_metric(ansatz: Circuit, theta) -> np.ndarray:
    """g_jk = Re[<d_j phi|d_k phi> - <d_j phi|phi><phi|d_k phi>], exact mode only."""
    theta = np.asarray(theta, dtype=np.float64)
    n = ansatz.n_qubits
    phi = np.zeros(2**n, dtype=np.complex128)
    phi[0] = 1.0
    execute_inplace(bind(ansatz, theta), phi)
    m = theta.shape[0]
    derivs = np.empty((m, 2**n), dtype=np.complex128)
    for k in range(m):
        derivs[k] = _derivative_state(ansatz, theta, k)
    overlaps = derivs @ phi.conj()  # <phi|d_k phi> conjugated -> <d_k phi|phi>* handled below
    gram = derivs.conj() @ derivs.T
    g = np.real(gram - np.outer(overlaps.conj(), overlaps))
    return (g + g.T) / 2.0


def gradient_variance(ansatz: Circuit, target: TargetUnitary, param_index: int,
                      n_samples: int, rng_seed) -> float:
    """Sample variance of the distance derivative over random initializations."""
    if n_samples < 2:
        raise ValidationError("variance needs at least 2 samples")
    ctx = CostContext(ansatz=ansatz, target=target, mode=EvaluationMode.exact())
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    samples = np.empty(n_samples)
    for i in range(n_samples):
        theta = rng.uniform(0.0, 2.0 * np.pi, size=ansatz.n_params)
        c = cost(ctx, theta)
        shifted = theta.copy()
        shifted[param_index] += np.pi / 2.0
        plus = overlap_probability(ctx, shifted)
        shifted[param_index] -= np.pi
        minus = overlap_probability(ctx, shifted)
        dp0 = (plus - minus) / 2.0
        samples[i] = -dp0 / (2.0 * max(c, COST_FLOOR))
    return float(np.var(samples, ddof=1))
