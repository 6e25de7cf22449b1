"""Adam and quantum-natural-gradient training loops over the distance cost."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cost import CostContext, cost, fubini_study_metric, gradient
from .statevector import ValidationError


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon_hat: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning rate must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValidationError("Adam moment decays must lie in [0, 1)")


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n_params: int) -> "AdamState":
        return cls(m=np.zeros(n_params), v=np.zeros(n_params))


@dataclass(frozen=True)
class QngConfig:
    learning_rate: float = 0.1
    regularization: float = 1e-3

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning rate must be positive")
        if self.regularization <= 0:
            raise ValidationError("regularization must be positive")


@dataclass
class TrainingTrace:
    cost_history: list[float]
    theta_final: np.ndarray
    iterations_run: int
    wall_time: float
    error: str | None = None


def adam_step(cfg: AdamConfig, state: AdamState, theta: np.ndarray, grad: np.ndarray):
    """One bias-corrected Adam update; returns (new state, new theta)."""
    if theta.shape != grad.shape or theta.shape != state.m.shape:
        raise ValidationError("parameter/gradient/state dimensions disagree")
    t = state.t + 1
    m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad
    v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad**2
    m_hat = m / (1.0 - cfg.beta1**t)
    v_hat = v / (1.0 - cfg.beta2**t)
    theta_new = theta - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon_hat)
    return AdamState(m=m, v=v, t=t), theta_new


def qng_step(cfg: QngConfig, theta: np.ndarray, grad: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """theta - lr * (g + lambda I)^-1 grad via a symmetric positive-definite solve."""
    reg = metric + cfg.regularization * np.eye(metric.shape[0])
    try:
        direction = scipy.linalg.solve(reg, grad, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"natural-gradient solve failed: {exc}") from exc
    if not np.all(np.isfinite(direction)):
        raise ArithmeticError("natural-gradient solve produced non-finite step")
    return theta - cfg.learning_rate * direction


def train(ctx: CostContext, optimizer, iterations: int = 100, seed=0,
          convergence_threshold: float | None = None) -> TrainingTrace:
    """Fixed-iteration training from a uniform [0, 2pi) initialization.

    optimizer is an AdamConfig or QngConfig. The QNG metric is always
    computed from the noiseless simulator state, also in shots mode where
    the cost and gradient themselves are sampled. Numeric failures abort
    but preserve the partial trace.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=ctx.ansatz.n_params)
    use_qng = isinstance(optimizer, QngConfig)
    adam_state = AdamState.zeros(ctx.ansatz.n_params) if isinstance(optimizer, AdamConfig) else None

    history: list[float] = []
    error = None
    start = time.perf_counter()
    for it in range(iterations):
        try:
            grad = gradient(ctx, theta, seed_offset=it)
            if isinstance(optimizer, AdamConfig):
                adam_state, theta = adam_step(optimizer, adam_state, theta, grad)
            elif use_qng:
                metric = fubini_study_metric(ctx.ansatz, theta)
                theta = qng_step(optimizer, theta, grad, metric)
            c = cost(ctx, theta, eval_seed=(ctx.mode.seed, it, 0, 1))
        except (ArithmeticError, np.linalg.LinAlgError) as exc:
            error = str(exc)
            break
        history.append(float(min(max(c, 0.0), 1.0)))
        if convergence_threshold is not None and c < convergence_threshold:
            break
    return TrainingTrace(
        cost_history=history,
        theta_final=theta,
        iterations_run=len(history),
        wall_time=time.perf_counter() - start,
        error=error,
    )
