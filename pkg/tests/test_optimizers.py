import numpy as np
import pytest

from vqprep.ansatz import AnsatzConfig, AnsatzKind, build_ansatz
from vqprep.cost import CostContext, EvaluationMode
from vqprep.optimizers import (
    AdamConfig,
    AdamState,
    QngConfig,
    adam_step,
    qng_step,
    train,
)
from vqprep.statevector import ValidationError
from vqprep.targets import completed_unitary, make_target


def ghz_context(n=3, layers=2, mode=None):
    anz = build_ansatz(AnsatzConfig(AnsatzKind.G2, n, layers))
    return CostContext(anz, completed_unitary(make_target("ghz", n)),
                       mode or EvaluationMode.exact())


class TestAdamStep:
    def test_zero_gradient_no_move(self):
        theta = np.array([0.5, 1.5])
        _, out = adam_step(AdamConfig(), AdamState.zeros(2), theta, np.zeros(2))
        np.testing.assert_array_equal(out, theta)

    def test_first_step_magnitude(self):
        # with bias correction the first update is ~lr regardless of scale
        cfg = AdamConfig(learning_rate=0.1)
        for c in (1e-4, 1.0, 100.0):
            _, out = adam_step(cfg, AdamState.zeros(1), np.zeros(1), np.array([c]))
            assert abs(abs(out[0]) - 0.1) < 1e-4

    def test_step_direction_opposes_gradient(self):
        _, out = adam_step(AdamConfig(), AdamState.zeros(2), np.zeros(2), np.array([3.0, -2.0]))
        assert out[0] < 0 < out[1]

    def test_state_advances(self):
        state, _ = adam_step(AdamConfig(), AdamState.zeros(2), np.zeros(2), np.ones(2))
        assert state.t == 1
        assert np.all(state.m > 0)

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            AdamConfig(learning_rate=0.0)
        with pytest.raises(ValidationError):
            AdamConfig(beta1=1.0)


class TestQngStep:
    def test_diagonal_metric(self):
        # metric diag(4, 1) rescales the two components by 1/4 and 1
        theta = np.zeros(2)
        out = qng_step(QngConfig(learning_rate=1.0, regularization=1e-12),
                       theta, np.array([1.0, 1.0]), np.diag([4.0, 1.0]))
        np.testing.assert_allclose(out, [-0.25, -1.0], atol=1e-9)

    def test_identity_metric_is_gradient_descent(self):
        out = qng_step(QngConfig(learning_rate=0.1, regularization=1e-12),
                       np.zeros(2), np.array([1.0, 2.0]), np.eye(2))
        np.testing.assert_allclose(out, [-0.1, -0.2], atol=1e-9)

    def test_regularization_bounds_step(self):
        # step norm <= lr * |grad| / lambda even for a singular metric
        cfg = QngConfig(learning_rate=0.1, regularization=0.01)
        grad = np.array([1.0, 1.0])
        out = qng_step(cfg, np.zeros(2), grad, np.zeros((2, 2)))
        assert np.linalg.norm(out) <= 0.1 * np.linalg.norm(grad) / 0.01 + 1e-9

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            QngConfig(regularization=0.0)


class TestTrain:
    def test_deterministic(self):
        ctx = ghz_context()
        a = train(ctx, AdamConfig(), iterations=20, seed=3)
        b = train(ctx, AdamConfig(), iterations=20, seed=3)
        assert a.cost_history == b.cost_history
        np.testing.assert_array_equal(a.theta_final, b.theta_final)

    def test_trace_shape_and_range(self):
        trace = train(ghz_context(), AdamConfig(), iterations=30, seed=4)
        assert trace.iterations_run == 30
        assert len(trace.cost_history) == 30
        assert all(0.0 <= c <= 1.0 for c in trace.cost_history)
        assert trace.error is None

    def test_adam_converges_ghz3(self):
        trace = train(ghz_context(), AdamConfig(), iterations=100, seed=5)
        assert trace.cost_history[-1] < 0.05

    def test_qng_converges_ghz3(self):
        trace = train(ghz_context(), QngConfig(), iterations=100, seed=5)
        assert trace.cost_history[-1] < 0.1

    def test_qng_fewer_iterations_than_adam(self):
        # statistical ordering claim at fixed seeds

        def first_below(cfg, i):
            hist = train(ghz_context(), cfg, iterations=100, seed=(42, i)).cost_history
            return next((k for k, c in enumerate(hist) if c < 0.1), 100)

        adam = np.median([first_below(AdamConfig(), i) for i in range(10)])
        qng = np.median([first_below(QngConfig(), i) for i in range(10)])
        assert qng < adam

    def test_convergence_threshold_stops_early(self):
        trace = train(ghz_context(), AdamConfig(), iterations=100, seed=5,
                      convergence_threshold=0.2)
        assert trace.iterations_run < 100
        assert trace.cost_history[-1] < 0.2

    def test_shots_mode_trains(self):
        ctx = ghz_context(mode=EvaluationMode.with_shots(10_000, 3))
        trace = train(ctx, QngConfig(), iterations=60, seed=11)
        assert trace.cost_history[-1] < 0.4
