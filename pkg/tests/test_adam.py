import math

import numpy as np
import pytest

from stgan_nd.errors import NumericError, ShapeError
from stgan_nd.nn import AdamState, adam_step


def reference_update(w, g, lr, beta1, beta2, eps, m, v, t):
    """Plain-float Adam step, written out move for move."""
    m = beta1 * m + (1.0 - beta1) * g
    v = beta2 * v + (1.0 - beta2) * g * g
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    return w - lr * m_hat / (math.sqrt(v_hat) + eps), m, v


def test_first_step_matches_hand_computation():
    params = [np.array([0.0])]
    grads = [np.array([1.0])]
    state = AdamState.for_params(params, 0.001, beta1=0.5, beta2=0.999)
    adam_step(state, params, grads)
    expected, _, _ = reference_update(0.0, 1.0, 0.001, 0.5, 0.999, state.epsilon, 0.0, 0.0, 1)
    assert abs(params[0][0] - expected) < 1e-10
    # bias correction puts the first move at almost exactly -lr
    assert abs(params[0][0] + 0.001) < 1e-9
    assert state.step_count == 1


def test_multiple_steps_match_reference():
    params = [np.array([0.3])]
    state = AdamState.for_params(params, 0.01, beta1=0.5, beta2=0.9)
    w, m, v = 0.3, 0.0, 0.0
    rng = np.random.default_rng(0)
    for t in range(1, 30):
        g = float(rng.standard_normal())
        adam_step(state, params, [np.array([g])])
        w, m, v = reference_update(w, g, 0.01, 0.5, 0.9, state.epsilon, m, v, t)
        assert abs(params[0][0] - w) < 1e-10


def test_zero_gradient_is_fixed_point():
    params = [np.array([1.5, -2.0]), np.array([[0.25]])]
    state = AdamState.for_params(params, 0.01)
    before = [p.copy() for p in params]
    for _ in range(5):
        adam_step(state, params, [np.zeros(2), np.zeros((1, 1))])
    for p, q in zip(params, before):
        np.testing.assert_array_equal(p, q)


def test_learning_rate_decay_halves_after_many_steps():
    # decay 1e-6 after 1e6 completed steps scales the rate by 1/(1+1)
    def delta(decay):
        params = [np.array([0.0])]
        state = AdamState.for_params(params, 0.001, beta1=0.5)
        state.decay = decay
        state.step_count = 10 ** 6
        adam_step(state, params, [np.array([1.0])])
        return params[0][0]

    assert abs(delta(1e-6) / delta(0.0) - 0.5) < 1e-9


def test_weight_l2_contributes_gradient():
    params_a = [np.array([2.0])]
    state_a = AdamState.for_params(params_a, 0.001)
    adam_step(state_a, params_a, [np.array([0.0])], weight_l2=0.1)

    params_b = [np.array([2.0])]
    state_b = AdamState.for_params(params_b, 0.001)
    adam_step(state_b, params_b, [np.array([0.2])])  # lambda * w = 0.1 * 2
    np.testing.assert_allclose(params_a[0], params_b[0])
    # and zero lambda with zero grad stays put
    params_c = [np.array([2.0])]
    adam_step(AdamState.for_params(params_c, 0.001), params_c, [np.array([0.0])])
    assert params_c[0][0] == 2.0


def test_nan_gradient_raises_and_leaves_state_untouched():
    params = [np.array([1.0])]
    state = AdamState.for_params(params, 0.01)
    adam_step(state, params, [np.array([0.5])])
    value = params[0].copy()
    moment = state.first_moment[0].copy()
    with pytest.raises(NumericError):
        adam_step(state, params, [np.array([np.nan])])
    with pytest.raises(NumericError):
        adam_step(state, params, [np.array([np.inf])])
    np.testing.assert_array_equal(params[0], value)
    np.testing.assert_array_equal(state.first_moment[0], moment)
    assert state.step_count == 1


def test_shape_mismatch_raises():
    params = [np.zeros((2, 2))]
    state = AdamState.for_params(params, 0.01)
    with pytest.raises(ShapeError):
        adam_step(state, params, [np.zeros(3)])
    with pytest.raises(ShapeError):
        adam_step(state, params, [])


def test_accumulators_mirror_parameter_shapes():
    params = [np.zeros((4, 3)), np.zeros(3)]
    state = AdamState.for_params(params, 0.01)
    assert [m.shape for m in state.first_moment] == [(4, 3), (3,)]
    assert [v.shape for v in state.second_moment] == [(4, 3), (3,)]
