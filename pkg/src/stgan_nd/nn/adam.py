"""Adam optimizer with bias correction and per-update learning-rate decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError, ShapeError


@dataclass
class AdamState:
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    decay: float = 0.0
    step_count: int = 0
    first_moment: list[np.ndarray] = field(default_factory=list)
    second_moment: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_params(cls, params, learning_rate, beta1=0.9, beta2=0.999,
                   epsilon=1e-8, decay=0.0) -> "AdamState":
        state = cls(learning_rate, beta1, beta2, epsilon, decay)
        state.first_moment = [np.zeros_like(p) for p in params]
        state.second_moment = [np.zeros_like(p) for p in params]
        return state


def adam_step(state: AdamState, params, grads, weight_l2: float = 0.0) -> None:
    """Apply one Adam update to ``params`` in place.

    The effective learning rate is lr / (1 + decay * step_count), with
    step_count taken before the update. ``weight_l2`` adds an L2 penalty
    gradient `lambda * w` before the moment update. NaN or inf gradients
    raise NumericError and leave parameters and state untouched.
    """
    if len(params) != len(grads):
        raise ShapeError("params and grads differ in length")
    if not state.first_moment:
        state.first_moment = [np.zeros_like(p) for p in params]
        state.second_moment = [np.zeros_like(p) for p in params]
    if len(state.first_moment) != len(params):
        raise ShapeError("optimizer state does not match parameter list")
    for p, g, m in zip(params, grads, state.first_moment):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeError(
                f"shape mismatch: param {p.shape}, grad {g.shape}, moment {m.shape}"
            )
    for g in grads:
        if not np.all(np.isfinite(g)):
            raise NumericError("non-finite gradient passed to adam_step")

    lr = state.learning_rate / (1.0 + state.decay * state.step_count)
    t = state.step_count + 1
    bias1 = 1.0 - state.beta1 ** t
    bias2 = 1.0 - state.beta2 ** t
    # algebraically identical to lr * (m/bias1) / (sqrt(v/bias2) + eps),
    # but with the bias corrections folded into two scalars
    alpha = lr * np.sqrt(bias2) / bias1
    eps_hat = state.epsilon * np.sqrt(bias2)
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        if weight_l2 != 0.0:
            g = g + weight_l2 * p
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        sq = np.square(g)
        sq *= 1.0 - state.beta2
        v += sq
        denom = np.sqrt(v)
        denom += eps_hat
        np.divide(m, denom, out=denom)
        denom *= alpha
        p -= denom
    state.step_count = t
