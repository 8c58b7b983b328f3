"""Cross-entropy losses and their gradients.

Every loss returns a ``LossValue`` whose ``gradient`` is the derivative of
the *mean* per-sample loss with respect to the predictions, so it can be
fed straight into ``Network.backward``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, ShapeError

CLAMP_EPS = 1e-12


@dataclass
class LossValue:
    scalar: float
    per_sample: np.ndarray
    # single matrix for the plain losses; list of per-head matrices for a composite
    gradient: np.ndarray | list[np.ndarray]


def binary_cross_entropy(pred, target) -> LossValue:
    """Validity loss: -(s*log(v) + (1-s)*log(1-v)) per sample.

    ``pred`` is the sigmoid output, shaped (n,) or (n, 1); predictions are
    clamped away from 0 and 1 before the logs.
    """
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ShapeError(f"pred {pred.shape} vs target {target.shape}")
    v = np.clip(pred, CLAMP_EPS, 1.0 - CLAMP_EPS)
    s = target
    elementwise = -(s * np.log(v) + (1.0 - s) * np.log(1.0 - v))
    per_sample = elementwise.reshape(pred.shape[0], -1).mean(axis=1)
    n = pred.shape[0]
    width = pred.size // n
    grad = ((1.0 - s) / (1.0 - v) - s / v) / (n * width)
    return LossValue(float(per_sample.mean()), per_sample, grad)


def categorical_cross_entropy(pred, target) -> LossValue:
    """Classification loss: -sum_c t_c * log(y_c) per sample.

    Targets may be stochastic vectors; each row must still sum to 1.
    """
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.ndim != 2 or pred.shape != target.shape:
        raise ShapeError(f"pred {pred.shape} vs target {target.shape}")
    sums = target.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-6):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise DataError(f"target row {bad} sums to {sums[bad]:.8f}, expected 1")
    y = np.clip(pred, CLAMP_EPS, 1.0)
    per_sample = -(target * np.log(y)).sum(axis=1)
    n = pred.shape[0]
    grad = -target / y / n
    return LossValue(float(per_sample.mean()), per_sample, grad)


def composite_loss(l1: LossValue, l2: LossValue, w1: float, w2: float) -> LossValue:
    """Weighted combination of two head losses.

    The gradient is a list ``[w1*grad1, w2*grad2]``, ready to be passed to
    ``Network.backward`` as the per-head loss gradients.
    """
    if l1.per_sample.shape != l2.per_sample.shape:
        raise ShapeError("losses computed on different batch sizes")
    per_sample = w1 * l1.per_sample + w2 * l2.per_sample
    gradient = [w1 * l1.gradient, w2 * l2.gradient]
    return LossValue(w1 * l1.scalar + w2 * l2.scalar, per_sample, gradient)
