import math

import numpy as np
import pytest
from conftest import central_difference, relative_error

from stgan_nd.errors import DataError, ShapeError
from stgan_nd.nn import binary_cross_entropy, categorical_cross_entropy, composite_loss


def test_bce_known_values():
    half = binary_cross_entropy(np.array([0.5]), np.array([1.0]))
    assert abs(half.scalar - math.log(2.0)) < 1e-12
    near_perfect = binary_cross_entropy(np.array([1.0 - 1e-12]), np.array([1.0]))
    assert near_perfect.scalar < 1e-11
    # clamping keeps a confidently wrong prediction finite
    wrong = binary_cross_entropy(np.array([1.0]), np.array([0.0]))
    assert np.isfinite(wrong.scalar)


def test_bce_scalar_is_mean_of_per_sample():
    rng = np.random.default_rng(0)
    pred = rng.uniform(0.05, 0.95, (50, 1))
    target = rng.integers(0, 2, (50, 1)).astype(float)
    loss = binary_cross_entropy(pred, target)
    assert abs(loss.scalar - loss.per_sample.mean()) < 1e-9
    assert loss.per_sample.shape == (50,)
    assert loss.gradient.shape == pred.shape


def test_bce_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    pred = rng.uniform(0.1, 0.9, (12, 1))
    target = rng.integers(0, 2, (12, 1)).astype(float)
    loss = binary_cross_entropy(pred, target)
    numeric = central_difference(
        lambda: binary_cross_entropy(pred, target).scalar, pred, h=1e-7
    )
    assert relative_error(loss.gradient, numeric).max() < 1e-6


def test_bce_shape_mismatch():
    with pytest.raises(ShapeError):
        binary_cross_entropy(np.zeros((3, 1)), np.zeros((4, 1)))


def test_cce_known_values():
    onehot = np.zeros((1, 8))
    onehot[0, 3] = 1.0
    perfect = categorical_cross_entropy(onehot, onehot)
    assert abs(perfect.scalar) < 1e-10
    uniform = np.full((1, 8), 1.0 / 8.0)
    loss = categorical_cross_entropy(uniform, onehot)
    assert abs(loss.scalar - math.log(8.0)) < 1e-12


def test_cce_uniform_pred_loss_is_target_independent():
    # with a uniform prediction, -sum t_c log(1/n) = log n for any target
    # summing to one, stochastic targets included
    uniform = np.full((1, 8), 1.0 / 8.0)
    stochastic = np.full((1, 8), 0.1 / 7.0)
    stochastic[0, 2] = 0.9
    loss = categorical_cross_entropy(uniform, stochastic)
    assert abs(loss.scalar - math.log(8.0)) < 1e-12


def test_cce_rejects_bad_target_rows():
    pred = np.full((2, 4), 0.25)
    bad = np.full((2, 4), 0.3)
    with pytest.raises(DataError):
        categorical_cross_entropy(pred, bad)


def test_cce_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    raw = rng.uniform(0.1, 1.0, (9, 5))
    pred = raw / raw.sum(axis=1, keepdims=True)
    target = np.zeros((9, 5))
    target[np.arange(9), rng.integers(0, 5, 9)] = 1.0
    loss = categorical_cross_entropy(pred, target)
    numeric = central_difference(
        lambda: categorical_cross_entropy(pred, target).scalar, pred, h=1e-7
    )
    assert relative_error(loss.gradient, numeric).max() < 1e-6


def test_composite_weighting():
    rng = np.random.default_rng(1)
    pred_v = rng.uniform(0.2, 0.8, (6, 1))
    target_v = rng.integers(0, 2, (6, 1)).astype(float)
    raw = rng.uniform(0.1, 1.0, (6, 3))
    pred_c = raw / raw.sum(axis=1, keepdims=True)
    target_c = np.zeros((6, 3))
    target_c[:, 0] = 1.0

    l1 = binary_cross_entropy(pred_v, target_v)
    l2 = categorical_cross_entropy(pred_c, target_c)

    only_first = composite_loss(l1, l2, 1.0, 0.0)
    assert abs(only_first.scalar - l1.scalar) < 1e-12

    comp = composite_loss(l1, l2, 1.1, 1.0)
    assert abs(comp.scalar - (1.1 * l1.scalar + l2.scalar)) < 1e-12
    np.testing.assert_allclose(comp.gradient[0], 1.1 * l1.gradient)
    np.testing.assert_allclose(comp.gradient[1], 1.0 * l2.gradient)
    assert abs(comp.scalar - comp.per_sample.mean()) < 1e-9


def test_composite_example_arithmetic():
    # weights (1.1, 1.0) on losses 2 and 1 give 3.2
    from stgan_nd.nn import LossValue

    l1 = LossValue(2.0, np.full(4, 2.0), np.zeros((4, 1)))
    l2 = LossValue(1.0, np.full(4, 1.0), np.zeros((4, 3)))
    comp = composite_loss(l1, l2, 1.1, 1.0)
    assert abs(comp.scalar - 3.2) < 1e-12


def test_composite_batch_mismatch():
    l1 = binary_cross_entropy(np.full(3, 0.5), np.ones(3))
    l2 = categorical_cross_entropy(np.full((4, 2), 0.5), np.tile([1.0, 0.0], (4, 1)))
    with pytest.raises(ShapeError):
        composite_loss(l1, l2, 1.0, 1.0)
