"""Layer implementations with hand-derived backward passes.

Forward returns ``(output, cache)``; backward consumes the cache and the
upstream gradient and returns ``(input_gradient, parameter_gradients)``.
Parameter gradients follow the order of ``parameters()``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, SpecError, StateError
from .specs import LayerSpec

TRAIN = "train"
INFER = "infer"


def glorot_uniform(n_in: int, n_out: int, rng: np.random.Generator) -> np.ndarray:
    limit = np.sqrt(6.0 / (n_in + n_out))
    return rng.uniform(-limit, limit, size=(n_in, n_out))


class Layer:
    kind = "?"
    in_width: int
    out_width: int
    param_names: tuple[str, ...] = ()

    def parameters(self) -> list[np.ndarray]:
        return [getattr(self, name) for name in self.param_names]

    def forward(self, x, mode, rng=None, update_stats=True):
        raise NotImplementedError

    def backward(self, cache, grad):
        raise NotImplementedError

    def _check_width(self, x: np.ndarray) -> None:
        if x.ndim != 2 or x.shape[1] != self.in_width:
            raise ShapeError(
                f"{self.kind} layer expects batches of width {self.in_width}, "
                f"got array of shape {x.shape}"
            )

    def _require_rng(self, rng) -> np.random.Generator:
        if rng is None:
            raise StateError(f"{self.kind} layer needs an rng in train mode")
        return rng


class Dense(Layer):
    kind = "dense"
    param_names = ("weight", "bias")

    def __init__(self, in_width: int, out_width: int, rng: np.random.Generator):
        self.in_width = in_width
        self.out_width = out_width
        self.weight = glorot_uniform(in_width, out_width, rng)
        self.bias = np.zeros(out_width)

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        return x @ self.weight + self.bias, x

    def backward(self, cache, grad):
        x = cache
        grad_w = x.T @ grad
        grad_b = grad.sum(axis=0)
        return grad @ self.weight.T, [grad_w, grad_b]


class _Elementwise(Layer):
    """Base for width-preserving layers."""

    def __init__(self, width: int):
        self.in_width = width
        self.out_width = width


class ReLU(_Elementwise):
    kind = "relu"

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        mask = x > 0.0
        return x * mask, mask

    def backward(self, cache, grad):
        return grad * cache, []


class Sigmoid(_Elementwise):
    kind = "sigmoid"

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        out = np.empty_like(x, dtype=float)
        pos = x >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        out[~pos] = ex / (1.0 + ex)
        return out, out

    def backward(self, cache, grad):
        y = cache
        return grad * y * (1.0 - y), []


class Softmax(_Elementwise):
    kind = "softmax"

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        shifted = x - x.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        y = e / e.sum(axis=1, keepdims=True)
        return y, y

    def backward(self, cache, grad):
        y = cache
        inner = (grad * y).sum(axis=1, keepdims=True)
        return y * (grad - inner), []


class Linear(_Elementwise):
    kind = "linear"

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        return x, None

    def backward(self, cache, grad):
        return grad, []


class GaussianNoise(_Elementwise):
    kind = "gaussian_noise"

    def __init__(self, width: int, stddev: float):
        super().__init__(width)
        self.stddev = stddev

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        if mode == INFER or self.stddev == 0.0:
            return x, None
        rng = self._require_rng(rng)
        # additive noise: gradient w.r.t. the input is the identity
        return x + self.stddev * rng.standard_normal(x.shape), None

    def backward(self, cache, grad):
        return grad, []


class Dropout(_Elementwise):
    kind = "dropout"

    def __init__(self, width: int, rate: float):
        super().__init__(width)
        self.rate = rate

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        if mode == INFER or self.rate == 0.0:
            return x, None
        rng = self._require_rng(rng)
        keep = 1.0 - self.rate
        # inverted scaling: inference needs no rescaling
        mask = (rng.random(x.shape) >= self.rate) / keep
        return x * mask, mask

    def backward(self, cache, grad):
        if cache is None:
            return grad, []
        return grad * cache, []


class BatchNorm(_Elementwise):
    """Per-feature batch normalization with learned scale and shift.

    Running statistics (momentum 0.99) are used in infer mode; train mode
    normalizes within the batch and, unless ``update_stats`` is False,
    folds the batch statistics into the running ones.
    """

    kind = "batch_norm"
    momentum = 0.99
    eps = 1e-3
    param_names = ("gamma", "beta")

    def __init__(self, width: int):
        super().__init__(width)
        self.gamma = np.ones(width)
        self.beta = np.zeros(width)
        self.running_mean = np.zeros(width)
        self.running_var = np.ones(width)

    def forward(self, x, mode, rng=None, update_stats=True):
        self._check_width(x)
        if mode == INFER:
            x_hat = (x - self.running_mean) / np.sqrt(self.running_var + self.eps)
            return self.gamma * x_hat + self.beta, None
        mean = x.mean(axis=0)
        var = x.var(axis=0)
        inv_std = 1.0 / np.sqrt(var + self.eps)
        x_hat = (x - mean) * inv_std
        if update_stats:
            m = self.momentum
            self.running_mean = m * self.running_mean + (1.0 - m) * mean
            self.running_var = m * self.running_var + (1.0 - m) * var
        return self.gamma * x_hat + self.beta, (x_hat, inv_std)

    def backward(self, cache, grad):
        if cache is None:
            raise StateError("batch_norm backward needs a train-mode cache")
        x_hat, inv_std = cache
        n = grad.shape[0]
        grad_beta = grad.sum(axis=0)
        grad_gamma = (grad * x_hat).sum(axis=0)
        grad_x = (self.gamma * inv_std / n) * (
            n * grad - grad_beta - x_hat * grad_gamma
        )
        return grad_x, [grad_gamma, grad_beta]


def build_layer(spec: LayerSpec, in_width: int, rng: np.random.Generator) -> Layer:
    if spec.kind == "dense":
        return Dense(in_width, spec.out_width, rng)
    if spec.kind == "relu":
        return ReLU(in_width)
    if spec.kind == "sigmoid":
        return Sigmoid(in_width)
    if spec.kind == "softmax":
        return Softmax(in_width)
    if spec.kind == "linear":
        return Linear(in_width)
    if spec.kind == "gaussian_noise":
        return GaussianNoise(in_width, spec.stddev)
    if spec.kind == "dropout":
        return Dropout(in_width, spec.rate)
    if spec.kind == "batch_norm":
        return BatchNorm(in_width)
    raise SpecError(f"unknown layer kind {spec.kind!r}")
