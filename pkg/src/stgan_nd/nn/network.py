"""Multi-input, multi-head dense network with manual backpropagation.

Inputs are concatenated, pushed through the trunk layers, and then fanned
out into one dense layer + activation per output head. Backward sums the
head gradients where the trunk splits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError, SpecError, StateError
from . import layers as L
from .layers import INFER, TRAIN, Layer, build_layer
from .specs import NetworkSpec

_HEAD_ACTIVATION_CLS = {
    "sigmoid": L.Sigmoid,
    "softmax": L.Softmax,
    "linear": L.Linear,
    "relu": L.ReLU,
}


@dataclass
class Gradients:
    """Parameter gradients (aligned with ``Network.parameters()``) and the
    gradient w.r.t. each input head."""

    params: list[np.ndarray]
    inputs: list[np.ndarray]

    def flat(self) -> np.ndarray:
        """All parameter gradients in one vector, matching
        ``Network.flat_parameters()`` element for element."""
        return np.concatenate([g.ravel() for g in self.params])


class _ForwardCache:
    __slots__ = ("net", "mode", "batch_size", "trunk", "heads")

    def __init__(self, net, mode, batch_size, trunk, heads):
        self.net = net
        self.mode = mode
        self.batch_size = batch_size
        self.trunk = trunk
        self.heads = heads


class Network:
    def __init__(self, spec: NetworkSpec, trunk: list[Layer], heads: list[tuple[L.Dense, Layer]]):
        self.spec = spec
        self.trunk = trunk
        self.heads = heads
        self.mode = TRAIN
        self._flat = self._flatten_into_buffer()

    def _flatten_into_buffer(self) -> np.ndarray:
        # one contiguous buffer backing every parameter array keeps the
        # optimizer to a handful of vectorized passes per step
        arrays = self.parameters()
        buffer = np.empty(sum(a.size for a in arrays))
        offset = 0
        for layer in self._param_layers():
            for name in layer.param_names:
                arr = getattr(layer, name)
                view = buffer[offset:offset + arr.size].reshape(arr.shape)
                view[...] = arr
                setattr(layer, name, view)
                offset += arr.size
        return buffer

    def _param_layers(self):
        for layer in self.trunk:
            if layer.param_names:
                yield layer
        for dense_layer, _ in self.heads:
            yield dense_layer

    def flat_parameters(self) -> np.ndarray:
        """The single buffer behind all parameter arrays."""
        return self._flat

    @property
    def n_inputs(self) -> int:
        return len(self.spec.input_widths)

    @property
    def n_heads(self) -> int:
        return len(self.heads)

    def parameters(self) -> list[np.ndarray]:
        """All trainable arrays, trunk first, then heads in order."""
        params = []
        for layer in self.trunk:
            params.extend(layer.parameters())
        for dense_layer, _ in self.heads:
            params.extend(dense_layer.parameters())
        return params

    def batch_norm_layers(self) -> list[L.BatchNorm]:
        return [layer for layer in self.trunk if isinstance(layer, L.BatchNorm)]

    def forward(self, inputs, mode=None, rng=None, update_stats=True):
        """Run the network on a batch.

        ``inputs`` is one matrix per input head (a bare matrix is accepted
        for single-input networks). Returns ``(head_outputs, cache)``; the
        cache is only usable for ``backward`` when mode is train.
        """
        if mode is None:
            mode = self.mode
        if mode not in (TRAIN, INFER):
            raise SpecError(f"mode must be {TRAIN!r} or {INFER!r}, got {mode!r}")
        if isinstance(inputs, np.ndarray):
            inputs = [inputs]
        if len(inputs) != self.n_inputs:
            raise ShapeError(
                f"network has {self.n_inputs} input heads, got {len(inputs)} arrays"
            )
        mats = []
        batch = None
        for width, arr in zip(self.spec.input_widths, inputs):
            arr = np.asarray(arr, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != width:
                raise ShapeError(
                    f"input head expects width {width}, got shape {arr.shape}"
                )
            if batch is None:
                batch = arr.shape[0]
            elif arr.shape[0] != batch:
                raise ShapeError("input heads disagree on batch size")
            mats.append(arr)
        x = np.concatenate(mats, axis=1) if len(mats) > 1 else mats[0]

        trunk_caches = []
        for layer in self.trunk:
            x, cache = layer.forward(x, mode, rng=rng, update_stats=update_stats)
            trunk_caches.append(cache)

        outputs = []
        head_caches = []
        for dense_layer, activation in self.heads:
            z, dense_cache = dense_layer.forward(x, mode, rng=rng, update_stats=update_stats)
            y, act_cache = activation.forward(z, mode, rng=rng, update_stats=update_stats)
            outputs.append(y)
            head_caches.append((dense_cache, act_cache))

        return outputs, _ForwardCache(self, mode, batch, trunk_caches, head_caches)

    def backward(self, cache: _ForwardCache, head_loss_grads) -> Gradients:
        """Backpropagate per-head loss gradients through the whole network."""
        if cache.net is not self:
            raise StateError("cache was produced by a different network")
        if cache.mode != TRAIN:
            raise StateError("backward needs a cache from a train-mode forward")
        if isinstance(head_loss_grads, np.ndarray):
            head_loss_grads = [head_loss_grads]
        if len(head_loss_grads) != self.n_heads:
            raise ShapeError(
                f"network has {self.n_heads} heads, got {len(head_loss_grads)} gradients"
            )

        trunk_width = self.spec.trunk_width()
        trunk_grad = np.zeros((cache.batch_size, trunk_width))
        head_param_grads = []
        for (dense_layer, activation), (dense_cache, act_cache), grad in zip(
            self.heads, cache.heads, head_loss_grads
        ):
            grad = np.asarray(grad, dtype=float)
            if grad.shape != (cache.batch_size, dense_layer.out_width):
                raise ShapeError(
                    f"head gradient shape {grad.shape} does not match output "
                    f"({cache.batch_size}, {dense_layer.out_width})"
                )
            grad, _ = activation.backward(act_cache, grad)
            grad, dense_grads = dense_layer.backward(dense_cache, grad)
            head_param_grads.append(dense_grads)
            trunk_grad += grad

        trunk_param_grads = []
        grad = trunk_grad
        for layer, layer_cache in zip(reversed(self.trunk), reversed(cache.trunk)):
            grad, param_grads = layer.backward(layer_cache, grad)
            trunk_param_grads.append(param_grads)
        trunk_param_grads.reverse()

        params = []
        for grads in trunk_param_grads:
            params.extend(grads)
        for grads in head_param_grads:
            params.extend(grads)

        input_grads = []
        offset = 0
        for width in self.spec.input_widths:
            input_grads.append(grad[:, offset:offset + width])
            offset += width
        return Gradients(params=params, inputs=input_grads)


def init_network(spec: NetworkSpec, seed: int) -> Network:
    """Build a network with Glorot-uniform weights and zero biases.

    The same (spec, seed) pair always produces bit-identical parameters.
    """
    rng = np.random.default_rng(int(seed))
    width = spec.total_input_width
    trunk = []
    for layer_spec in spec.layers:
        layer = build_layer(layer_spec, width, rng)
        width = layer.out_width
        trunk.append(layer)
    heads = []
    for head_width, activation_name in spec.output_heads:
        dense_layer = L.Dense(width, head_width, rng)
        activation = _HEAD_ACTIVATION_CLS[activation_name](head_width)
        heads.append((dense_layer, activation))
    return Network(spec, trunk, heads)


def clone_network(net: Network) -> Network:
    """Independent copy with identical parameters and running statistics.

    (A plain deepcopy would sever the layer views from the flat buffer.)
    """
    dup = init_network(net.spec, seed=0)
    dup.flat_parameters()[...] = net.flat_parameters()
    for src, dst in zip(net.batch_norm_layers(), dup.batch_norm_layers()):
        dst.running_mean = src.running_mean.copy()
        dst.running_var = src.running_var.copy()
    return dup


def clone_parameters(net: Network) -> list[np.ndarray]:
    """Snapshot of all trainable arrays plus batch-norm running stats."""
    arrays = [p.copy() for p in net.parameters()]
    for bn in net.batch_norm_layers():
        arrays.append(bn.running_mean.copy())
        arrays.append(bn.running_var.copy())
    return arrays


def restore_parameters(net: Network, snapshot: list[np.ndarray]) -> None:
    params = net.parameters()
    bns = net.batch_norm_layers()
    if len(snapshot) != len(params) + 2 * len(bns):
        raise StateError("snapshot does not match network structure")
    for target, stored in zip(params, snapshot):
        target[...] = stored
    rest = snapshot[len(params):]
    for bn, mean, var in zip(bns, rest[0::2], rest[1::2]):
        bn.running_mean = mean.copy()
        bn.running_var = var.copy()
