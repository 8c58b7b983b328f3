"""Single-file JSON checkpoints.

Float64 values are written as their shortest-repr decimal strings, which
round-trip exactly, so a reloaded network is bit-identical to the saved one.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from . import layers as L
from .adam import AdamState
from .network import Network, init_network
from .specs import NetworkSpec

FORMAT = "stgan-nd-checkpoint-v1"


def _encode_array(arr: np.ndarray) -> dict:
    flat = np.asarray(arr, dtype=float).ravel(order="C")
    return {"shape": list(arr.shape), "values": [repr(float(x)) for x in flat]}


def _decode_array(payload: dict) -> np.ndarray:
    values = np.array([float(s) for s in payload["values"]], dtype=float)
    return values.reshape(payload["shape"])


def _layer_arrays(layer) -> dict:
    if isinstance(layer, L.Dense):
        return {"weight": layer.weight, "bias": layer.bias}
    if isinstance(layer, L.BatchNorm):
        return {
            "gamma": layer.gamma,
            "beta": layer.beta,
            "running_mean": layer.running_mean,
            "running_var": layer.running_var,
        }
    return {}


def _restore_layer(layer, arrays: dict) -> None:
    stored = {name: _decode_array(entry) for name, entry in arrays.items()}
    for name, value in stored.items():
        current = getattr(layer, name)
        if current.shape != value.shape:
            raise DataError(
                f"checkpoint array {name!r} has shape {value.shape}, "
                f"expected {current.shape}"
            )
        if name in layer.param_names:
            current[...] = value  # keep the flat-buffer aliasing intact
        else:
            setattr(layer, name, value)


def save_checkpoint(path, net: Network, optimizer: AdamState | None = None,
                    rng_seed: int | None = None) -> None:
    doc = {
        "format": FORMAT,
        "spec": net.spec.to_dict(),
        "layers": [
            {
                "kind": layer.kind,
                "arrays": {k: _encode_array(v) for k, v in _layer_arrays(layer).items()},
            }
            for layer in net.trunk
        ],
        "heads": [
            {
                "activation": net.spec.output_heads[i][1],
                "arrays": {k: _encode_array(v) for k, v in _layer_arrays(dense).items()},
            }
            for i, (dense, _) in enumerate(net.heads)
        ],
        "optimizer": None,
        "rng_seed": rng_seed,
    }
    if optimizer is not None:
        doc["optimizer"] = {
            "learning_rate": repr(float(optimizer.learning_rate)),
            "beta1": repr(float(optimizer.beta1)),
            "beta2": repr(float(optimizer.beta2)),
            "epsilon": repr(float(optimizer.epsilon)),
            "decay": repr(float(optimizer.decay)),
            "step_count": optimizer.step_count,
            "first_moment": [_encode_array(m) for m in optimizer.first_moment],
            "second_moment": [_encode_array(v) for v in optimizer.second_moment],
        }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_checkpoint(path) -> tuple[Network, AdamState | None, int | None]:
    """Rebuild (network, optimizer state, rng seed) from a checkpoint file."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read checkpoint {path}: {exc}") from exc
    if doc.get("format") != FORMAT:
        raise DataError(f"not a {FORMAT} file: {path}")

    spec = NetworkSpec.from_dict(doc["spec"])
    net = init_network(spec, seed=0)  # parameters are overwritten below
    if len(doc["layers"]) != len(net.trunk) or len(doc["heads"]) != len(net.heads):
        raise DataError("checkpoint layer count does not match its own spec")
    for layer, entry in zip(net.trunk, doc["layers"]):
        if entry["kind"] != layer.kind:
            raise DataError(f"layer kind mismatch: {entry['kind']} vs {layer.kind}")
        _restore_layer(layer, entry["arrays"])
    for (dense, _), entry in zip(net.heads, doc["heads"]):
        _restore_layer(dense, entry["arrays"])

    optimizer = None
    if doc.get("optimizer"):
        opt = doc["optimizer"]
        optimizer = AdamState(
            learning_rate=float(opt["learning_rate"]),
            beta1=float(opt["beta1"]),
            beta2=float(opt["beta2"]),
            epsilon=float(opt["epsilon"]),
            decay=float(opt["decay"]),
            step_count=int(opt["step_count"]),
            first_moment=[_decode_array(m) for m in opt["first_moment"]],
            second_moment=[_decode_array(v) for v in opt["second_moment"]],
        )
    seed = doc.get("rng_seed")
    return net, optimizer, seed
