import numpy as np
import pytest

from stgan_nd.errors import DataError
from stgan_nd.nn import (
    AdamState,
    INFER,
    NetworkSpec,
    TRAIN,
    adam_step,
    init_network,
    load_checkpoint,
    save_checkpoint,
)
from stgan_nd.nn.specs import batch_norm, dense, dropout, gaussian_noise, relu


def _trained_net():
    spec = NetworkSpec(
        input_widths=(4,),
        layers=(dense(6), gaussian_noise(0.1), relu(), batch_norm(), dropout(0.2)),
        output_heads=((1, "sigmoid"), (3, "softmax")),
    )
    net = init_network(spec, seed=5)
    rng = np.random.default_rng(1)
    # push some batches through so running stats are non-trivial
    for _ in range(3):
        net.forward([rng.standard_normal((8, 4))], TRAIN, rng=rng)
    return net


def test_round_trip_is_bit_identical(tmp_path):
    net = _trained_net()
    # awkward values that expose any lossy float formatting
    net.trunk[0].weight[0, 0] = 0.1 + 0.2
    net.trunk[0].weight[0, 1] = 1e-300
    net.trunk[0].weight[0, 2] = -1.5e16
    net.trunk[0].bias[0] = 2.0 ** -1074  # smallest subnormal

    state = AdamState.for_params([net.flat_parameters()], 0.001, beta1=0.5, decay=1e-6)
    g = np.random.default_rng(2).standard_normal(net.flat_parameters().shape)
    adam_step(state, [net.flat_parameters()], [g])

    path = tmp_path / "net.json"
    save_checkpoint(path, net, state, rng_seed=42)
    loaded, loaded_state, seed = load_checkpoint(path)

    assert seed == 42
    for p, q in zip(net.parameters(), loaded.parameters()):
        np.testing.assert_array_equal(p, q)
    for a, b in zip(net.batch_norm_layers(), loaded.batch_norm_layers()):
        np.testing.assert_array_equal(a.running_mean, b.running_mean)
        np.testing.assert_array_equal(a.running_var, b.running_var)
    assert loaded_state.step_count == 1
    assert loaded_state.learning_rate == 0.001
    assert loaded_state.beta1 == 0.5
    assert loaded_state.decay == 1e-6
    np.testing.assert_array_equal(loaded_state.first_moment[0], state.first_moment[0])
    np.testing.assert_array_equal(loaded_state.second_moment[0], state.second_moment[0])


def test_loaded_network_predicts_identically(tmp_path):
    net = _trained_net()
    path = tmp_path / "net.json"
    save_checkpoint(path, net)
    loaded, state, seed = load_checkpoint(path)
    assert state is None and seed is None
    x = np.random.default_rng(3).standard_normal((10, 4))
    (v1, y1), _ = net.forward([x], INFER)
    (v2, y2), _ = loaded.forward([x], INFER)
    np.testing.assert_array_equal(v1, v2)
    np.testing.assert_array_equal(y1, y2)


def test_loaded_network_keeps_flat_buffer_aliasing(tmp_path):
    net = _trained_net()
    path = tmp_path / "net.json"
    save_checkpoint(path, net)
    loaded, _, _ = load_checkpoint(path)
    loaded.flat_parameters()[...] = 0.0
    for p in loaded.parameters():
        np.testing.assert_array_equal(p, 0.0)


def test_rejects_non_checkpoint_files(tmp_path):
    path = tmp_path / "bogus.json"
    path.write_text("{\"format\": \"something-else\"}")
    with pytest.raises(DataError):
        load_checkpoint(path)
    path.write_text("not json at all")
    with pytest.raises(DataError):
        load_checkpoint(path)
    with pytest.raises(DataError):
        load_checkpoint(tmp_path / "missing.json")
