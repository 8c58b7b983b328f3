"""Scratch: is the INFER-mode center offset a BatchNorm running-stat artifact?"""
import numpy as np

from stgan_nd.synth import SynthSpec, make_synthetic_dataset
from stgan_nd.experiments import prepare_data, train_variant
from stgan_nd.gan import BaselineConfig, GanConfig, sample_noise
from stgan_nd.data import stochastic_target_batch, one_hot_batch
from stgan_nd.nn import INFER, TRAIN

ds = make_synthetic_dataset(SynthSpec())
prep = prepare_data(ds, [7], seed=1)
model = train_variant(prep, "test_2", GanConfig(seed=1), BaselineConfig(seed=1))
gen = model.bundle.generator

labels = prep.hold_out.trained.labels
rng = np.random.default_rng(0)

# mixed-class train-mode generation, mimicking the training-time batches
n = 7 * 110
classes = np.repeat(np.arange(7), 110)
perm = rng.permutation(n)
classes = classes[perm]
z = sample_noise(n, 8, rng)
p = rng.uniform(0.9, 1.0, n)
targets = stochastic_target_batch(classes, 7, p)
(mixed_train,), _ = gen.forward([z, targets], TRAIN, rng=rng, update_stats=False)

(mixed_infer,), _ = gen.forward([z, targets], INFER)

# standardized-space class centers of the real training data
for cls in range(7):
    real_center = prep.x_train[prep.y_train == cls].mean(0)
    got_train = mixed_train[classes == cls]
    got_infer = mixed_infer[classes == cls]
    off_train = np.linalg.norm(got_train.mean(0) - real_center)
    off_infer = np.linalg.norm(got_infer.mean(0) - real_center)
    print(f"cls {cls}: std-space offset train={off_train:.3f} infer={off_infer:.3f} "
          f"real_spread={np.linalg.norm(prep.x_train[prep.y_train==cls].std(0)):.3f} "
          f"gen_spread_train={np.linalg.norm(got_train.std(0)):.3f} "
          f"gen_spread_infer={np.linalg.norm(got_infer.std(0)):.3f}")
