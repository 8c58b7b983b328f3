"""Scratch diagnostics for generator quality (not part of the package)."""
import sys

import numpy as np

from stgan_nd.synth import SynthSpec, make_synthetic_dataset
from stgan_nd.experiments import prepare_data, train_variant, evaluate_model
from stgan_nd.gan import BaselineConfig, GanConfig, sample_noise
from stgan_nd.data import stochastic_target_batch
from stgan_nd.evaluate import pairwise_set_distance
from stgan_nd.nn import INFER

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
overlap = float(sys.argv[2]) if len(sys.argv) > 2 else 0.7

spec = SynthSpec(overlap=overlap)
ds = make_synthetic_dataset(spec)
prep = prepare_data(ds, [7], seed=seed)
gc = GanConfig(seed=seed)
bc = BaselineConfig(seed=seed)

model = train_variant(prep, "test_2", gc, bc)
gen = model.bundle.generator

labels = prep.hold_out.trained.labels
rng = np.random.default_rng(0)
wins_onehot = wins_stoch = 0
for cls in range(7):
    real = prep.raw_features[labels == cls]
    n = len(real)
    # one-hot conditioning
    z = sample_noise(n, 8, rng)
    t_onehot = np.zeros((n, 7)); t_onehot[:, cls] = 1.0
    (g1,), _ = gen.forward([z, t_onehot], INFER)
    g1 = prep.standardizer.inverse(g1)
    # training-range stochastic conditioning
    p = rng.uniform(0.9, 1.0, n)
    t_stoch = stochastic_target_batch(np.full(n, cls), 7, p)
    (g2,), _ = gen.forward([z, t_stoch], INFER)
    g2 = prep.standardizer.inverse(g2)

    mean_stats = prep.raw_features[labels == cls].mean(0), prep.raw_features[labels == cls].std(0)
    randoms = mean_stats[0] + mean_stats[1] * np.random.default_rng(cls).standard_normal((n, 16))

    base = pairwise_set_distance(real, real, exclude_self=True).mean()
    d1 = pairwise_set_distance(real, g1).mean()
    d2 = pairwise_set_distance(real, g2).mean()
    dr = pairwise_set_distance(real, randoms).mean()
    off1 = np.linalg.norm(g1.mean(0) - real.mean(0))
    off2 = np.linalg.norm(g2.mean(0) - real.mean(0))
    wins_onehot += d1 < dr
    wins_stoch += d2 < dr
    print(f"cls {cls}: base={base:.2f} gan1h={d1:.2f} ganst={d2:.2f} rnd={dr:.2f} "
          f"off1h={off1:.2f} offst={off2:.2f}")
print(f"wins: onehot={wins_onehot}/7 stoch={wins_stoch}/7")

for variant, m in [("test_2", model), ("baseline_a", train_variant(prep, "baseline_a", gc, bc))]:
    ev = evaluate_model(m.network, prep, [0.90])
    row = ev.rows[1]
    print(f"{variant}: gca0={ev.rows[0].gca:.3f} gca={row.gca:.3f} nda={row.nda:.3f} "
          f"tau={row.tau:.2f} auc={ev.auc:.3f}")
