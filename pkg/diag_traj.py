"""Scratch: generator centering vs epochs and data tightness."""
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from stgan_nd.synth import SynthSpec, make_synthetic_dataset
from stgan_nd.experiments import prepare_data, train_variant, evaluate_model
from stgan_nd.gan import BaselineConfig, GanConfig, sample_noise
from stgan_nd.data import stochastic_target_batch
from stgan_nd.evaluate import pairwise_set_distance
from stgan_nd.nn import INFER


def gan_metrics(prep, gen, seed):
    labels = prep.hold_out.trained.labels
    rng = np.random.default_rng(1000 + seed)
    wins = 0
    offs = []
    for cls in range(prep.n_classes):
        real = prep.raw_features[labels == cls]
        n = len(real)
        z = sample_noise(n, gen.spec.input_widths[0], rng)
        p = rng.uniform(0.9, 1.0, n)
        t = stochastic_target_batch(np.full(n, cls), prep.n_classes, p)
        (g,), _ = gen.forward([z, t], INFER)
        g = prep.standardizer.inverse(g)
        stats = real.mean(0), real.std(0)
        randoms = stats[0] + stats[1] * np.random.default_rng(cls).standard_normal((n, 16))
        d_gan = pairwise_set_distance(real, g).mean()
        d_rnd = pairwise_set_distance(real, randoms).mean()
        wins += d_gan < d_rnd
        offs.append(np.linalg.norm(g.mean(0) - real.mean(0)) / max(real.std(0).mean(), 1e-9))
    return wins, round(float(np.mean(offs)), 2)


def run_one(task):
    epochs, scale, std, overlap, seed = task
    spec = SynthSpec(cluster_mean_scale=scale, within_class_std=std, overlap=overlap, seed=0)
    ds = make_synthetic_dataset(spec)
    prep = prepare_data(ds, [7], seed=seed)
    gc = GanConfig(seed=seed, epochs=epochs)
    bc = BaselineConfig(seed=seed)
    t2 = train_variant(prep, "test_2", gc, bc)
    wins, mean_off = gan_metrics(prep, t2.bundle.generator, seed)
    ev2 = evaluate_model(t2.network, prep, [0.90])
    base = train_variant(prep, "baseline_a", gc, bc)
    evb = evaluate_model(base.network, prep, [0.90])
    return {
        "epochs": epochs, "scale": scale, "std": std, "ovl": overlap, "seed": seed,
        "wins": int(wins), "off": mean_off,
        "t2_gca": round(ev2.rows[1].gca, 3), "t2_nda": round(ev2.rows[1].nda, 3),
        "t2_auc": round(ev2.auc, 3), "b_auc": round(evb.auc, 3),
        "gap": round(ev2.auc - evb.auc, 3), "b_gca0": round(evb.rows[0].gca, 3),
    }


if __name__ == "__main__":
    tasks = [
        (300, 4.6, 0.8, 0.8, 1),
        (300, 4.6, 0.8, 0.8, 2),
        (300, 4.6, 0.65, 0.8, 1),
        (300, 4.6, 0.65, 0.8, 2),
        (300, 5.2, 0.8, 0.8, 1),
        (300, 5.2, 0.8, 0.8, 2),
    ]
    with ProcessPoolExecutor(max_workers=2) as pool:
        for result in pool.map(run_one, tasks):
            print(json.dumps(result), flush=True)
