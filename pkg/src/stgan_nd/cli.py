"""Command-line entry points for the experiment matrix.

Subcommands: synth, train, distances, evaluate, generate. Every run writes
a manifest.json from which it can be replayed bit-identically. Exit codes:
0 success, 1 validation problem, 2 numeric divergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .data import Standardizer, load_dataset, save_dataset
from .errors import DataError, NumericError, ShapeError, SpecError, StateError
from .evaluate import write_roc_csv
from .experiments import (
    VARIANTS,
    PreparedData,
    distance_tables,
    evaluate_model,
    prepare_data,
    train_variant,
)
from .gan import BaselineConfig, GanConfig, generate_samples, write_loss_csv
from .nn import load_checkpoint, save_checkpoint
from .rng import substream
from .synth import SynthSpec, make_synthetic_dataset

ENV_SEED = "STGAN_ND_SEED"


class _CliError(SpecError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract reserves 2
    # for numeric divergence, so route usage errors through exit code 1
    def error(self, message):
        raise _CliError(message)


@dataclass
class RunConfig:
    dataset: str | None
    channels: list[int] | None
    synth: dict | None
    novel_classes: list[int]
    variant: str
    target_gca: list[float]
    gan: dict
    baseline: dict
    seed: int

    def to_manifest(self) -> dict:
        return asdict(self)

    @classmethod
    def from_manifest(cls, payload: dict) -> "RunConfig":
        fields = {k: payload[k] for k in (
            "dataset", "channels", "synth", "novel_classes", "variant",
            "target_gca", "gan", "baseline", "seed",
        )}
        return cls(**fields)

    def gan_config(self) -> GanConfig:
        return GanConfig(**self.gan)

    def baseline_config(self) -> BaselineConfig:
        return BaselineConfig(**self.baseline)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise _CliError(f"expected comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise _CliError(f"expected comma-separated numbers, got {text!r}") from None


def _default_seed() -> int:
    return int(os.environ.get(ENV_SEED, "0"))


def _add_data_args(p: _Parser) -> None:
    p.add_argument("--dataset", help="feature CSV or raw-sample manifest CSV")
    p.add_argument("--synth-spec", metavar="C,M,F",
                   help="synthesize a dataset: classes,samples-per-class,features")
    p.add_argument("--synth-seed", type=int, default=0,
                   help="seed of the synthetic dataset itself (default 0)")
    p.add_argument("--channels", help="comma-separated channel indices to keep")
    p.add_argument("--novel-classes",
                   help="comma-separated class labels held out as novel")


def _add_train_args(p: _Parser) -> None:
    p.add_argument("--variant", choices=VARIANTS, default="test_2")
    p.add_argument("--epochs", type=int, help="override training epochs")
    p.add_argument("--batch-size", type=int, help="override batch size")
    p.add_argument("--latent-size", type=int, help="generator latent width")
    p.add_argument("--preset", choices=["dualmyo", "uc2017"], default="dualmyo",
                   help="hyperparameter preset (default dualmyo)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"top-level seed (default ${ENV_SEED} or 0)")


def build_parser() -> _Parser:
    parser = _Parser(prog="stgan-nd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic feature dataset CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--spec", metavar="C,M,F", default="8,110,16")
    p.add_argument("--mean-scale", type=float, default=SynthSpec.cluster_mean_scale)
    p.add_argument("--within-std", type=float, default=SynthSpec.within_class_std)
    p.add_argument("--overlap", type=float, default=SynthSpec.overlap)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("train", help="train one experiment variant")
    _add_data_args(p)
    _add_train_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--manifest", help="replay a previous run's manifest.json")

    p = sub.add_parser("distances", help="baseline/GAN/random distance tables")
    _add_data_args(p)
    p.add_argument("--model", help="trained run directory (for the GAN column)")
    p.add_argument("--n-generated", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="accuracy tables, ROC and AUC per variant")
    _add_data_args(p)
    _add_train_args(p)
    p.add_argument("--variants", help="comma-separated list; overrides --variant")
    p.add_argument("--target-gca", default="0.95,0.90",
                   help="comma-separated target GCA values")
    p.add_argument("--jobs", type=int, default=1,
                   help="train/evaluate this many variants in parallel")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("generate", help="sample the trained generator")
    p.add_argument("--model", required=True, help="trained run directory")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--class", dest="class_index", type=int,
                       help="trained class index to generate")
    group.add_argument("--target", help="explicit comma-separated target vector")
    p.add_argument("-n", "--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


def _resolve_synth(args) -> dict | None:
    if getattr(args, "synth_spec", None) is None:
        return None
    parts = _parse_int_list(args.synth_spec)
    if len(parts) != 3:
        raise _CliError("--synth-spec needs exactly classes,samples,features")
    spec = SynthSpec(
        n_classes=parts[0], samples_per_class=parts[1], n_features=parts[2],
        seed=args.synth_seed,
    )
    return asdict(spec)


def _run_config_from_args(args) -> RunConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    preset = getattr(args, "preset", "dualmyo")
    gan = GanConfig.uc2017(seed=seed) if preset == "uc2017" else GanConfig.dualmyo(seed=seed)
    overrides = {}
    for flag, field_name in (
        ("epochs", "epochs"), ("batch_size", "batch_size"), ("latent_size", "latent_size"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    if overrides:
        values = asdict(gan)
        values.update(overrides)
        gan = GanConfig(**values)
    baseline = BaselineConfig(seed=seed)
    if getattr(args, "epochs", None) is not None:
        baseline = BaselineConfig(seed=seed, max_epochs=args.epochs)
    if args.dataset is None and getattr(args, "synth_spec", None) is None:
        raise _CliError("provide --dataset or --synth-spec")
    if not getattr(args, "novel_classes", None):
        raise _CliError("--novel-classes is required")
    return RunConfig(
        dataset=str(Path(args.dataset).resolve()) if args.dataset else None,
        channels=_parse_int_list(args.channels) if getattr(args, "channels", None) else None,
        synth=_resolve_synth(args),
        novel_classes=_parse_int_list(args.novel_classes),
        variant=getattr(args, "variant", "test_2"),
        target_gca=_parse_float_list(getattr(args, "target_gca", "0.95,0.90")),
        gan=asdict(gan),
        baseline=asdict(baseline),
        seed=seed,
    )


def _load_config_dataset(config: RunConfig):
    if config.dataset is not None:
        return load_dataset(config.dataset, channels=config.channels)
    return make_synthetic_dataset(SynthSpec(**config.synth))


def _prepare(config: RunConfig) -> PreparedData:
    ds = _load_config_dataset(config)
    return prepare_data(ds, config.novel_classes, config.seed)


def _write_preprocessing(prep: PreparedData, out: Path) -> None:
    payload = {
        "standardizer": prep.standardizer.to_dict(),
        "class_map": {str(k): v for k, v in prep.hold_out.class_map.items()},
        "n_features": prep.n_features,
        "n_classes": prep.n_classes,
    }
    (out / "preprocessing.json").write_text(json.dumps(payload, indent=1))


def _train_run(config: RunConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(config.to_manifest(), indent=1))
    prep = _prepare(config)
    model = train_variant(
        prep, config.variant, config.gan_config(), config.baseline_config(),
        checkpoint_dir=out / "checkpoints",
    )
    _write_preprocessing(prep, out)
    if model.bundle is not None:
        save_checkpoint(out / "generator.json", model.bundle.generator,
                        model.bundle.adam_g, rng_seed=config.seed)
        write_loss_csv(model.bundle.loss_history, out / "losses.csv")
        if config.variant == "test_3":
            _write_supervised_losses(model.history, out / "retrain_losses.csv")
    else:
        _write_supervised_losses(model.history, out / "losses.csv")
    save_checkpoint(out / "discriminator.json", model.network, rng_seed=config.seed)
    print(f"{config.variant}: trained, outputs in {out}")


def _write_supervised_losses(history, path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["epoch", "train_loss", "val_loss"])
        for epoch, train_loss, val_loss in history:
            writer.writerow([epoch, repr(train_loss), repr(val_loss)])


def cmd_synth(args) -> int:
    parts = _parse_int_list(args.spec)
    if len(parts) != 3:
        raise _CliError("--spec needs exactly classes,samples,features")
    seed = args.seed if args.seed is not None else _default_seed()
    spec = SynthSpec(
        n_classes=parts[0], samples_per_class=parts[1], n_features=parts[2],
        cluster_mean_scale=args.mean_scale, within_class_std=args.within_std,
        overlap=args.overlap, seed=seed,
    )
    ds = make_synthetic_dataset(spec)
    out = Path(args.out)
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(ds, out)
    print(f"wrote {ds.n_samples} samples x {ds.n_features} features to {out}")
    return 0


def cmd_train(args) -> int:
    if args.manifest:
        payload = json.loads(Path(args.manifest).read_text())
        config = RunConfig.from_manifest(payload)
    else:
        config = _run_config_from_args(args)
    _train_run(config, Path(args.out))
    return 0


def cmd_distances(args) -> int:
    config = _run_config_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    prep = _prepare(config)
    generator = None
    if args.model:
        gen_path = Path(args.model) / "generator.json"
        if gen_path.exists():
            generator, _, _ = load_checkpoint(gen_path)
        else:
            print(f"warning: {gen_path} not found; GAN column omitted", file=sys.stderr)
    else:
        print("warning: no --model given; GAN column omitted", file=sys.stderr)
    report = distance_tables(prep, generator, config.seed, args.n_generated)
    report.to_csv(out / "distances.csv")
    (out / "manifest.json").write_text(json.dumps(config.to_manifest(), indent=1))
    print(f"distance table written to {out / 'distances.csv'}")
    return 0


def _evaluate_one(payload) -> dict:
    manifest, variant, out_dir = payload
    config = RunConfig.from_manifest(manifest)
    config.variant = variant
    out = Path(out_dir)
    model_path = out / "discriminator.json"
    if not model_path.exists():
        _train_run(config, out)
    net, _, _ = load_checkpoint(model_path)
    prep = _prepare(config)
    evaluation = evaluate_model(net, prep, config.target_gca, variant)
    write_roc_csv(evaluation.roc_points, out / "roc.csv")
    return {
        "variant": variant,
        "auc": evaluation.auc,
        "rows": [r.to_dict() for r in evaluation.rows],
        "targets": evaluation.targets,
    }


def cmd_evaluate(args) -> int:
    config = _run_config_from_args(args)
    variants = (
        [v for v in args.variants.split(",") if v] if args.variants else [config.variant]
    )
    for variant in variants:
        if variant not in VARIANTS:
            raise _CliError(f"unknown variant {variant!r}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(config.to_manifest(), v, str(out / v)) for v in variants]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_evaluate_one, jobs))
    else:
        results = [_evaluate_one(job) for job in jobs]

    _write_accuracy_csv(results, config.target_gca, out / "accuracy.csv")
    (out / "report.json").write_text(json.dumps(results, indent=1))
    (out / "manifest.json").write_text(json.dumps(config.to_manifest(), indent=1))
    for result in results:
        print(f"{result['variant']}: AUC={result['auc']:.3f}")
    print(f"evaluation written to {out}")
    return 0


def _write_accuracy_csv(results, targets, path) -> None:
    # mirrors the published table layout: one row per variant, one column
    # group per threshold setting (tau=0 first, then each tuned target)
    header = ["variant", "tau0_class", "tau0_others", "tau0_mean_balanced",
              "tau0_mean_weighted"]
    for target in targets:
        tag = f"p{target:g}"
        header += [f"{tag}_class", f"{tag}_others", f"{tag}_mean_balanced",
                   f"{tag}_mean_weighted", f"{tag}_tau"]
    header.append("auc")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for result in results:
            rows = result["rows"]
            cells = [result["variant"]]
            zero = rows[0]
            cells += [_pct(zero["gca"]), _pct(zero["nda"]),
                      _pct(zero["mean_balanced"]), _pct(zero["mean_weighted"])]
            for row in rows[1:]:
                cells += [_pct(row["gca"]), _pct(row["nda"]),
                          _pct(row["mean_balanced"]), _pct(row["mean_weighted"]),
                          f"{row['tau']:.3f}"]
            cells.append(repr(result["auc"]))
            writer.writerow(cells)


def _pct(fraction: float) -> str:
    return f"{100.0 * fraction:.1f}"


def cmd_generate(args) -> int:
    model = Path(args.model)
    gen_path = model / "generator.json"
    if not gen_path.exists():
        raise DataError(f"no generator checkpoint in {model}")
    generator, _, _ = load_checkpoint(gen_path)
    payload = json.loads((model / "preprocessing.json").read_text())
    standardizer = Standardizer.from_dict(payload["standardizer"])
    seed = args.seed if args.seed is not None else _default_seed()
    rng = substream(seed, "generate")
    target = args.class_index if args.target is None else _parse_float_list(args.target)
    samples = generate_samples(generator, target, args.count, rng)
    samples = standardizer.inverse(samples)
    out = Path(args.out)
    with open(out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([f"ch{i}" for i in range(samples.shape[1])])
        for row in samples:
            writer.writerow([repr(float(x)) for x in row])
    print(f"wrote {samples.shape[0]} samples to {out}")
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "train": cmd_train,
    "distances": cmd_distances,
    "evaluate": cmd_evaluate,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except NumericError as exc:
        print(f"numeric divergence: {exc}", file=sys.stderr)
        return 2
    except (SpecError, DataError, ShapeError, StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
