import csv
import json
import os
from pathlib import Path

import numpy as np
import pytest

from stgan_nd import cli
from stgan_nd.errors import NumericError


def run_cli(*args):
    return cli.main([str(a) for a in args])


SMALL_DATA = ["--synth-spec", "5,24,6", "--synth-seed", "3", "--novel-classes", "4"]
FAST = ["--epochs", "3", "--seed", "7"]


def test_synth_default_writes_880_rows(tmp_path):
    out = tmp_path / "data.csv"
    assert run_cli("synth", "--out", out) == 0
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 881
    assert rows[0] == ",".join([f"ch{i}" for i in range(16)] + ["label"])


def test_synth_spec_flag_and_seed(tmp_path):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert run_cli("synth", "--out", a, "--spec", "4,10,3", "--seed", "1") == 0
    assert run_cli("synth", "--out", b, "--spec", "4,10,3", "--seed", "2") == 0
    assert run_cli("synth", "--out", c, "--spec", "4,10,3", "--seed", "1") == 0
    assert len(a.read_text().strip().split("\n")) == 41
    assert a.read_text() != b.read_text()  # seed changes content
    assert a.read_text() == c.read_text()  # deterministically
    assert b.read_text().count("\n") == a.read_text().count("\n")  # not shape


def test_train_baseline_outputs_and_manifest_replay(tmp_path):
    out = tmp_path / "run"
    assert run_cli("train", *SMALL_DATA, "--variant", "baseline_a", *FAST,
                   "--out", out) == 0
    for name in ("manifest.json", "losses.csv", "discriminator.json", "preprocessing.json"):
        assert (out / name).exists(), name
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["variant"] == "baseline_a"
    assert manifest["seed"] == 7
    first = (out / "losses.csv").read_bytes()

    replay = tmp_path / "replay"
    assert run_cli("train", "--manifest", out / "manifest.json", "--out", replay) == 0
    assert (replay / "losses.csv").read_bytes() == first


def test_train_gan_variant_writes_generator_and_loss_columns(tmp_path):
    out = tmp_path / "gan"
    assert run_cli("train", *SMALL_DATA, "--variant", "test_2", *FAST,
                   "--batch-size", "8", "--latent-size", "3", "--out", out) == 0
    assert (out / "generator.json").exists()
    with open(out / "losses.csv") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["epoch", "d_loss", "g_validity", "g_class"]
    assert len(rows) == 4  # header + 3 epochs


def test_evaluate_two_variants(tmp_path):
    out = tmp_path / "eval"
    code = run_cli("evaluate", *SMALL_DATA, *FAST, "--batch-size", "8",
                   "--latent-size", "3", "--variants", "baseline_a,test_2",
                   "--target-gca", "0.9,0.8", "--out", out)
    assert code == 0
    with open(out / "accuracy.csv") as handle:
        rows = list(csv.reader(handle))
    header, table = rows[0], rows[1:]
    assert header[0] == "variant"
    assert [r[0] for r in table] == ["baseline_a", "test_2"]
    others_at_zero = header.index("tau0_others")
    for row in table:
        assert row[others_at_zero] == "0.0"  # tau=0 never rejects
    assert header[-1] == "auc"
    for row in table:
        assert 0.0 <= float(row[-1]) <= 1.0
    report = json.loads((out / "report.json").read_text())
    assert {entry["variant"] for entry in report} == {"baseline_a", "test_2"}
    for variant in ("baseline_a", "test_2"):
        with open(out / variant / "roc.csv") as handle:
            roc_rows = list(csv.reader(handle))
        assert roc_rows[0] == ["fpr", "tpr", "threshold"]
        assert len(roc_rows) > 2


def test_generate_from_trained_model(tmp_path):
    model = tmp_path / "model"
    assert run_cli("train", *SMALL_DATA, "--variant", "test_2", *FAST,
                   "--batch-size", "8", "--latent-size", "3", "--out", model) == 0
    samples = tmp_path / "samples.csv"
    assert run_cli("generate", "--model", model, "--class", "2", "-n", "9",
                   "--seed", "5", "--out", samples) == 0
    with open(samples) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == [f"ch{i}" for i in range(6)]
    assert len(rows) == 10

    again = tmp_path / "again.csv"
    run_cli("generate", "--model", model, "--class", "2", "-n", "9",
            "--seed", "5", "--out", again)
    assert again.read_text() == samples.read_text()

    # an explicit target vector (no trained argmax) is accepted
    mixture = tmp_path / "mix.csv"
    assert run_cli("generate", "--model", model, "--target", "0.25,0.25,0.25,0.25",
                   "-n", "4", "--seed", "1", "--out", mixture) == 0
    assert len(mixture.read_text().strip().split("\n")) == 5


def test_distances_with_and_without_model(tmp_path, capsys):
    out = tmp_path / "dist"
    assert run_cli("distances", *SMALL_DATA, "--seed", "7", "--out", out) == 0
    assert "GAN column omitted" in capsys.readouterr().err
    with open(out / "distances.csv") as handle:
        rows = list(csv.reader(handle))
    assert rows[0][:3] == ["class", "baseline_mean", "baseline_std"]
    assert len(rows) == 5  # header + 4 trained classes
    assert all(row[3] == "" for row in rows[1:])  # gan column empty

    model = tmp_path / "model"
    run_cli("train", *SMALL_DATA, "--variant", "test_2", *FAST,
            "--batch-size", "8", "--latent-size", "3", "--out", model)
    out2 = tmp_path / "dist2"
    assert run_cli("distances", *SMALL_DATA, "--seed", "7", "--model", model,
                   "--out", out2) == 0
    with open(out2 / "distances.csv") as handle:
        rows = list(csv.reader(handle))
    assert all(row[3] != "" for row in rows[1:])


def test_validation_errors_exit_one(tmp_path):
    assert run_cli("train", "--novel-classes", "4", "--out", tmp_path / "x") == 1
    assert run_cli("train", "--dataset", tmp_path / "missing.csv",
                   "--novel-classes", "0", "--out", tmp_path / "x") == 1
    # novel set covering every class is rejected
    assert run_cli("train", "--synth-spec", "3,10,4", "--novel-classes", "0,1,2",
                   "--out", tmp_path / "x") == 1
    # argparse-level misuse also lands on exit code 1
    assert run_cli("train", *SMALL_DATA, "--variant", "test_9",
                   "--out", tmp_path / "x") == 1


def test_numeric_divergence_exits_two(monkeypatch, tmp_path):
    def explode(args):
        raise NumericError("loss went NaN")

    monkeypatch.setitem(cli._COMMANDS, "train", explode)
    assert run_cli("train", *SMALL_DATA, "--out", tmp_path / "x") == 2


def test_env_seed_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_SEED, "123")
    out = tmp_path / "run"
    assert run_cli("train", *SMALL_DATA, "--variant", "baseline_a",
                   "--epochs", "2", "--out", out) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 123
    assert manifest["gan"]["seed"] == 123
