#!/usr/bin/env python3
"""End-to-end experiment through the CLI, exactly as a shell user would run it.

Synthesizes a dataset, trains the adversarial variant, evaluates it against
the plain baseline, emits distance tables, and samples the generator. All
outputs land in ./demo_out (wiped on each run). Epochs are reduced so the
whole script finishes in about two minutes.
"""
import shutil
import subprocess
import sys
from pathlib import Path

OUT = Path("demo_out")
if OUT.exists():
    shutil.rmtree(OUT)
OUT.mkdir()


def run(*args):
    cmd = [sys.executable, "-m", "stgan_nd.cli", *map(str, args)]
    print(f"\n$ stgan-nd {' '.join(map(str, args))}")
    result = subprocess.run(cmd, capture_output=True, text=True)
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    if result.returncode != 0:
        raise SystemExit(f"command failed with exit code {result.returncode}")


run("synth", "--out", OUT / "data.csv", "--seed", "0")
run("train",
    "--dataset", OUT / "data.csv",
    "--novel-classes", "7",
    "--variant", "test_2",
    "--epochs", "60",
    "--seed", "1",
    "--out", OUT / "gan_run")
run("evaluate",
    "--dataset", OUT / "data.csv",
    "--novel-classes", "7",
    "--variants", "baseline_a,test_2",
    "--target-gca", "0.95,0.90",
    "--epochs", "60",
    "--seed", "1",
    "--out", OUT / "evaluation")
run("distances",
    "--dataset", OUT / "data.csv",
    "--novel-classes", "7",
    "--model", OUT / "gan_run",
    "--seed", "1",
    "--out", OUT / "distances")
run("generate",
    "--model", OUT / "gan_run",
    "--class", "2",
    "-n", "25",
    "--seed", "5",
    "--out", OUT / "generated.csv")

print("\n== outputs ==")
for path in sorted(OUT.rglob("*")):
    if path.is_file():
        print(f"  {path}")
print("\naccuracy table:")
print((OUT / "evaluation" / "accuracy.csv").read_text())
