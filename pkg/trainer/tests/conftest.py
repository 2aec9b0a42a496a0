import json
import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
CORPUS = REPO_ROOT / "data" / "chorales"

AUGMENT = {
    "density_drop_prob": 0.2,
    "melodic_alteration_prob": 0.1,
    "transposition_steps": list(range(-5, 7)),
    "seed": 11,
    "key_balance": True,
    "passes": 12,
}


@pytest.fixture(scope="session")
def dataset_paths(tmp_path_factory):
    """Build the training dataset through the analysis toolkit's CLI."""
    root = tmp_path_factory.mktemp("dataset")
    config = root / "augment.json"
    config.write_text(json.dumps(AUGMENT))
    out = root / "train.jsonl"
    subprocess.run(
        [
            sys.executable, "-m", "spiraltension.cli", "dataset", "build",
            str(CORPUS), "--config", str(config), "--out", str(out),
        ],
        check=True,
        cwd=REPO_ROOT,
        capture_output=True,
    )
    return out, out.with_suffix(out.suffix + ".manifest.json")


@pytest.fixture(scope="session")
def trained(dataset_paths, tmp_path_factory):
    """One toy training run shared by the behavioral tests."""
    from tensiongen.model import ModelConfig
    from tensiongen.train import load_checkpoint, train

    dataset, manifest = dataset_paths
    out_dir = tmp_path_factory.mktemp("run")
    result = train(dataset, manifest, out_dir, ModelConfig(epochs=20, seed=0))
    model, normalizer = load_checkpoint(result["checkpoint"])
    return {
        "model": model,
        "normalizer": normalizer,
        "result": result,
        "dataset": dataset,
        "manifest": manifest,
        "checkpoint": result["checkpoint"],
    }
