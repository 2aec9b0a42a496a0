"""Training loop, checkpointing and held-out evaluation."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np
import torch
from scipy import stats

from .data import FEATURES, Normalizer, Sample, batches, encode_batch, load_manifest, load_samples, split_samples
from .model import CurveGenerator, ModelConfig, loss_components, total_loss


def evaluate(
    model: CurveGenerator, samples: list[Sample], normalizer: Normalizer, batch_size: int = 64
) -> dict:
    """Posterior-mean reconstruction quality: per-feature SRCC and tonality accuracy."""
    model.eval()
    per_feature: dict[str, list[float]] = {name: [] for name in FEATURES}
    correct = 0
    with torch.no_grad():
        for start in range(0, len(samples), batch_size):
            chunk = samples[start : start + batch_size]
            batch = encode_batch(chunk, normalizer)
            mu, _ = model.encode(batch["x"], batch["y"], batch["mask"])
            curves, tonality_logits, = model.decode(mu, batch["y"], batch["mask"])[:2]
            correct += int((tonality_logits.argmax(dim=-1) == batch["tonality"]).sum())
            for n, sample in enumerate(chunk):
                t = len(sample.curves["tension"])
                for j, name in enumerate(FEATURES):
                    target = batch["x"][n, :t, j].numpy()
                    predicted = curves[name][n, :t].numpy()
                    if t >= 2 and np.std(target) > 0 and np.std(predicted) > 0:
                        rho = stats.spearmanr(target, predicted).statistic
                        if np.isfinite(rho):
                            per_feature[name].append(float(rho))
    model.train()
    return {
        "srcc": {name: float(np.mean(v)) if v else float("nan") for name, v in per_feature.items()},
        "tonality_accuracy": correct / max(1, len(samples)),
    }


def train(
    dataset_path: str | Path,
    manifest_path: str | Path,
    out_dir: str | Path,
    config: ModelConfig | None = None,
    max_samples: int | None = 20000,
) -> dict:
    config = config or ModelConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = load_manifest(manifest_path)
    normalizer = Normalizer(manifest["norm_stats"])
    samples = load_samples(dataset_path, max_samples=max_samples)
    train_set, test_set = split_samples(samples)
    if not train_set or not test_set:
        raise ValueError("dataset must provide both train and test splits")

    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    model = CurveGenerator(config)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    scheduler = torch.optim.lr_scheduler.ExponentialLR(optimizer, gamma=config.lr_gamma)

    log: list[dict] = []
    for epoch in range(config.epochs):
        beta = config.beta_at(epoch)
        sums: dict[str, float] = {}
        steps = 0
        for chunk in batches(train_set, config.batch_size, rng):
            batch = encode_batch(chunk, normalizer)
            curves, tonality_logits, mu, log_var = model(batch)
            components = loss_components(curves, tonality_logits, batch, mu, log_var)
            loss = total_loss(components, config, beta)
            optimizer.zero_grad()
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), 5.0)
            optimizer.step()
            steps += 1
            sums["total"] = sums.get("total", 0.0) + float(loss.detach())
            for name, value in components.items():
                sums[name] = sums.get(name, 0.0) + float(value.detach())
        scheduler.step()
        entry = {"epoch": epoch, "beta": beta}
        entry.update({name: value / steps for name, value in sums.items()})
        log.append(entry)

    report = evaluate(model, test_set, normalizer, config.batch_size)
    checkpoint = {
        "model_state": model.state_dict(),
        "config": asdict(config),
        "norm_stats": manifest["norm_stats"],
    }
    torch.save(checkpoint, out_dir / "checkpoint.pt")
    (out_dir / "training_log.json").write_text(json.dumps({"epochs": log, "heldout": report}, indent=2))
    return {"log": log, "heldout": report, "checkpoint": str(out_dir / "checkpoint.pt")}


def load_checkpoint(path: str | Path) -> tuple[CurveGenerator, Normalizer]:
    blob = torch.load(path, weights_only=False)
    config = ModelConfig(**blob["config"])
    model = CurveGenerator(config)
    model.load_state_dict(blob["model_state"])
    model.eval()
    return model, Normalizer(blob["norm_stats"])
