"""Latent-space diagnostics: principal-component spectrum, posterior spread, SRCC."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch

from .data import Normalizer, Sample, encode_batch
from .generate import encode_means
from .model import CurveGenerator
from .train import evaluate


def explained_variance(latents: np.ndarray) -> list[float]:
    centered = latents - latents.mean(axis=0)
    cov = centered.T @ centered / max(1, len(centered) - 1)
    eigenvalues = np.linalg.eigvalsh(cov)[::-1]
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    total = eigenvalues.sum() or 1.0
    return [float(v / total) for v in eigenvalues]


def posterior_mean_std(model: CurveGenerator, samples: list[Sample], normalizer: Normalizer) -> float:
    sigmas = []
    with torch.no_grad():
        for start in range(0, len(samples), 64):
            batch = encode_batch(samples[start : start + 64], normalizer)
            _, log_var = model.encode(batch["x"], batch["y"], batch["mask"])
            sigmas.append(torch.exp(0.5 * log_var).numpy())
    return float(np.concatenate(sigmas).mean())


def diagnostics_report(
    model: CurveGenerator,
    samples: list[Sample],
    normalizer: Normalizer,
    min_samples: int = 1024,
) -> dict:
    pool = samples
    while len(pool) < min_samples and samples:
        pool = pool + samples
    pool = pool[:max(min_samples, len(samples))]
    latents = encode_means(model, pool, normalizer)
    report = {
        "explained_variance": explained_variance(latents),
        "posterior_mean_std": posterior_mean_std(model, samples, normalizer),
        "heldout": evaluate(model, samples, normalizer),
        "latent_dim": model.config.latent_dim,
        "n_encoded": len(pool),
    }
    return report


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n")
