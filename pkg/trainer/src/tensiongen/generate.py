"""Sampling feature files from melodies, plus latent-direction editing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import FEATURES, Normalizer, Sample, encode_batch, load_samples
from .model import CurveGenerator


@dataclass
class LatentDirection:
    """Contrast between two sample sets at opposite extremes of one curve statistic."""

    factor: str
    magnitude: np.ndarray  # elementwise |mean(z_a) - mean(z_b)|
    sign: np.ndarray       # sign of the raw difference, so edits move toward set a


def encode_means(model: CurveGenerator, samples: list[Sample], normalizer: Normalizer) -> np.ndarray:
    out = []
    with torch.no_grad():
        for start in range(0, len(samples), 64):
            batch = encode_batch(samples[start : start + 64], normalizer)
            mu, _ = model.encode(batch["x"], batch["y"], batch["mask"])
            out.append(mu.numpy())
    return np.concatenate(out, axis=0)


def latent_direction(
    model: CurveGenerator,
    normalizer: Normalizer,
    set_a: list[Sample],
    set_b: list[Sample],
    factor: str,
) -> LatentDirection:
    if not set_a or not set_b:
        raise ValueError("contrast sets must be non-empty")
    mean_a = encode_means(model, set_a, normalizer).mean(axis=0)
    mean_b = encode_means(model, set_b, normalizer).mean(axis=0)
    diff = mean_a - mean_b
    return LatentDirection(factor, np.abs(diff), np.sign(diff))


def contrast_sets(samples: list[Sample], factor: tuple[str, str], size: int) -> tuple[list[Sample], list[Sample]]:
    """Top and bottom `size` samples by a per-curve label, e.g. ("tension", "std")."""
    curve, stat = factor
    scored = [s for s in samples if s.labels.get(curve, {}).get(stat) is not None]
    scored.sort(key=lambda s: s.labels[curve][stat])
    if len(scored) < 2 * size:
        raise ValueError(f"not enough labelled samples for contrast of size {size}")
    return scored[-size:], scored[:size]


def apply_direction(
    z: torch.Tensor, direction: LatentDirection, theta: float, dims: np.ndarray
) -> torch.Tensor:
    """Additive latent edit on the selected dimensions, signed toward the high set."""
    theta_vec = np.zeros(z.shape[-1], dtype=np.float32)
    theta_vec[dims] = theta * direction.sign[dims]
    return z + torch.from_numpy(theta_vec * direction.magnitude.astype(np.float32))


def top_dimensions(direction: LatentDirection, count: int) -> np.ndarray:
    return np.argsort(direction.magnitude)[::-1][:count].copy()


def bottom_dimensions(direction: LatentDirection, count: int) -> np.ndarray:
    return np.argsort(direction.magnitude)[:count].copy()


def decode_to_feature_file(
    model: CurveGenerator,
    normalizer: Normalizer,
    z: torch.Tensor,
    melody: list[dict],
) -> dict:
    """Decode one latent conditioned on a melody and emit a feature document."""
    from .data import encode_melody

    length = len(melody)
    y = torch.from_numpy(encode_melody(melody, length)).unsqueeze(0)
    mask = torch.ones(1, length)
    with torch.no_grad():
        curves, tonality_logits = model.decode(z, y, mask)
    doc = {"version": 1, "tonality": int(tonality_logits.argmax(dim=-1)), "length": length}
    for name in FEATURES:
        values = normalizer.unscale(name, curves[name][0].numpy())
        doc[name] = [max(0.0, float(v)) for v in values]
    doc["distance"][0] = 0.0
    doc["normalized"] = False
    doc["melody"] = [
        {
            "midi": tok.get("midi"),
            "duration_beats": float(tok.get("duration_beats", 1.0)),
            "weight": float(tok.get("weight", 1.0)),
        }
        for tok in melody
    ]
    return doc


def generate_feature_file(
    model: CurveGenerator,
    normalizer: Normalizer,
    melody: list[dict],
    seed: int,
    direction: LatentDirection | None = None,
    theta: float = 0.0,
    dims: np.ndarray | None = None,
) -> dict:
    generator = torch.Generator().manual_seed(seed)
    z = torch.randn(1, model.config.latent_dim, generator=generator)
    if direction is not None and dims is not None and theta != 0.0:
        z = apply_direction(z, direction, theta, dims)
    return decode_to_feature_file(model, normalizer, z, melody)


def reconstruct_feature_file(
    model: CurveGenerator, normalizer: Normalizer, sample: Sample, z_edit=None
) -> dict:
    batch = encode_batch([sample], normalizer)
    with torch.no_grad():
        mu, _ = model.encode(batch["x"], batch["y"], batch["mask"])
    z = z_edit(mu) if z_edit is not None else mu
    return decode_to_feature_file(model, normalizer, z, sample.melody)
