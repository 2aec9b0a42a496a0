"""Dataset loading and batch encoding.

Reads the JSONL dataset and manifest files the analysis toolkit writes; no
other coupling to it.  Each sample becomes a pair of padded tensors: targets
x of width 27 (three z-scored curve values plus a 24-way tonality one-hot
repeated per step) and melody condition y of width 131 (padding flag, 128-way
pitch one-hot, rest flag, beat-strength weight).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

FEATURES = ("tension", "distance", "strain")

X_DIM = 3 + 24
Y_DIM = 1 + 128 + 1 + 1
PAD_FLAG, PITCH_OFFSET, REST_FLAG, WEIGHT_DIM = 0, 1, 129, 130


@dataclass
class Sample:
    id: str
    tonality: int
    split: str
    curves: dict[str, list[float]]
    melody: list[dict]
    labels: dict


def load_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def load_samples(path: str | Path, max_samples: int | None = None) -> list[Sample]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            feats = doc["features"]
            out.append(
                Sample(
                    id=doc["id"],
                    tonality=int(doc["tonality"]),
                    split=doc.get("split", "train"),
                    curves={name: feats[name] for name in FEATURES},
                    melody=doc["melody"],
                    labels=doc.get("labels", {}),
                )
            )
            if max_samples is not None and len(out) >= max_samples:
                break
    return out


class Normalizer:
    def __init__(self, norm_stats: dict):
        self.stats = {name: (norm_stats[name]["mean"], norm_stats[name]["std"]) for name in FEATURES}

    def scale(self, name: str, values) -> np.ndarray:
        mean, std = self.stats[name]
        return (np.asarray(values, dtype=np.float32) - mean) / std

    def unscale(self, name: str, values) -> np.ndarray:
        mean, std = self.stats[name]
        return np.asarray(values, dtype=np.float32) * std + mean


def encode_melody(melody: list[dict], length: int) -> np.ndarray:
    y = np.zeros((length, Y_DIM), dtype=np.float32)
    for i in range(length):
        if i >= len(melody):
            y[i, PAD_FLAG] = 1.0
            continue
        tok = melody[i]
        midi = tok.get("midi")
        if midi is None:
            y[i, REST_FLAG] = 1.0
        else:
            y[i, PITCH_OFFSET + int(midi)] = 1.0
        y[i, WEIGHT_DIM] = float(tok.get("weight", 1.0))
    return y


def encode_batch(
    samples: list[Sample], normalizer: Normalizer, device: torch.device = torch.device("cpu")
) -> dict[str, torch.Tensor]:
    max_t = max(len(s.curves["tension"]) for s in samples)
    b = len(samples)
    x = np.zeros((b, max_t, X_DIM), dtype=np.float32)
    y = np.zeros((b, max_t, Y_DIM), dtype=np.float32)
    mask = np.zeros((b, max_t), dtype=np.float32)
    tonality = np.zeros(b, dtype=np.int64)
    for n, s in enumerate(samples):
        t = len(s.curves["tension"])
        for j, name in enumerate(FEATURES):
            x[n, :t, j] = normalizer.scale(name, s.curves[name])
        x[n, :t, 3 + s.tonality] = 1.0
        y[n] = encode_melody(s.melody, max_t)
        mask[n, :t] = 1.0
        tonality[n] = s.tonality
    return {
        "x": torch.from_numpy(x).to(device),
        "y": torch.from_numpy(y).to(device),
        "mask": torch.from_numpy(mask).to(device),
        "tonality": torch.from_numpy(tonality).to(device),
    }


def split_samples(samples: list[Sample]) -> tuple[list[Sample], list[Sample]]:
    train = [s for s in samples if s.split == "train"]
    test = [s for s in samples if s.split == "test"]
    return train, test


def batches(samples: list[Sample], batch_size: int, rng: np.random.Generator):
    order = rng.permutation(len(samples))
    for start in range(0, len(samples), batch_size):
        yield [samples[i] for i in order[start : start + batch_size]]
