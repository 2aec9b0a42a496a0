"""Corpus ingestion, augmentation, statistical labeling and dataset serialization.

A Score is a beat-sliced piece: each slice holds the soprano melody note and
the deduplicated pitch classes sounding on that beat.  Augmentation expands a
score by density thinning, circle-of-fifths melody substitution and key
transposition; samples are labeled with per-curve statistics and written one
JSON object per line next to a manifest with normalization stats.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InputError
from .features import FEATURE_NAMES, FeatureSequence, MelodyToken, extract_features
from .midi import read_midi
from .spelling import BeamConfig, Chord
from .spiral import DEFAULT_PARAMS, PITCH_LABELS, SpiralParams, midi_to_label, normalize_label

DOWNBEAT_WEIGHT = 1.0
OFFBEAT_WEIGHT = 0.5


@dataclass(frozen=True)
class Slice:
    melody_midi: int | None
    melody_duration: float
    chord: tuple[str, ...]
    downbeat: bool

    @property
    def weight(self) -> float:
        return DOWNBEAT_WEIGHT if self.downbeat else OFFBEAT_WEIGHT


@dataclass(frozen=True)
class Score:
    title: str
    beats_per_bar: int
    slices: tuple[Slice, ...]

    def __post_init__(self) -> None:
        if not self.slices:
            raise InputError(f"score {self.title!r} has no slices")

    def chords(self) -> list[Chord]:
        return [Chord.of(s.chord) for s in self.slices]

    def melody_tokens(self) -> list[MelodyToken]:
        return [MelodyToken(s.melody_midi, s.melody_duration, s.weight) for s in self.slices]


def score_from_dict(doc: dict) -> Score:
    try:
        slices = []
        for raw in doc["slices"]:
            melody = raw.get("melody")
            chord = tuple(dict.fromkeys(normalize_label(n) for n in raw["chord"]))
            if not chord:
                raise InputError("slice with empty chord")
            slices.append(
                Slice(
                    melody_midi=None if melody is None else int(melody["midi"]),
                    melody_duration=1.0 if melody is None else float(melody.get("duration_beats", 1.0)),
                    chord=chord,
                    downbeat=bool(raw.get("downbeat", False)),
                )
            )
        return Score(str(doc["title"]), int(doc.get("beats_per_bar", 4)), tuple(slices))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed score document: {exc}") from exc


def score_to_dict(score: Score) -> dict:
    return {
        "title": score.title,
        "beats_per_bar": score.beats_per_bar,
        "slices": [
            {
                "melody": None
                if s.melody_midi is None
                else {"midi": s.melody_midi, "duration_beats": s.melody_duration},
                "chord": list(s.chord),
                "downbeat": s.downbeat,
            }
            for s in score.slices
        ],
    }


def ingest_midi_notes(notes, title: str, beats_per_bar: int = 4) -> Score:
    """Slice parsed MIDI notes one slice per beat; soprano is the highest sounding pitch."""
    if not notes:
        raise InputError(f"no notes in {title!r}")
    end = max(n.onset_beats + n.duration_beats for n in notes)
    slices = []
    for beat in range(int(math.ceil(end))):
        sounding = [n for n in notes if n.onset_beats <= beat < n.onset_beats + n.duration_beats]
        if not sounding:
            continue
        top = max(sounding, key=lambda n: n.pitch)
        chord = tuple(dict.fromkeys(midi_to_label(n.pitch) for n in sorted(sounding, key=lambda n: n.pitch)))
        slices.append(Slice(top.pitch, top.duration_beats, chord, beat % beats_per_bar == 0))
    if not slices:
        raise InputError(f"score {title!r} is empty after slicing")
    return Score(title, beats_per_bar, tuple(slices))


def ingest(path: str | Path, beats_per_bar: int = 4) -> Score:
    """Load a score from a JSON score document or a standard MIDI file."""
    path = Path(path)
    if path.suffix.lower() in (".mid", ".midi"):
        return ingest_midi_notes(read_midi(str(path)), path.stem, beats_per_bar)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read score {path}: {exc}") from exc
    return score_from_dict(doc)


@dataclass(frozen=True)
class AugmentConfig:
    density_drop_prob: float = 0.2
    melodic_alteration_prob: float = 0.1
    transposition_steps: tuple[int, ...] = (0,)
    seed: int = 0
    key_balance: bool = False
    passes: int = 1

    def __post_init__(self) -> None:
        for name in ("density_drop_prob", "melodic_alteration_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InputError(f"{name} must lie in [0, 1]")
        if self.passes < 1 or not self.transposition_steps:
            raise InputError("need at least one pass and one transposition step")


def _stable_rng(*parts) -> random.Random:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _alter_melody_pitch(pitch: int, direction: int) -> int:
    # circle-of-fifths neighbor, folded to the register closest to the original
    candidate = pitch - 5 * direction
    if not 0 <= candidate <= 127:
        candidate = pitch + 7 * direction
    return candidate if 0 <= candidate <= 127 else pitch


def _swap_keeps_compactness(old_chord: tuple[str, ...], new_chord: tuple[str, ...]) -> bool:
    from .spelling import Chord, chord_min_diameter_assignments

    old_d, _ = chord_min_diameter_assignments(Chord(old_chord))
    new_d, _ = chord_min_diameter_assignments(Chord(new_chord))
    return new_d <= old_d + 1.0

def _transpose_slice(s: Slice, semitones: int) -> Slice:
    midi = s.melody_midi
    if midi is not None:
        midi = midi + semitones
        while midi > 127:
            midi -= 12
        while midi < 0:
            midi += 12
    chord = tuple(
        dict.fromkeys(
            PITCH_LABELS[(PITCH_LABELS.index(normalize_label(n)) + semitones) % 12] for n in s.chord
        )
    )
    return Slice(midi, s.melody_duration, chord, s.downbeat)


def augment(score: Score, config: AugmentConfig) -> list[Score]:
    """One stochastic density/melody variant, emitted once per transposition step.

    Downbeats and the first and last slices are never dropped, so cadences
    survive; all transpositions of a pass share the same variant, preserving
    tension and distance arrays across keys.
    """
    rng = _stable_rng(config.seed, score.title)
    kept = []
    last = len(score.slices) - 1
    for i, s in enumerate(score.slices):
        if i in (0, last) or s.downbeat or rng.random() >= config.density_drop_prob:
            kept.append(s)
    varied = []
    for s in kept:
        if s.melody_midi is not None and rng.random() < config.melodic_alteration_prob:
            direction = rng.choice((1, -1))
            new_midi = _alter_melody_pitch(s.melody_midi, direction)
            old_pc, new_pc = midi_to_label(s.melody_midi), midi_to_label(new_midi)
            chord = tuple(dict.fromkeys(new_pc if n == old_pc else n for n in s.chord))
            if chord != s.chord and not _swap_keeps_compactness(s.chord, chord):
                chord = s.chord  # substitution would wreck the spelling; melody moves alone
            varied.append(Slice(new_midi, s.melody_duration, chord, s.downbeat))
        else:
            varied.append(s)
    base = Score(score.title, score.beats_per_bar, tuple(varied))
    out = []
    for step in sorted(set(config.transposition_steps)):
        slices = tuple(_transpose_slice(s, step) for s in base.slices)
        out.append(Score(score.title, score.beats_per_bar, slices))
    return out


def _crossing_density(values: np.ndarray, level: float) -> float:
    dev = values - level
    crossings = sum(1 for a, b in zip(dev, dev[1:]) if a * b < 0)
    return crossings / (len(values) - 1)


def annotate_labels(features: FeatureSequence) -> dict:
    """Per-curve statistics used as disentanglement factors; nulls where T is too short."""
    labels = {}
    for name in FEATURE_NAMES:
        values = np.asarray(getattr(features, name), dtype=float)
        t = len(values)
        entry = {
            "mean": float(values.mean()),
            "std": float(values.std()),
            "range": float(values.max() - values.min()),
        }
        entry["crossing_density_mean"] = _crossing_density(values, float(values.mean())) if t >= 2 else None
        entry["crossing_density_median"] = (
            _crossing_density(values, float(np.median(values))) if t >= 2 else None
        )
        if t >= 3:
            grad = np.diff(values)
            signs = [s for s in np.sign(grad) if s != 0]
            flips = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
            entry["zcr_of_gradient"] = flips / (t - 2)
        else:
            entry["zcr_of_gradient"] = None
        spectrum = np.abs(np.fft.rfft(values - values.mean()))
        entry["fft_magnitudes"] = [float(v) for v in spectrum[:8]]
        labels[name] = entry
    return labels


@dataclass
class DatasetSample:
    id: str
    title: str
    mode: str
    tonality: int
    split: str
    melody: list[MelodyToken]
    chords: list[tuple[str, ...]]
    features: FeatureSequence
    labels: dict

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "mode": self.mode,
            "tonality": self.tonality,
            "length": self.features.length,
            "split": self.split,
            "melody": [t.to_dict() for t in self.melody],
            "chords": [list(c) for c in self.chords],
            "features": self.features.to_dict(),
            "labels": self.labels,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DatasetSample":
        return cls(
            id=doc["id"],
            title=doc["title"],
            mode=doc["mode"],
            tonality=int(doc["tonality"]),
            split=doc.get("split", "train"),
            melody=[MelodyToken.from_dict(t) for t in doc["melody"]],
            chords=[tuple(c) for c in doc["chords"]],
            features=FeatureSequence.from_dict(doc["features"]),
            labels=doc["labels"],
        )


def _split_of(sample_id: str, split_seed: int) -> bytes:
    return hashlib.sha1(f"{split_seed}:{sample_id}".encode()).digest()


def build_dataset(
    corpus_dir: str | Path,
    config: AugmentConfig,
    out_path: str | Path,
    beam: BeamConfig = BeamConfig(),
    params: SpiralParams = DEFAULT_PARAMS,
    split_seed: int = 0,
) -> dict:
    """Ingest every score under ``corpus_dir``, augment, label, and write JSONL + manifest."""
    corpus_dir = Path(corpus_dir)
    paths = sorted(
        p for p in corpus_dir.iterdir() if p.suffix.lower() in (".json", ".mid", ".midi")
    )
    if not paths:
        raise InputError(f"no score files under {corpus_dir}")
    samples: list[DatasetSample] = []
    for path in paths:
        score = ingest(path)
        for pass_i in range(config.passes):
            pass_cfg = replace(config, seed=config.seed + 7919 * pass_i)
            for variant in augment(score, pass_cfg):
                chords = variant.chords()
                melody = variant.melody_tokens()
                feats = extract_features(chords, beam, params, melody=melody)
                sample_id = f"{score.title}|p{pass_i}|k{feats.tonality:02d}|n{len(samples)}"
                samples.append(
                    DatasetSample(
                        id=sample_id,
                        title=score.title,
                        mode="major" if feats.tonality < 12 else "minor",
                        tonality=feats.tonality,
                        split="train",
                        melody=melody,
                        chords=[c.labels for c in chords],
                        features=feats,
                        labels=annotate_labels(feats),
                    )
                )

    if config.key_balance:
        samples = _balance_keys(samples)

    samples.sort(key=lambda s: s.id)
    ranked = sorted(samples, key=lambda s: _split_of(s.id, split_seed))
    n_train = round(0.8 * len(ranked))
    train_ids = {s.id for s in ranked[:n_train]}
    for s in samples:
        s.split = "train" if s.id in train_ids else "test"

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_dict()) + "\n")

    concat = {name: np.concatenate([getattr(s.features, name) for s in samples]) for name in FEATURE_NAMES}
    manifest = {
        "n_samples": len(samples),
        "n_train": sum(1 for s in samples if s.split == "train"),
        "n_test": sum(1 for s in samples if s.split == "test"),
        "counts_per_key": {
            str(key): sum(1 for s in samples if s.tonality == key) for key in range(24)
        },
        "norm_stats": {
            name: {"mean": float(v.mean()), "std": float(v.std()) or 1.0} for name, v in concat.items()
        },
        "feature_ranges": {
            name: [float(v.min()), float(v.max())] for name, v in concat.items()
        },
        "split_seed": split_seed,
        "source_scores": [p.name for p in paths],
    }
    manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def _balance_keys(samples: list[DatasetSample]) -> list[DatasetSample]:
    """Downsample so every key within a mode holds the same sample count."""
    by_key: dict[int, list[DatasetSample]] = {}
    for s in samples:
        by_key.setdefault(s.tonality, []).append(s)
    balanced = []
    for mode_base in (0, 12):
        present = {k: v for k, v in by_key.items() if mode_base <= k < mode_base + 12}
        if not present:
            continue
        quota = min(len(v) for v in present.values())
        for key in sorted(present):
            balanced.extend(sorted(present[key], key=lambda s: s.id)[:quota])
    return balanced


def read_dataset(path: str | Path) -> list[DatasetSample]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(DatasetSample.from_dict(json.loads(line)))
    return out
