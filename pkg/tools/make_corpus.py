#!/usr/bin/env python3
"""Generate a deterministic chorale-style corpus as JSON score files.

Four-part block-chord pieces in the classical chorale idiom: phrase-based
functional harmony with tonicizations, authentic and half cadences, fermata
holds, on-beat suspensions, passing and neighbor tones, and a soprano that
moves by step or small leap through chord tones.  One slice per quarter-note
beat, so held harmonies still carry moving voices as real chorales do.
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from spiraltension.features import key_point_for
from spiraltension.spiral import pitch_coordinate, point_distance

# Voice-leading smoothness caps: consecutive centers of effect stay close and
# every sounding set stays tonally near the key coordinate.
JUMP_CAP = 1.7
STRAIN_CAP = 1.9

# Diatonic degree vocabulary: name -> pitch classes relative to the tonic.
MAJOR_CHORDS = {
    "I": (0, 4, 7),
    "I7": (0, 4, 7, 11),
    "ii": (2, 5, 9),
    "ii7": (2, 5, 9, 0),
    "iii": (4, 7, 11),
    "IV": (5, 9, 0),
    "IV7": (5, 9, 0, 4),
    "V": (7, 11, 2),
    "V7": (7, 11, 2, 5),
    "vi": (9, 0, 4),
    "vi7": (9, 0, 4, 7),
    "viio": (11, 2, 5),
    "viio7": (11, 2, 5, 8),
}
MINOR_CHORDS = {
    "i": (0, 3, 7),
    "i7": (0, 3, 7, 10),
    "iio": (2, 5, 8),
    "iio7": (2, 5, 8, 0),
    "III": (3, 7, 10),
    "iv": (5, 8, 0),
    "iv7": (5, 8, 0, 3),
    "V": (7, 11, 2),
    "V7": (7, 11, 2, 5),
    "VI": (8, 0, 3),
    "viio": (11, 2, 5),
    "viio7": (11, 2, 5, 8),
}

MAJOR_NEXT = {
    "I": ["IV", "ii", "V", "vi", "iii", "V7", "ii7", "IV7", "I7", "I"],
    "I7": ["IV", "ii", "vi"],
    "ii": ["V", "V7", "viio", "ii7", "viio7"],
    "ii7": ["V", "V7"],
    "iii": ["vi", "IV", "ii", "vi7"],
    "IV": ["V", "ii", "I", "V7", "viio", "ii7"],
    "IV7": ["V", "V7", "ii"],
    "V": ["I", "vi", "V7", "IV", "vi7"],
    "V7": ["I", "vi"],
    "vi": ["ii", "IV", "V", "iii", "ii7", "IV7"],
    "vi7": ["ii", "IV", "ii7"],
    "viio": ["I", "V", "I7"],
    "viio7": ["I", "V"],
}
MINOR_NEXT = {
    "i": ["iv", "iio", "V", "VI", "III", "V7", "iv7", "iio7", "i7", "i"],
    "i7": ["iv", "iio", "VI"],
    "iio": ["V", "V7", "viio", "viio7"],
    "iio7": ["V", "V7"],
    "III": ["VI", "iv", "iio", "iv7"],
    "iv": ["V", "iio", "i", "V7", "viio", "iio7"],
    "iv7": ["V", "V7", "iio"],
    "V": ["i", "VI", "V7", "iv"],
    "V7": ["i", "VI"],
    "VI": ["iio", "iv", "V", "III", "iv7"],
    "viio": ["i", "V", "i7"],
    "viio7": ["i", "V"],
}

# Degrees that may be tonicized by an inserted dominant-seventh a fifth above.
TONICIZABLE = {
    "major": {"ii": 2, "iii": 4, "IV": 5, "V": 7, "vi": 9},
    "minor": {"iv": 5, "V": 7, "VI": 8, "III": 3},
}

CADENCES = {
    "authentic_major": (["ii", "V7", "I"], ["IV", "V", "I"], ["ii7", "V", "I"], ["IV", "V7", "I"]),
    "half_major": (["IV", "V"], ["I", "V"], ["ii", "V"], ["vi", "V"]),
    "authentic_minor": (["iio", "V7", "i"], ["iv", "V", "i"], ["iv7", "V", "i"], ["iio7", "V7", "i"]),
    "half_minor": (["iv", "V"], ["i", "V"], ["iio", "V"]),
}

SOPRANO_LO, SOPRANO_HI = 60, 81

MAJOR_SCALE = (0, 2, 4, 5, 7, 9, 11)
MINOR_SCALE = (0, 2, 3, 5, 7, 8, 11)  # harmonic

FLAT_NAMES = ["C", "D♭", "D", "E♭", "E", "F", "G♭", "G", "A♭", "A", "B♭", "B"]


def _degree_stream(rng: random.Random, mode: str, n_phrases: int, tonic_pc: int) -> list[list[tuple[str, int]]]:
    """Phrase lists of (degree, tonicization offset); offset 0 means diatonic."""
    chords = MAJOR_CHORDS if mode == "major" else MINOR_CHORDS
    nexts = MAJOR_NEXT if mode == "major" else MINOR_NEXT
    tonic = "I" if mode == "major" else "i"
    phrases = []
    for p in range(n_phrases):
        length = rng.choice((5, 6, 7))
        final = p == n_phrases - 1
        kind = "authentic" if final or rng.random() < 0.6 else "half"
        cadence = [(d, 0) for d in rng.choice(CADENCES[f"{kind}_{mode}"])]
        body_len = max(2, length - len(cadence))
        degree = tonic if p == 0 else rng.choice(
            [tonic, "IV" if mode == "major" else "iv", "vi" if mode == "major" else "VI"]
        )
        body: list[tuple[str, int]] = [(degree, 0)]
        while len(body) < body_len:
            roll = rng.random()
            if roll < 0.22:  # harmony held across beats
                body.append(body[-1])
                continue
            if roll < 0.34 and body[-1][0] not in (tonic, "V7"):  # tonic gravity
                degree = tonic
            else:
                degree = rng.choice(nexts[body[-1][0]])
            offset = TONICIZABLE[mode].get(degree, 0)
            window = _fifth_window(tonic_pc, mode)
            applied_ok = offset and all(
                _spellable((tonic_pc + offset + r) % 12, window) for r in chords["V7"]
            )
            if applied_ok and rng.random() < 0.6 and len(body) + 2 <= body_len:
                body.append(("V7", offset))  # applied dominant of the coming degree
            body.append((degree, 0))
        phrase = body + cadence
        assert all(d in chords for d, _ in phrase)
        phrases.append(phrase)
    return phrases


def _fifth_window(tonic: int, mode: str) -> tuple[int, int]:
    """Admissible fifth-index span around the key, matching the analyzer's key anchors."""
    base = (7 * tonic) % 12
    t = base if base <= (5 if mode == "major" else 6) else base - 12
    lo, hi = (t - 1, t + 5) if mode == "major" else (t - 4, t + 5)
    return lo - 1, hi + 1


def _spellable(pc: int, window: tuple[int, int]) -> bool:
    base = (7 * pc) % 12
    return any(window[0] <= k <= window[1] for k in (base, base - 12))


def _window_k(pc: int, window: tuple[int, int]) -> int:
    base = (7 * pc) % 12
    mid = (window[0] + window[1]) / 2
    return min((base, base - 12), key=lambda k: abs(k - mid))


def _set_center(pcs, window: tuple[int, int]):
    pts = [pitch_coordinate(_window_k(pc, window)) for pc in pcs]
    n = len(pts)
    return (
        sum(p[0] for p in pts) / n,
        sum(p[1] for p in pts) / n,
        sum(p[2] for p in pts) / n,
    )


def _place_near(prev: int | None, pc: int, rng: random.Random) -> int:
    choices = [12 * octave + pc for octave in range(5, 7) if SOPRANO_LO <= 12 * octave + pc <= SOPRANO_HI]
    if not choices:
        choices = [60 + pc]
    if prev is None:
        return rng.choice(choices)
    return min(choices, key=lambda m: (abs(m - prev), m))


def _soprano_voice(rng: random.Random, prev: int | None, pcs: list[int]) -> int:
    choices = []
    for pc in pcs:
        for octave in range(5, 7):
            midi = 12 * octave + pc
            if SOPRANO_LO <= midi <= SOPRANO_HI:
                choices.append(midi)
    if prev is None:
        return rng.choice(choices)
    choices.sort(key=lambda m: (abs(m - prev), m))
    pool = choices[:3] if len(choices) >= 3 else choices
    weights = [3, 2, 1][: len(pool)]
    return rng.choices(pool, weights=weights, k=1)[0]


def make_chorale(seed: int) -> dict:
    rng = random.Random(seed)
    mode = "major" if rng.random() < 0.55 else "minor"
    tonic = rng.randrange(12)
    scale = MAJOR_SCALE if mode == "major" else MINOR_SCALE
    chords = MAJOR_CHORDS if mode == "major" else MINOR_CHORDS
    phrases = _degree_stream(rng, mode, rng.choice((3, 4, 4)), tonic)
    window = _fifth_window(tonic, mode)
    key_pt = key_point_for(tonic if mode == "major" else 12 + tonic)
    tonic_degree = "I" if mode == "major" else "i"
    prev_center = None

    def within_caps(pcs) -> bool:
        center = _set_center(pcs, window)
        if point_distance(center, key_pt) > STRAIN_CAP:
            return False
        return prev_center is None or point_distance(prev_center, center) <= JUMP_CAP

    slices = []
    soprano = None
    beat = 0
    for p_idx, phrase in enumerate(phrases):
        for c_idx, (degree, offset) in enumerate(phrase):
            rel = chords[degree]
            # smoothness fallbacks: the scheduled chord, then dominant, then tonic
            candidates = [
                [(tonic + offset + r) % 12 for r in rel],
                [(tonic + r) % 12 for r in chords["V"]],
                [(tonic + r) % 12 for r in chords[tonic_degree]],
            ]
            pc_set = next((pcs for pcs in candidates if within_caps(pcs)), candidates[-1])
            cadence_zone = c_idx == len(phrase) - 1
            held = c_idx > 0 and phrase[c_idx - 1] == phrase[c_idx]
            soprano = _soprano_voice(rng, soprano, pc_set)

            ornament = rng.random()
            if not cadence_zone and ornament < 0.14 and len(rel) == 3:
                # 4-3 suspension: the third is displaced by the fourth on the beat
                third = (tonic + offset + rel[1]) % 12
                fourth = (tonic + offset + (rel[0] + 5) % 12) % 12
                if _spellable(fourth, window):
                    pc_set = [fourth if pc == third else pc for pc in pc_set]
                if soprano % 12 == third:
                    soprano = _place_near(soprano, fourth, rng)
            elif not cadence_zone and ornament < 0.70:
                # accented soprano passing/neighbor tone against the harmony
                step = rng.choice((-2, -1, 1, 2))
                target = soprano + step
                target_pc = target % 12
                diatonic = (target_pc - tonic) % 12 in scale
                if (diatonic or rng.random() < 0.55) and target_pc not in pc_set:
                    soprano = target  # melody leaves the chord; harmony holds
            elif not cadence_zone and ornament < 0.88 and len(pc_set) < 5:
                # inner-voice passing tone sounding on the beat
                passing = (tonic + rng.choice(scale)) % 12
                if passing not in pc_set and _spellable(passing, window) and within_caps(pc_set + [passing]):
                    pc_set.append(passing)

            if held and rng.random() < 0.6 and len(pc_set) < 5:
                # moving inner voice against a repeated harmony
                neighbor = (tonic + rng.choice(scale)) % 12
                if neighbor not in pc_set and _spellable(neighbor, window) and within_caps(pc_set + [neighbor]):
                    pc_set.append(neighbor)

            duration = 1.0
            hold = 1
            if c_idx == len(phrase) - 1:  # fermata
                hold = 2
                duration = float(hold)
            for h in range(hold):
                beat_set = list(pc_set)
                if h > 0 and rng.random() < 0.45 and len(beat_set) < 5:
                    walker = (tonic + rng.choice(scale)) % 12
                    if walker not in beat_set and _spellable(walker, window) and within_caps(beat_set + [walker]):
                        beat_set.append(walker)
                prev_center = _set_center(beat_set, window)
                slices.append(
                    {
                        "melody": {"midi": soprano, "duration_beats": duration},
                        "chord": sorted({FLAT_NAMES[pc] for pc in beat_set}),
                        "downbeat": beat % 4 == 0,
                    }
                )
                beat += 1

    return {
        "title": f"chorale_{seed:03d}_{FLAT_NAMES[tonic]}_{mode}",
        "beats_per_bar": 4,
        "slices": slices,
        "intended_tonality": tonic if mode == "major" else 12 + tonic,
    }


def _passes_quality_gate(doc: dict) -> bool:
    """Re-analyze with the real pipeline; reject pieces with freak jumps or strains."""
    from spiraltension.dataset import score_from_dict
    from spiraltension.features import extract_features

    score = score_from_dict(doc)
    feats = extract_features(score.chords(), melody=score.melody_tokens())
    return max(feats.distance) <= 2.2 and max(feats.strain) <= 1.9


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=64)
    parser.add_argument("--out", default="data/chorales")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    seed = 0
    while written < args.count:
        doc = make_chorale(seed)
        seed += 1
        if not _passes_quality_gate(doc):
            continue
        (out / f"{doc['title']}.json").write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")
        written += 1
    print(f"wrote {written} scores to {out} (scanned {seed} seeds)")


if __name__ == "__main__":
    main()
