"""Tension / distance / strain curves and 24-class tonality estimation.

Tension of a chord is its spelled cloud diameter, distance is the travel of
the center of effect between consecutive chords, and strain is the distance
from a chord's center to the coordinate of the governing key.  Tonality is
the nearest key coordinate to the mean of every sounding pitch point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputError
from .spelling import BeamConfig, Chord, SpelledChord, spell_sequence
from .spiral import (
    DEFAULT_PARAMS,
    K_MAX,
    K_MIN,
    PITCH_LABELS,
    Point3,
    SpiralParams,
    fifth_index_pitch_class,
    major_key_coordinate,
    minor_key_coordinate,
    pitch_coordinate,
    point_distance,
)

FEATURE_NAMES = ("tension", "distance", "strain")

FILE_VERSION = 1


@dataclass(frozen=True)
class KeyEstimate:
    tonality: int  # 0-11 C..B major, 12-23 C..B minor, chromatic order
    key_point: Point3
    tonic_k: int


@dataclass
class MelodyToken:
    """One melody slice: MIDI pitch (None = rest), duration in beats, beat-strength weight."""

    midi: int | None
    duration_beats: float = 1.0
    weight: float = 1.0

    def to_dict(self) -> dict:
        return {"midi": self.midi, "duration_beats": self.duration_beats, "weight": self.weight}

    @classmethod
    def from_dict(cls, d: dict) -> "MelodyToken":
        return cls(d.get("midi"), float(d.get("duration_beats", 1.0)), float(d.get("weight", 1.0)))


@dataclass
class FeatureSequence:
    """Aligned perceptual feature arrays plus the piece's tonality class."""

    tension: list[float]
    distance: list[float]
    strain: list[float]
    tonality: int
    normalized: bool = False
    norm_stats: dict[str, dict[str, float]] | None = None
    melody: list[MelodyToken] | None = None

    def __post_init__(self) -> None:
        t = len(self.tension)
        if t < 1 or len(self.distance) != t or len(self.strain) != t:
            raise InputError("feature arrays must share a common length >= 1")
        if not 0 <= self.tonality <= 23:
            raise InputError(f"tonality must lie in 0..23, got {self.tonality}")
        if self.melody is not None and len(self.melody) != t:
            raise InputError("melody array must align with the feature arrays")
        for name in FEATURE_NAMES:
            for v in getattr(self, name):
                if not math.isfinite(v):
                    raise InputError(f"non-finite value in {name}")
                if not self.normalized and v < 0:
                    raise InputError(f"negative value in unnormalized {name}")
        if not self.normalized and abs(self.distance[0]) > 0:
            raise InputError("distance[0] must be 0")

    @property
    def length(self) -> int:
        return len(self.tension)

    def to_dict(self) -> dict:
        doc = {
            "version": FILE_VERSION,
            "tonality": self.tonality,
            "length": self.length,
            "tension": list(self.tension),
            "distance": list(self.distance),
            "strain": list(self.strain),
            "normalized": self.normalized,
        }
        if self.norm_stats is not None:
            doc["norm_stats"] = self.norm_stats
        if self.melody is not None:
            doc["melody"] = [tok.to_dict() for tok in self.melody]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "FeatureSequence":
        if not isinstance(doc, dict):
            raise InputError("feature document must be a JSON object")
        if doc.get("version") != FILE_VERSION:
            raise InputError(f"unsupported feature file version: {doc.get('version')!r}")
        try:
            seq = cls(
                tension=[float(v) for v in doc["tension"]],
                distance=[float(v) for v in doc["distance"]],
                strain=[float(v) for v in doc["strain"]],
                tonality=int(doc["tonality"]),
                normalized=bool(doc.get("normalized", False)),
                norm_stats=doc.get("norm_stats"),
                melody=[MelodyToken.from_dict(m) for m in doc["melody"]] if doc.get("melody") else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed feature document: {exc}") from exc
        if doc.get("length") not in (None, seq.length):
            raise InputError("declared length does not match array length")
        return seq

    def denormalized(self) -> "FeatureSequence":
        """Undo z-scoring using the embedded stats; identity when already raw."""
        if not self.normalized:
            return self
        if not self.norm_stats:
            raise InputError("normalized features carry no norm_stats")
        arrays = {}
        for name in FEATURE_NAMES:
            st = self.norm_stats[name]
            arrays[name] = [max(0.0, v * st["std"] + st["mean"]) for v in getattr(self, name)]
        arrays["distance"][0] = 0.0
        return FeatureSequence(
            tension=arrays["tension"],
            distance=arrays["distance"],
            strain=arrays["strain"],
            tonality=self.tonality,
            normalized=False,
            norm_stats=self.norm_stats,
            melody=self.melody,
        )


def melody_pitch_point(
    midi: int, chord_center: Point3, params: SpiralParams = DEFAULT_PARAMS
) -> Point3:
    """Spiral point of a melody note: the candidate spelling nearest the chord center."""
    from .spiral import label_candidates, midi_to_label

    best = None
    for k in sorted(label_candidates(midi_to_label(midi)), key=lambda k: (abs(k), -k)):
        p = pitch_coordinate(k, params)
        d = point_distance(p, chord_center)
        if best is None or d < best[0] - 1e-9:
            best = (d, p)
    return best[1]


def center_of_effect(points: list[Point3]) -> Point3:
    if not points:
        raise InputError("center of effect of an empty point set is undefined")
    n = len(points)
    return (
        sum(p[0] for p in points) / n,
        sum(p[1] for p in points) / n,
        sum(p[2] for p in points) / n,
    )


def tension_of(points: list[Point3]) -> float:
    """Maximum pairwise distance of the chord's pitch points (cloud diameter)."""
    if not points:
        raise InputError("tension of an empty point set is undefined")
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = point_distance(points[i], points[j])
            if d > best:
                best = d
    return best


def distance_between(ce_prev: Point3, ce_cur: Point3) -> float:
    return point_distance(ce_prev, ce_cur)


def strain_of(chord_center: Point3, key_point: Point3) -> float:
    return point_distance(chord_center, key_point)


def tonality_label(tonality: int) -> str:
    mode = "major" if tonality < 12 else "minor"
    return f"{PITCH_LABELS[tonality % 12]} {mode}"


def canonical_tonic_k(tonality: int) -> int:
    """Fifth index anchoring a 24-class tonality.

    The copy is chosen so that the key's full diatonic window fits [-11, 11]
    on the side the spelling tie-break prefers: majors span tonic-1..tonic+5
    on the line of fifths, so their tonics live in [-6, 5]; minors span
    tonic-4..tonic+5 (the raised seventh sits five fifths up), so their
    tonics live in [-5, 6].
    """
    if not 0 <= tonality <= 23:
        raise InputError(f"tonality must lie in 0..23, got {tonality}")
    base = (7 * (tonality % 12)) % 12
    limit = 5 if tonality < 12 else 6
    return base if base <= limit else base - 12


def key_point_for(tonality: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    k = canonical_tonic_k(tonality)
    if tonality < 12:
        return major_key_coordinate(k, params)
    return minor_key_coordinate(k, params)


def key_candidates(params: SpiralParams = DEFAULT_PARAMS) -> list[KeyEstimate]:
    """Major and minor key coordinates for every admissible tonic fifth index."""
    out = []
    for k in range(K_MIN, K_MAX + 1):
        pc = fifth_index_pitch_class(k)
        out.append(KeyEstimate(pc, major_key_coordinate(k, params), k))
        out.append(KeyEstimate(12 + pc, minor_key_coordinate(k, params), k))
    return out


def estimate_key(points: list[Point3], params: SpiralParams = DEFAULT_PARAMS) -> KeyEstimate:
    """Nearest key coordinate to the mean of all sounding pitch points.

    Both enharmonic tonic spellings compete; the winner only fixes the
    24-class label, whose canonical coordinate (see ``canonical_tonic_k``)
    is returned so that analysis and recovery agree on the key point.
    """
    if not points:
        raise InputError("cannot estimate a key from zero pitch points")
    ce = center_of_effect(points)
    best: tuple | None = None
    for cand in key_candidates(params):
        d = point_distance(cand.key_point, ce)
        rank = (round(d / 1e-9), cand.tonality >= 12, cand.tonality % 12, abs(2 * cand.tonic_k - 3))
        if best is None or rank < best[0]:
            best = (rank, cand)
    tonality = best[1].tonality
    return KeyEstimate(tonality, key_point_for(tonality, params), canonical_tonic_k(tonality))


def normalize_register(
    spelled: list[SpelledChord],
    key_point: Point3,
    params: SpiralParams = DEFAULT_PARAMS,
) -> list[SpelledChord]:
    """Shift a spelled sequence by a whole helix period toward its key anchor.

    A +/-12 fifth shift is a rigid motion, so diameters and center travel are
    untouched; it only decides which enharmonic register the piece is notated
    in.  Re-anchoring to the key's canonical window keeps strain values
    meaningful regardless of which tied register the beam search returned.
    """
    from .spiral import K_MAX, K_MIN

    all_points = [pitch_coordinate(k, params) for sp in spelled for k in sp.indices]
    ce = center_of_effect(all_points)
    best_shift = 0
    best_d = point_distance(ce, key_point)
    for shift in (-12, 12):
        if not all(K_MIN <= k + shift <= K_MAX for sp in spelled for k in sp.indices):
            continue
        shifted_ce = (ce[0], ce[1], ce[2] + shift * params.h)
        d = point_distance(shifted_ce, key_point)
        if d < best_d - 1e-9:
            best_d, best_shift = d, shift
    if best_shift == 0:
        return spelled
    return [
        SpelledChord(
            sp.labels,
            tuple(k + best_shift for k in sp.indices),
            sp.diameter,
            (sp.center[0], sp.center[1], sp.center[2] + best_shift * params.h),
        )
        for sp in spelled
    ]


def features_from_spelled(
    spelled: list[SpelledChord],
    key_point: Point3,
    tonality: int,
    melody: list[MelodyToken] | None = None,
) -> FeatureSequence:
    """Assemble the three curves from already-spelled chords and a key coordinate."""
    tension = [sp.diameter for sp in spelled]
    distance = [0.0]
    for prev, cur in zip(spelled, spelled[1:]):
        distance.append(point_distance(prev.center, cur.center))
    strain = [point_distance(sp.center, key_point) for sp in spelled]
    return FeatureSequence(tension, distance, strain, tonality, melody=melody)


def extract_features(
    chords: list[Chord],
    beam: BeamConfig = BeamConfig(),
    params: SpiralParams = DEFAULT_PARAMS,
    tonality_override: int | None = None,
    melody: list[MelodyToken] | None = None,
) -> FeatureSequence:
    """Spell a chord sequence and compute its tension, distance and strain curves.

    The key is estimated from every spelled pitch point of the piece, each
    sounding event counted once and separate melody notes included, unless
    ``tonality_override`` pins the class.
    """
    spelled = spell_sequence(chords, beam, params)
    if tonality_override is not None:
        estimate = KeyEstimate(
            tonality_override, key_point_for(tonality_override, params), canonical_tonic_k(tonality_override)
        )
    else:
        all_points = [pitch_coordinate(k, params) for sp in spelled for k in sp.indices]
        if melody is not None:
            for tok, sp in zip(melody, spelled):
                if tok.midi is not None:
                    all_points.append(melody_pitch_point(tok.midi, sp.center, params))
        estimate = estimate_key(all_points, params)
    spelled = normalize_register(spelled, estimate.key_point, params)
    return features_from_spelled(spelled, estimate.key_point, estimate.tonality, melody=melody)
