"""Enharmonic spelling of chord sequences.

Each pitch label owns one or two fifth-index candidates.  A chord is first
spelled in isolation by enumerating every candidate combination and keeping
all assignments of minimal cloud diameter; a sequence is then resolved by
beam search over those tied sets, minimizing the total travel of the chord
centers between consecutive slices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import ConfigurationError, InputError
from .spiral import (
    DEFAULT_PARAMS,
    Point3,
    SpiralParams,
    label_candidates,
    normalize_label,
    pitch_coordinate,
    point_distance,
)

#: Two float costs or diameters closer than this are treated as tied.
TIE_EPS = 1e-9

MAX_CHORD_SIZE = 5


@dataclass(frozen=True)
class Chord:
    """An unordered chord slice; duplicate labels are dropped, order of first occurrence kept."""

    labels: tuple[str, ...]

    @classmethod
    def of(cls, names) -> "Chord":
        seen: dict[str, None] = {}
        for name in names:
            seen.setdefault(normalize_label(name), None)
        labels = tuple(seen)
        if not 1 <= len(labels) <= MAX_CHORD_SIZE:
            raise InputError(f"chord must hold 1..{MAX_CHORD_SIZE} distinct labels, got {len(labels)}")
        return cls(labels)


@dataclass(frozen=True)
class SpelledChord:
    """One chord with a concrete fifth-index row, its diameter and center of effect."""

    labels: tuple[str, ...]
    indices: tuple[int, ...]
    diameter: float
    center: Point3


@dataclass(frozen=True)
class BeamConfig:
    width: int = 8

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ConfigurationError("beam width must be >= 1")


def _cloud_diameter(points: list[Point3]) -> float:
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = point_distance(points[i], points[j])
            if d > best:
                best = d
    return best


def _cloud_center(points: list[Point3]) -> Point3:
    n = len(points)
    return (
        sum(p[0] for p in points) / n,
        sum(p[1] for p in points) / n,
        sum(p[2] for p in points) / n,
    )


def _row_tie_key(row: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    # |2k - 3| centers ties slightly sharp of C, which keeps tied spellings on
    # the side where every key's full diatonic window fits the [-11, 11] range
    return (sum(abs(2 * k - 3) for k in row), row)


def chord_min_diameter_assignments(
    chord: Chord, params: SpiralParams = DEFAULT_PARAMS
) -> tuple[float, list[tuple[int, ...]]]:
    """Minimal cloud diameter of a chord and every assignment achieving it.

    Enumerates the full cartesian product of per-label candidates (at most
    2^5 = 32 rows) and keeps all rows within ``TIE_EPS`` of the optimum,
    ordered by the spelling tie-break (smaller sum |k|, then lexicographic).
    """
    candidate_sets = [label_candidates(name) for name in chord.labels]
    scored: list[tuple[float, tuple[int, ...]]] = []
    best = math.inf
    for row in itertools.product(*candidate_sets):
        pts = [pitch_coordinate(k, params) for k in row]
        d = _cloud_diameter(pts)
        scored.append((d, row))
        if d < best:
            best = d
    rows = [row for d, row in scored if d <= best + TIE_EPS]
    rows.sort(key=_row_tie_key)
    return best, rows


def spelled_rows(
    chord: Chord, params: SpiralParams = DEFAULT_PARAMS
) -> list[SpelledChord]:
    """All minimal-diameter spellings of one chord, with centers, in tie-break order."""
    diameter, rows = chord_min_diameter_assignments(chord, params)
    out = []
    for row in rows:
        pts = [pitch_coordinate(k, params) for k in row]
        out.append(SpelledChord(chord.labels, row, diameter, _cloud_center(pts)))
    return out


def _quantize(cost: float) -> int:
    return round(cost / TIE_EPS)


def spell_sequence(
    chords: list[Chord],
    beam: BeamConfig = BeamConfig(),
    params: SpiralParams = DEFAULT_PARAMS,
) -> list[SpelledChord]:
    """Resolve a whole sequence against Algorithm constraints.

    Every returned row belongs to its chord's minimal-diameter set; among the
    beam-explored combinations the result minimizes the summed center travel
    between consecutive chords.  Ties fall to the path with the smaller row
    tie-break total, then the lexicographically smaller concatenated vector.
    """
    if not chords:
        raise InputError("cannot spell an empty chord sequence")
    per_chord = [spelled_rows(c, params) for c in chords]

    # state: (quantized cost, tie total, flat index tuple, float cost, rows)
    states = [(0, 0, (), 0.0, [])]
    for options in per_chord:
        expanded = []
        for _, tie_abs, tie_flat, cost, rows in states:
            prev_center = rows[-1].center if rows else None
            for sp in options:
                step = 0.0 if prev_center is None else point_distance(prev_center, sp.center)
                new_cost = cost + step
                expanded.append((
                    _quantize(new_cost),
                    tie_abs + _row_tie_key(sp.indices)[0],
                    tie_flat + sp.indices,
                    new_cost,
                    rows + [sp],
                ))
        expanded.sort(key=lambda s: (s[0], s[1], s[2]))
        states = expanded[: beam.width]
    return states[0][4]
