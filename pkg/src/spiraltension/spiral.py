"""Spiral Array geometry: pitch, chord and key coordinates on the line-of-fifths helix.

Pitches sit on a helix that advances a quarter turn per perfect fifth.  The
trigonometric factors of a quarter turn are exact (values in {-1, 0, 1}), so
all coordinates here are computed from an integer lookup table rather than
floating sin/cos.  Chords and keys are fixed convex combinations of pitch
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigurationError, InputError

Point3 = tuple[float, float, float]

# sin(k*pi/2) and cos(k*pi/2) for integer k, indexed by k mod 4.
_QSIN = (0.0, 1.0, 0.0, -1.0)
_QCOS = (1.0, 0.0, -1.0, 0.0)

FLAT = "♭"

#: Canonical flat-preferring labels, indexed by pitch class (C = 0).
PITCH_LABELS = (
    "C", f"D{FLAT}", "D", f"E{FLAT}", "E", "F",
    f"G{FLAT}", "G", f"A{FLAT}", "A", f"B{FLAT}", "B",
)

_LABEL_TO_PC = {name: pc for pc, name in enumerate(PITCH_LABELS)}

_ALIASES = {
    "Db": 1, "C#": 1, "Eb": 3, "D#": 3, "Gb": 6, "F#": 6,
    "Ab": 8, "G#": 8, "Bb": 10, "A#": 10,
    "B#": 0, "Cb": 11, "E#": 5, "Fb": 4,
}

#: Fifth indices admissible as spelling candidates.
K_MIN, K_MAX = -11, 11

_DEFAULT_WEIGHTS = (0.5353, 0.2743, 0.1904)


@dataclass(frozen=True)
class SpiralParams:
    """Helix calibration and the chord/key mixing weights."""

    r: float = 1.0
    h: float = 0.4
    w: tuple[float, float, float] = _DEFAULT_WEIGHTS
    u: tuple[float, float, float] = _DEFAULT_WEIGHTS
    omega: tuple[float, float, float] = _DEFAULT_WEIGHTS
    v: tuple[float, float, float] = _DEFAULT_WEIGHTS
    tau1: float = 0.75
    tau2: float = 0.75

    def __post_init__(self) -> None:
        if self.r <= 0 or self.h <= 0:
            raise ConfigurationError("spiral radius and altitude must be positive")
        for name in ("w", "u", "omega", "v"):
            vec = getattr(self, name)
            if len(vec) != 3 or abs(sum(vec) - 1.0) > 1e-9:
                raise ConfigurationError(f"weight vector {name} must have 3 entries summing to 1")
        for name in ("tau1", "tau2"):
            t = getattr(self, name)
            if not 0.0 <= t <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1]")


DEFAULT_PARAMS = SpiralParams()


def normalize_label(name: str) -> str:
    """Map a pitch name (sharp or ASCII-flat spellings allowed) to its canonical label."""
    if name in _LABEL_TO_PC:
        return name
    if name in _ALIASES:
        return PITCH_LABELS[_ALIASES[name]]
    raise InputError(f"unknown pitch label: {name!r}")


def label_pitch_class(name: str) -> int:
    return _LABEL_TO_PC[normalize_label(name)]


def fifth_index_pitch_class(k: int) -> int:
    """Pitch class of fifth index ``k`` (C = 0; one fifth = 7 semitones)."""
    return (7 * k) % 12


def label_of_fifth_index(k: int) -> str:
    return PITCH_LABELS[fifth_index_pitch_class(k)]


def label_candidates(name: str) -> tuple[int, ...]:
    """All fifth indices in [-11, 11] carrying this label, ascending.

    Labels repeat every 12 fifth steps, so every label has two candidates
    except C, whose second copy falls outside the admissible range.
    """
    pc = label_pitch_class(name)
    base = (7 * pc) % 12  # 7 is self-inverse mod 12
    ks = sorted(k for k in (base - 12, base) if K_MIN <= k <= K_MAX)
    return tuple(ks)


def midi_to_label(midi_pitch: int) -> str:
    if not 0 <= midi_pitch <= 127:
        raise InputError(f"midi pitch out of range: {midi_pitch}")
    return PITCH_LABELS[midi_pitch % 12]


def pitch_coordinate(k: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    """Helix point of fifth index ``k``: (r sin(k*pi/2), r cos(k*pi/2), k h)."""
    q = k % 4
    return (params.r * _QSIN[q], params.r * _QCOS[q], k * params.h)


def _mix(weights: tuple[float, float, float], pts: tuple[Point3, Point3, Point3]) -> Point3:
    return (
        weights[0] * pts[0][0] + weights[1] * pts[1][0] + weights[2] * pts[2][0],
        weights[0] * pts[0][1] + weights[1] * pts[1][1] + weights[2] * pts[2][1],
        weights[0] * pts[0][2] + weights[1] * pts[1][2] + weights[2] * pts[2][2],
    )


def major_chord_coordinate(k: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    """w-weighted combination of the root, fifth and major third pitch points."""
    p = pitch_coordinate
    return _mix(params.w, (p(k, params), p(k + 1, params), p(k + 4, params)))


def minor_chord_coordinate(k: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    """u-weighted combination of the root, fifth and minor third pitch points."""
    p = pitch_coordinate
    return _mix(params.u, (p(k, params), p(k + 1, params), p(k - 3, params)))


def major_key_coordinate(k: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    """omega-weighted combination of the tonic, dominant and subdominant major chords."""
    cm = major_chord_coordinate
    return _mix(params.omega, (cm(k, params), cm(k + 1, params), cm(k - 1, params)))


def minor_key_coordinate(k: int, params: SpiralParams = DEFAULT_PARAMS) -> Point3:
    """v-weighted minor-key center; tau1/tau2 blend the raised and natural scale chords."""
    cM = major_chord_coordinate
    cm = minor_chord_coordinate
    t1, t2 = params.tau1, params.tau2
    up = _mix((t1, 1.0 - t1, 0.0), (cM(k + 1, params), cm(k + 1, params), (0.0, 0.0, 0.0)))
    down = _mix((t2, 1.0 - t2, 0.0), (cm(k - 1, params), cM(k - 1, params), (0.0, 0.0, 0.0)))
    return _mix(params.v, (cm(k, params), up, down))


def point_distance(a: Point3, b: Point3) -> float:
    return math.dist(a, b)
