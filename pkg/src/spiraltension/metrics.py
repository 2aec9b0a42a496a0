"""Harmonization quality metrics: chord coverage, histogram entropy, melody-chord distance, SRCC."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InputError
from .features import MelodyToken, melody_pitch_point
from .spelling import SpelledChord
from .spiral import DEFAULT_PARAMS, SpiralParams, point_distance


def mean_cc(chords: list[tuple[str, ...]]) -> float:
    """Distinct pitch-class sets divided by sequence length."""
    if not chords:
        raise InputError("chord coverage of an empty sequence is undefined")
    distinct = {frozenset(c) for c in chords}
    return len(distinct) / len(chords)


def che(chords: list[tuple[str, ...]]) -> float:
    """Shannon entropy (natural log) of the chord occurrence histogram."""
    if not chords:
        raise InputError("chord entropy of an empty sequence is undefined")
    counts: dict[frozenset, int] = {}
    for c in chords:
        key = frozenset(c)
        counts[key] = counts.get(key, 0) + 1
    total = len(chords)
    return -sum((n / total) * math.log(n / total) for n in counts.values())


def mctd(
    melody: list[MelodyToken],
    spelled: list[SpelledChord],
    params: SpiralParams = DEFAULT_PARAMS,
) -> float:
    """Duration-weighted mean distance from each melody note to its chord's center."""
    if len(melody) != len(spelled):
        raise InputError("melody and chord sequences differ in length")
    total = 0.0
    weight = 0.0
    for tok, sp in zip(melody, spelled):
        if tok.midi is None:
            continue
        w = tok.duration_beats if tok.duration_beats > 0 else 1.0
        p = melody_pitch_point(tok.midi, sp.center, params)
        total += w * point_distance(p, sp.center)
        weight += w
    if weight == 0:
        raise InputError("melody contains no sounding notes")
    return total / weight


def srcc(a: list[float], b: list[float]) -> float:
    """Spearman rank correlation with average ranks on ties."""
    if len(a) != len(b) or len(a) < 2:
        raise InputError("SRCC needs two equal-length sequences of length >= 2")
    if len(set(a)) == 1 or len(set(b)) == 1:
        raise InputError("SRCC is undefined for constant input")
    ra = stats.rankdata(a)
    rb = stats.rankdata(b)
    return float(np.corrcoef(ra, rb)[0, 1])


@dataclass
class MetricReport:
    mean_cc: float
    che: float
    mctd: float | None
    srcc: dict[str, float] | None
    sample_count: int

    def to_dict(self) -> dict:
        return {
            "mean_cc": self.mean_cc,
            "che": self.che,
            "mctd": self.mctd,
            "srcc": self.srcc,
            "sample_count": self.sample_count,
        }


def confidence_interval_95(values: list[float]) -> tuple[float, float]:
    """Two-sided 95% t-interval half-width around the mean of per-run values."""
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if len(arr) < 2 or float(arr.std(ddof=1)) == 0.0:
        return mean, 0.0
    half = float(stats.t.ppf(0.975, len(arr) - 1) * arr.std(ddof=1) / math.sqrt(len(arr)))
    return mean, half
