"""The recovery search space: every pitch-class set up to five notes, with geometry attached.

Entries carry a root/quality classification from interval-template matching
(triads and common sevenths; anything else is "other") plus the precomputed
minimal-diameter spellings so recovery never re-runs the enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ConfigurationError, InputError
from .spelling import Chord, SpelledChord, spelled_rows
from .spiral import DEFAULT_PARAMS, PITCH_LABELS, SpiralParams, label_pitch_class

#: (quality tag, relative pitch-class template); checked in order per root.
_TEMPLATES = (
    ("maj", frozenset({0, 4, 7})),
    ("min", frozenset({0, 3, 7})),
    ("dim", frozenset({0, 3, 6})),
    ("aug", frozenset({0, 4, 8})),
    ("sus", frozenset({0, 5, 7})),
    ("sus", frozenset({0, 2, 7})),
    ("maj7", frozenset({0, 4, 7, 11})),
    ("min7", frozenset({0, 3, 7, 10})),
    ("dom7", frozenset({0, 4, 7, 10})),
    ("dim7", frozenset({0, 3, 6, 9})),
    ("half-dim7", frozenset({0, 3, 6, 10})),
)

QUALITY_TAGS = tuple(dict.fromkeys(tag for tag, _ in _TEMPLATES)) + ("other",)


def classify(labels) -> tuple[str, str | None]:
    """Root + quality of a pitch-class set; first match over chromatic roots wins."""
    pcs = sorted({label_pitch_class(name) for name in labels})
    if not pcs:
        raise InputError("cannot classify an empty set")
    pc_set = set(pcs)
    for root in pcs:
        relative = frozenset((pc - root) % 12 for pc in pc_set)
        for tag, template in _TEMPLATES:
            if relative == template:
                return tag, PITCH_LABELS[root]
    return "other", None


@dataclass(frozen=True)
class ChordEntry:
    labels: tuple[str, ...]  # sorted by pitch class
    quality: str
    root: str | None
    min_diameter: float
    spellings: tuple[SpelledChord, ...]  # minimal-diameter rows in tie-break order

    def to_dict(self) -> dict:
        return {
            "set": list(self.labels),
            "quality": self.quality,
            "root": self.root,
            "min_diameter": self.min_diameter,
        }


@dataclass(frozen=True)
class LibraryFilter:
    min_notes: int = 2
    max_notes: int = 5
    quality_allowlist: frozenset[str] | None = None
    must_contain: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.min_notes <= self.max_notes <= 5:
            raise ConfigurationError("note bounds must satisfy 1 <= min <= max <= 5")
        if self.quality_allowlist is not None:
            unknown = set(self.quality_allowlist) - set(QUALITY_TAGS)
            if unknown:
                raise ConfigurationError(f"unknown quality tags: {sorted(unknown)}")


@dataclass(frozen=True)
class ChordLibrary:
    entries: tuple[ChordEntry, ...]
    filter: LibraryFilter
    params: SpiralParams

    def __len__(self) -> int:
        return len(self.entries)


def build_library(
    lib_filter: LibraryFilter = LibraryFilter(), params: SpiralParams = DEFAULT_PARAMS
) -> ChordLibrary:
    """Enumerate all admissible pitch-class sets, size ascending then lexicographic."""
    required = frozenset(label_pitch_class(name) for name in lib_filter.must_contain)
    entries = []
    for size in range(lib_filter.min_notes, lib_filter.max_notes + 1):
        for combo in itertools.combinations(range(12), size):
            if not required <= set(combo):
                continue
            labels = tuple(PITCH_LABELS[pc] for pc in combo)
            quality, root = classify(labels)
            if lib_filter.quality_allowlist is not None and quality not in lib_filter.quality_allowlist:
                continue
            rows = spelled_rows(Chord(labels), params)
            entries.append(
                ChordEntry(labels, quality, root, rows[0].diameter, tuple(rows))
            )
    return ChordLibrary(tuple(entries), lib_filter, params)
