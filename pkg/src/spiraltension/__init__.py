"""Tonal tension curves and chord recovery in Spiral Array space."""

from .editing import CurveEdit, edit_curve
from .errors import ConfigurationError, InputError, SpiralTensionError
from .features import (
    FeatureSequence,
    KeyEstimate,
    MelodyToken,
    center_of_effect,
    estimate_key,
    extract_features,
    key_point_for,
    tension_of,
)
from .library import ChordLibrary, LibraryFilter, build_library, classify
from .metrics import che, mctd, mean_cc, srcc
from .recovery import RecoveryConfig, RecoveryResult, mrda, random_features, recover
from .spelling import BeamConfig, Chord, SpelledChord, chord_min_diameter_assignments, spell_sequence
from .spiral import (
    DEFAULT_PARAMS,
    PITCH_LABELS,
    SpiralParams,
    label_candidates,
    major_chord_coordinate,
    major_key_coordinate,
    midi_to_label,
    minor_chord_coordinate,
    minor_key_coordinate,
    pitch_coordinate,
)

__version__ = "0.1.0"

__all__ = [
    "BeamConfig",
    "Chord",
    "ChordLibrary",
    "ConfigurationError",
    "CurveEdit",
    "DEFAULT_PARAMS",
    "FeatureSequence",
    "InputError",
    "KeyEstimate",
    "LibraryFilter",
    "MelodyToken",
    "PITCH_LABELS",
    "RecoveryConfig",
    "RecoveryResult",
    "SpelledChord",
    "SpiralParams",
    "SpiralTensionError",
    "build_library",
    "center_of_effect",
    "che",
    "chord_min_diameter_assignments",
    "classify",
    "edit_curve",
    "estimate_key",
    "extract_features",
    "key_point_for",
    "label_candidates",
    "major_chord_coordinate",
    "major_key_coordinate",
    "mctd",
    "mean_cc",
    "midi_to_label",
    "minor_chord_coordinate",
    "minor_key_coordinate",
    "mrda",
    "pitch_coordinate",
    "random_features",
    "recover",
    "spell_sequence",
    "srcc",
    "tension_of",
]
