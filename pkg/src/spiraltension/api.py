"""Handler layer: pydantic request models in, pydantic response models out.

Both the FastAPI routes and the CLI subcommands call these functions, which
keeps the two frontends behaviorally identical.
"""

from __future__ import annotations

from functools import lru_cache

from .dataset import Score, Slice, score_from_dict
from .editing import CurveEdit, edit_curve
from .errors import InputError
from .features import FEATURE_NAMES, MelodyToken, extract_features
from .library import ChordLibrary, LibraryFilter, build_library
from .metrics import che, mctd, mean_cc, srcc
from .recovery import RecoveryConfig, RecoveryResult, recover
from .schemas import (
    EditRequest,
    FeatureFileModel,
    LibraryEntryModel,
    LibraryResponse,
    MetricsRequest,
    MetricsResponse,
    RecoverRequest,
    RecoveryResponse,
    ScoreModel,
)
from .spelling import BeamConfig, Chord, spell_sequence


def _score_to_core(model: ScoreModel) -> Score:
    return score_from_dict(model.model_dump())


@lru_cache(maxsize=8)
def cached_library(
    min_notes: int,
    max_notes: int,
    quality_filter: tuple[str, ...] | None,
    must_contain: tuple[str, ...],
) -> ChordLibrary:
    return build_library(
        LibraryFilter(
            min_notes=min_notes,
            max_notes=max_notes,
            quality_allowlist=frozenset(quality_filter) if quality_filter else None,
            must_contain=must_contain,
        )
    )


def analyze_score(
    score: ScoreModel, beam_width: int = 8, tonality: int | None = None
) -> FeatureFileModel:
    core = _score_to_core(score)
    features = extract_features(
        core.chords(),
        BeamConfig(beam_width),
        tonality_override=tonality,
        melody=core.melody_tokens(),
    )
    return FeatureFileModel.from_core(features)


def spell_chords(chords: list[list[str]], beam_width: int = 8) -> list[list[int]]:
    spelled = spell_sequence([Chord.of(c) for c in chords], BeamConfig(beam_width))
    return [list(sp.indices) for sp in spelled]


def recover_features(request: RecoverRequest) -> RecoveryResponse:
    library = cached_library(
        request.min_notes,
        request.max_notes,
        tuple(sorted(request.quality_filter)) if request.quality_filter else None,
        tuple(request.must_contain or ()),
    )
    targets = request.features.to_core()
    tonality = request.tonality if request.tonality is not None else targets.tonality
    config = RecoveryConfig(
        library=library,
        tonality=tonality,
        alpha=request.alpha,
        beta=request.beta,
        gamma=request.gamma,
        beam_width=request.beam_width,
    )
    result = recover(targets, config)
    return RecoveryResponse.model_validate(result.to_dict())


def apply_edits(request: EditRequest) -> FeatureFileModel:
    edits = [CurveEdit.from_dict(e.model_dump()) for e in request.edits]
    edited = edit_curve(request.features.to_core(), edits)
    return FeatureFileModel.from_core(edited)


def compute_metrics(request: MetricsRequest) -> MetricsResponse:
    chords = [tuple(c) for c in request.chords]
    report = MetricsResponse(mean_cc=mean_cc(chords), che=che(chords), sample_count=1)
    spelled = spell_sequence([Chord.of(c) for c in chords], BeamConfig(request.beam_width))
    if request.melody is not None:
        melody = [MelodyToken(t.midi, t.duration_beats, t.weight) for t in request.melody]
        report.mctd = mctd(melody, spelled)
    if request.target_features is not None:
        target = request.target_features.to_core().denormalized()
        achieved = extract_features(
            [Chord.of(c) for c in chords], BeamConfig(request.beam_width),
            tonality_override=target.tonality,
        )
        if target.length != achieved.length:
            raise InputError("target features do not align with the chord sequence")
        correlations = {}
        for name in FEATURE_NAMES:
            try:
                correlations[name] = srcc(getattr(target, name), getattr(achieved, name))
            except InputError:
                pass  # constant curve: correlation undefined, omit
        report.srcc = correlations or None
    return report


def library_entries(
    min_notes: int = 2,
    max_notes: int = 5,
    quality_filter: list[str] | None = None,
    must_contain: list[str] | None = None,
) -> LibraryResponse:
    library = cached_library(
        min_notes,
        max_notes,
        tuple(sorted(quality_filter)) if quality_filter else None,
        tuple(must_contain or ()),
    )
    entries = [LibraryEntryModel.model_validate(e.to_dict()) for e in library.entries]
    return LibraryResponse(entries=entries, count=len(entries))
