"""Pydantic request/response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from .features import FeatureSequence


class MelodyTokenModel(BaseModel):
    midi: int | None = Field(None, ge=0, le=127)
    duration_beats: float = Field(1.0, ge=0)
    weight: float = 1.0


class NormStatModel(BaseModel):
    mean: float
    std: float


class FeatureFileModel(BaseModel):
    """The versioned feature document exchanged by every component."""

    version: Literal[1] = 1
    tonality: int = Field(ge=0, le=23)
    length: int | None = None
    tension: list[float]
    distance: list[float]
    strain: list[float]
    normalized: bool = False
    norm_stats: dict[str, NormStatModel] | None = None
    melody: list[MelodyTokenModel] | None = None

    @model_validator(mode="after")
    def _check_alignment(self) -> "FeatureFileModel":
        t = len(self.tension)
        if t < 1 or len(self.distance) != t or len(self.strain) != t:
            raise ValueError("tension, distance and strain must share a length >= 1")
        if self.length is None:
            self.length = t
        elif self.length != t:
            raise ValueError("declared length does not match array length")
        if self.melody is not None and len(self.melody) != t:
            raise ValueError("melody must align with the feature arrays")
        return self

    def to_core(self) -> FeatureSequence:
        return FeatureSequence.from_dict(self.model_dump())

    @classmethod
    def from_core(cls, features: FeatureSequence) -> "FeatureFileModel":
        return cls.model_validate(features.to_dict())


class MelodyNoteModel(BaseModel):
    midi: int = Field(ge=0, le=127)
    duration_beats: float = Field(1.0, gt=0)


class SliceModel(BaseModel):
    melody: MelodyNoteModel | None = None
    chord: list[str] = Field(min_length=1, max_length=12)
    downbeat: bool = False


class ScoreModel(BaseModel):
    title: str = "untitled"
    beats_per_bar: int = Field(4, ge=1)
    slices: list[SliceModel] = Field(min_length=1)


class EditModel(BaseModel):
    target: Literal["tension", "distance", "strain"]
    op: Literal["scale", "offset", "set_range", "smooth", "set_point"]
    segment: tuple[int, int]
    value: float | None = None
    low: float | None = None
    high: float | None = None
    window: int | None = None


class EditRequest(BaseModel):
    features: FeatureFileModel
    edits: list[EditModel] = Field(default_factory=list)


class RecoverRequest(BaseModel):
    features: FeatureFileModel
    tonality: int | None = Field(None, ge=0, le=23)
    alpha: float = Field(1.0, ge=0)
    beta: float = Field(1.0, ge=0)
    gamma: float = Field(1.0, ge=0)
    beam_width: int = Field(8, ge=1)
    min_notes: int = Field(2, ge=1, le=5)
    max_notes: int = Field(5, ge=1, le=5)
    quality_filter: list[str] | None = None
    must_contain: list[str] | None = None


class RecoveryResponse(BaseModel):
    chords: list[list[str]]
    spellings: list[list[int]]
    achieved: FeatureFileModel
    total_cost: float
    per_step_rd: list[float]


class MetricsRequest(BaseModel):
    chords: list[list[str]] = Field(min_length=1)
    melody: list[MelodyTokenModel] | None = None
    target_features: FeatureFileModel | None = None
    beam_width: int = Field(8, ge=1)


class MetricsResponse(BaseModel):
    mean_cc: float
    che: float
    mctd: float | None = None
    srcc: dict[str, float] | None = None
    sample_count: int = 1


class LibraryEntryModel(BaseModel):
    set: list[str]
    quality: str
    root: str | None
    min_diameter: float


class LibraryResponse(BaseModel):
    entries: list[LibraryEntryModel]
    count: int


class ErrorBody(BaseModel):
    error: str
    detail: str
