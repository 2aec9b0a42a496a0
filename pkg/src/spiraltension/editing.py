"""In-place style edits on feature curves: scale, offset, rescale, smooth, point set."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InputError
from .features import FEATURE_NAMES, FeatureSequence

EDIT_OPS = ("scale", "offset", "set_range", "smooth", "set_point")


@dataclass(frozen=True)
class CurveEdit:
    target: str  # tension | distance | strain
    op: str
    segment: tuple[int, int]  # inclusive start/end indices
    value: float | None = None
    low: float | None = None
    high: float | None = None
    window: int | None = None

    def __post_init__(self) -> None:
        if self.target not in FEATURE_NAMES:
            raise InputError(f"unknown edit target: {self.target!r}")
        if self.op not in EDIT_OPS:
            raise InputError(f"unknown edit op: {self.op!r}")
        if self.op in ("scale", "offset", "set_point") and self.value is None:
            raise InputError(f"{self.op} edit needs a value")
        if self.op == "set_range" and (self.low is None or self.high is None):
            raise InputError("set_range edit needs low and high")
        if self.op == "smooth":
            if self.window is None or self.window < 1 or self.window % 2 == 0:
                raise InputError("smooth window must be an odd integer >= 1")

    @classmethod
    def from_dict(cls, doc: dict) -> "CurveEdit":
        try:
            seg = doc["segment"]
            return cls(
                target=doc["target"],
                op=doc["op"],
                segment=(int(seg[0]), int(seg[1])),
                value=doc.get("value"),
                low=doc.get("low"),
                high=doc.get("high"),
                window=doc.get("window"),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"malformed edit: {exc}") from exc


def _apply_one(values: list[float], edit: CurveEdit) -> list[float]:
    start, end = edit.segment
    if not 0 <= start <= end < len(values):
        raise InputError(f"edit segment {edit.segment} out of bounds for length {len(values)}")
    out = list(values)
    seg = out[start : end + 1]
    if edit.op == "scale":
        seg = [v * edit.value for v in seg]
    elif edit.op == "offset":
        seg = [v + edit.value for v in seg]
    elif edit.op == "set_point":
        if start != end:
            raise InputError("set_point edit must address a single index")
        seg = [edit.value]
    elif edit.op == "set_range":
        lo, hi = min(seg), max(seg)
        if hi - lo == 0:
            seg = [(edit.low + edit.high) / 2.0] * len(seg)
        else:
            seg = [edit.low + (v - lo) * (edit.high - edit.low) / (hi - lo) for v in seg]
    elif edit.op == "smooth":
        half = edit.window // 2
        smoothed = []
        for i in range(len(seg)):
            window = [seg[min(max(i + d, 0), len(seg) - 1)] for d in range(-half, half + 1)]
            smoothed.append(sum(window) / len(window))
        seg = smoothed
    out[start : end + 1] = seg
    return out


def edit_curve(features: FeatureSequence, edits: list[CurveEdit]) -> FeatureSequence:
    """Apply edits in order; unnormalized results are clamped at 0 and keep distance[0] = 0."""
    arrays = {name: list(getattr(features, name)) for name in FEATURE_NAMES}
    for edit in edits:
        arrays[edit.target] = _apply_one(arrays[edit.target], edit)
    if not features.normalized:
        arrays = {name: [max(0.0, v) for v in vals] for name, vals in arrays.items()}
        arrays["distance"][0] = 0.0
    return FeatureSequence(
        tension=arrays["tension"],
        distance=arrays["distance"],
        strain=arrays["strain"],
        tonality=features.tonality,
        normalized=features.normalized,
        norm_stats=features.norm_stats,
        melody=features.melody,
    )
