import pytest

from spiraltension.editing import CurveEdit, edit_curve
from spiraltension.errors import InputError
from spiraltension.features import FeatureSequence


def seq():
    return FeatureSequence([1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 1.0, 1.0], [0.5, 0.5, 0.5, 0.5], 0)


def test_empty_edit_list_is_identity():
    before = seq()
    after = edit_curve(before, [])
    assert after.to_dict() == before.to_dict()


def test_scale_identity_and_offset_identity():
    assert edit_curve(seq(), [CurveEdit("tension", "scale", (0, 3), value=1.0)]).tension == seq().tension
    assert edit_curve(seq(), [CurveEdit("tension", "offset", (0, 3), value=0.0)]).tension == seq().tension


def test_scale_segment():
    out = edit_curve(seq(), [CurveEdit("tension", "scale", (0, 2), value=2.0)])
    assert out.tension == [2.0, 4.0, 6.0, 4.0]


def test_offset_clamps_at_zero():
    out = edit_curve(seq(), [CurveEdit("tension", "offset", (0, 3), value=-2.5)])
    assert out.tension == [0.0, 0.0, 0.5, 1.5]


def test_set_point():
    out = edit_curve(seq(), [CurveEdit("strain", "set_point", (2, 2), value=9.0)])
    assert out.strain == [0.5, 0.5, 9.0, 0.5]
    with pytest.raises(InputError):
        edit_curve(seq(), [CurveEdit("strain", "set_point", (1, 2), value=9.0)])


def test_set_range_rescales_linearly():
    out = edit_curve(seq(), [CurveEdit("tension", "set_range", (0, 3), low=0.0, high=6.0)])
    assert out.tension == pytest.approx([0.0, 2.0, 4.0, 6.0])
    const = FeatureSequence([2.0, 2.0], [0.0, 0.0], [1.0, 1.0], 0)
    out = edit_curve(const, [CurveEdit("tension", "set_range", (0, 1), low=1.0, high=3.0)])
    assert out.tension == [2.0, 2.0]


def test_smooth_moving_average():
    out = edit_curve(seq(), [CurveEdit("tension", "smooth", (0, 3), window=3)])
    # edges clamp to the segment boundary values
    assert out.tension == pytest.approx([(1 + 1 + 2) / 3, 2.0, 3.0, (3 + 4 + 4) / 3])
    with pytest.raises(InputError):
        CurveEdit("tension", "smooth", (0, 3), window=2)


def test_distance_zero_pinned():
    out = edit_curve(seq(), [CurveEdit("distance", "offset", (0, 3), value=1.0)])
    assert out.distance[0] == 0.0
    assert out.distance[1:] == [2.0, 2.0, 2.0]


def test_edits_apply_in_order():
    edits = [
        CurveEdit("tension", "offset", (0, 3), value=1.0),
        CurveEdit("tension", "scale", (0, 3), value=2.0),
    ]
    out = edit_curve(seq(), edits)
    assert out.tension == [4.0, 6.0, 8.0, 10.0]


def test_bounds_and_target_validation():
    with pytest.raises(InputError):
        edit_curve(seq(), [CurveEdit("tension", "scale", (0, 4), value=2.0)])
    with pytest.raises(InputError):
        CurveEdit("loudness", "scale", (0, 1), value=2.0)
    with pytest.raises(InputError):
        CurveEdit("tension", "transpose", (0, 1), value=2.0)


def test_metadata_preserved():
    before = seq()
    out = edit_curve(before, [CurveEdit("tension", "scale", (0, 1), value=1.5)])
    assert out.tonality == before.tonality
    assert out.normalized == before.normalized
