import math

import pytest
from hypothesis import given, strategies as st

from spiraltension.errors import ConfigurationError, InputError
from spiraltension.spiral import (
    DEFAULT_PARAMS,
    PITCH_LABELS,
    SpiralParams,
    label_candidates,
    major_chord_coordinate,
    major_key_coordinate,
    midi_to_label,
    minor_chord_coordinate,
    minor_key_coordinate,
    normalize_label,
    pitch_coordinate,
    point_distance,
)


def test_pitch_coordinate_quarter_turns():
    assert pitch_coordinate(0) == (0.0, 1.0, 0.0)
    assert pitch_coordinate(1) == (1.0, 0.0, 0.4)
    assert pitch_coordinate(-6) == (0.0, -1.0, pytest.approx(-2.4))


def test_pitch_xy_exactness():
    for k in range(-30, 31):
        x, y, _ = pitch_coordinate(k)
        assert x in (-1.0, 0.0, 1.0) and y in (-1.0, 0.0, 1.0)
        assert abs(x) + abs(y) == 1.0


def test_fifth_step_distance_constant():
    expected = math.sqrt(2 * 1.0**2 + 0.4**2)
    for k in range(-11, 11):
        d = point_distance(pitch_coordinate(k), pitch_coordinate(k + 1))
        assert d == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(1.4697, abs=1e-4)


@given(st.integers(-40, 40), st.lists(st.integers(-20, 20), min_size=2, max_size=6))
def test_screw_motion_rigidity(delta, ks):
    for i in range(len(ks)):
        for j in range(i + 1, len(ks)):
            d0 = point_distance(pitch_coordinate(ks[i]), pitch_coordinate(ks[j]))
            d1 = point_distance(pitch_coordinate(ks[i] + delta), pitch_coordinate(ks[j] + delta))
            assert abs(d0 - d1) < 1e-9


def test_major_chord_coordinate_hand_expanded():
    # w1*P(0) + w2*P(1) + w3*P(4) with exact quarter-turn points
    x = 0.2743 * 1.0
    y = 0.5353 + 0.1904
    z = 0.2743 * 0.4 + 0.1904 * 1.6
    assert major_chord_coordinate(0) == pytest.approx((x, y, z), abs=1e-12)


def test_minor_chord_coordinate_hand_expanded():
    # u1*P(0) + u2*P(1) + u3*P(-3); P(-3) = (1, 0, -1.2)
    x = 0.2743 + 0.1904
    y = 0.5353
    z = 0.2743 * 0.4 - 0.1904 * 1.2
    assert minor_chord_coordinate(0) == pytest.approx((x, y, z), abs=1e-12)


def test_major_key_coordinate_is_weighted_chord_mix():
    w = DEFAULT_PARAMS.omega
    cm = [major_chord_coordinate(k) for k in (0, 1, -1)]
    expected = tuple(sum(w[i] * cm[i][axis] for i in range(3)) for axis in range(3))
    assert major_key_coordinate(0) == pytest.approx(expected, abs=1e-12)


def test_minor_key_tau_one_degenerates():
    params = SpiralParams(tau1=1.0, tau2=1.0)
    v = params.v
    parts = [
        minor_chord_coordinate(0, params),
        major_chord_coordinate(1, params),
        minor_chord_coordinate(-1, params),
    ]
    expected = tuple(sum(v[i] * parts[i][axis] for i in range(3)) for axis in range(3))
    assert minor_key_coordinate(0, params) == pytest.approx(expected, abs=1e-12)


def test_key_coordinates_screw_related():
    for k in (-3, 0, 4):
        a = major_key_coordinate(k)
        b = major_key_coordinate(k + 1)
        d = point_distance(a, b)
        d0 = point_distance(major_key_coordinate(0), major_key_coordinate(1))
        assert d == pytest.approx(d0, abs=1e-9)


@pytest.mark.parametrize(
    "label,expected",
    [("C", (0,)), ("G", (-11, 1)), ("G♭", (-6, 6)), ("F", (-1, 11)), ("B", (-7, 5))],
)
def test_label_candidates_table(label, expected):
    assert label_candidates(label) == expected


def test_label_candidates_partition():
    seen = []
    for label in PITCH_LABELS:
        seen.extend(label_candidates(label))
    assert sorted(seen) == list(range(-11, 12))


def test_midi_to_label():
    assert midi_to_label(60) == "C"
    assert midi_to_label(61) == "D♭"
    assert midi_to_label(66) == "G♭"
    with pytest.raises(InputError):
        midi_to_label(128)


def test_normalize_label_aliases():
    assert normalize_label("C#") == "D♭"
    assert normalize_label("Bb") == "B♭"
    assert normalize_label("B♭") == "B♭"
    with pytest.raises(InputError):
        normalize_label("H")


def test_params_validation():
    with pytest.raises(ConfigurationError):
        SpiralParams(r=-1.0)
    with pytest.raises(ConfigurationError):
        SpiralParams(w=(0.5, 0.5, 0.5))
    with pytest.raises(ConfigurationError):
        SpiralParams(tau1=1.5)
