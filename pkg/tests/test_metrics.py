import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spiraltension.errors import InputError
from spiraltension.features import MelodyToken
from spiraltension.metrics import che, confidence_interval_95, mctd, mean_cc, srcc
from spiraltension.spelling import BeamConfig, Chord, spell_sequence
from spiraltension.spiral import pitch_coordinate, point_distance


def test_mean_cc_basic():
    distinct = [("C", "E", "G"), ("F", "A", "C"), ("G", "B", "D"), ("A", "C", "E")]
    assert mean_cc(distinct) == 1.0
    assert mean_cc([("C", "E", "G")] * 4) == 0.25
    # pitch-class sets, not label order, define identity
    assert mean_cc([("C", "E", "G"), ("G", "C", "E")]) == 0.5


def test_che_basic():
    assert che([("C", "E", "G")] * 7) == 0.0
    eight = [tuple([lab]) for lab in ("C", "D", "E", "F", "G", "A", "B", "B♭")]
    assert che(eight) == pytest.approx(math.log(8), abs=1e-12)


def test_che_bounded_by_log_t():
    chords = [("C",), ("C",), ("D",), ("E",)]
    assert 0 <= che(chords) <= math.log(len(chords)) + 1e-12


def test_mctd_melody_is_its_own_chord():
    spelled = spell_sequence([Chord.of(["C"])], BeamConfig())
    assert mctd([MelodyToken(60, 1.0, 1.0)], spelled) == pytest.approx(0.0, abs=1e-12)


def test_mctd_two_candidate_choice():
    spelled = spell_sequence([Chord.of(["C"])], BeamConfig())
    value = mctd([MelodyToken(67, 1.0, 1.0)], spelled)
    near = point_distance(pitch_coordinate(1), pitch_coordinate(0))
    far = point_distance(pitch_coordinate(-11), pitch_coordinate(0))
    assert value == pytest.approx(min(near, far), abs=1e-9)
    assert value == pytest.approx(1.4697, abs=1e-4)


def test_mctd_duration_weighting():
    spelled = spell_sequence([Chord.of(["C"]), Chord.of(["C"])], BeamConfig())
    melody = [MelodyToken(60, 3.0, 1.0), MelodyToken(67, 1.0, 1.0)]
    d_g = point_distance(pitch_coordinate(1), pitch_coordinate(0))
    assert mctd(melody, spelled) == pytest.approx((3.0 * 0.0 + 1.0 * d_g) / 4.0, abs=1e-9)


def test_mctd_transposition_invariance():
    a = spell_sequence([Chord.of(["C", "E", "G"])], BeamConfig())
    b = spell_sequence([Chord.of(["D", "Gb", "A"])], BeamConfig())
    assert mctd([MelodyToken(64, 1.0, 1.0)], a) == pytest.approx(
        mctd([MelodyToken(66, 1.0, 1.0)], b), abs=1e-9
    )


def test_mctd_errors():
    spelled = spell_sequence([Chord.of(["C"])], BeamConfig())
    with pytest.raises(InputError):
        mctd([MelodyToken(60, 1.0, 1.0)] * 2, spelled)
    with pytest.raises(InputError):
        mctd([MelodyToken(None, 1.0, 1.0)], spelled)


def test_srcc_hand_oracle():
    assert srcc([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5, abs=1e-12)
    assert srcc([1, 2, 3, 4], [10, 20, 30, 40]) == 1.0
    assert srcc([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0


def test_srcc_errors():
    with pytest.raises(InputError):
        srcc([1.0], [1.0])
    with pytest.raises(InputError):
        srcc([1.0, 1.0], [1.0, 2.0])
    with pytest.raises(InputError):
        srcc([1.0, 2.0], [1.0, 2.0, 3.0])


@given(st.lists(st.floats(-100, 100), min_size=3, max_size=20, unique=True))
def test_srcc_bounds(values):
    shuffled = list(reversed(values))
    r = srcc(values, shuffled)
    assert -1.0 - 1e-9 <= r <= 1.0 + 1e-9


def test_confidence_interval():
    mean, half = confidence_interval_95([1.0, 1.0, 1.0])
    assert mean == 1.0 and half == 0.0
    mean, half = confidence_interval_95([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    # hand value: t(0.975, 3) * std / sqrt(4) = 3.1824 * 1.2910 / 2
    assert half == pytest.approx(3.182446 * np.std([1, 2, 3, 4], ddof=1) / 2, abs=1e-4)
