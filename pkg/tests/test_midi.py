import pytest

from spiraltension.errors import InputError
from spiraltension.midi import MidiNote, read_midi, write_block_chords


def test_block_chord_round_trip(tmp_path):
    path = tmp_path / "c.mid"
    chords = [("C", "E", "G"), ("F", "A", "C"), ("G", "B", "D", "F")]
    write_block_chords(str(path), chords)
    notes = read_midi(str(path))
    assert len(notes) == 3 + 3 + 4
    by_beat = {}
    for n in notes:
        by_beat.setdefault(int(n.onset_beats), []).append(n.pitch % 12)
        assert n.duration_beats == pytest.approx(1.0)
    assert sorted(by_beat[0]) == [0, 4, 7]
    assert sorted(by_beat[1]) == [0, 5, 9]
    assert sorted(by_beat[2]) == [2, 5, 7, 11]


def test_read_rejects_non_midi(tmp_path):
    bad = tmp_path / "x.mid"
    bad.write_bytes(b"not a midi file")
    with pytest.raises(InputError):
        read_midi(str(bad))


def test_write_rejects_empty(tmp_path):
    with pytest.raises(InputError):
        write_block_chords(str(tmp_path / "e.mid"), [])
