"""Minimal standard-MIDI-file reading and block-chord writing.

Reading collapses all tracks into a list of (onset_beats, duration_beats,
pitch) notes, with one beat = one quarter note.  Writing renders recovered
progressions as one-beat block chords for auditioning.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import InputError
from .spiral import label_pitch_class


@dataclass(frozen=True)
class MidiNote:
    onset_beats: float
    duration_beats: float
    pitch: int


def _read_varlen(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    while True:
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos


def read_midi(path: str) -> list[MidiNote]:
    """Parse note events from a format 0/1 SMF; tempo is ignored (beats are quarters)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != b"MThd" or len(data) < 14:
        raise InputError(f"not a standard MIDI file: {path}")
    header_len, fmt, ntrks, division = struct.unpack(">IHHH", data[4:14])
    if division & 0x8000:
        raise InputError("SMPTE time division is not supported")
    if division == 0:
        raise InputError("zero time division")
    pos = 8 + header_len
    notes: list[MidiNote] = []
    for _ in range(ntrks):
        if data[pos : pos + 4] != b"MTrk":
            raise InputError("malformed MIDI track header")
        (length,) = struct.unpack(">I", data[pos + 4 : pos + 8])
        track = data[pos + 8 : pos + 8 + length]
        pos += 8 + length
        notes.extend(_parse_track(track, division))
    notes.sort(key=lambda n: (n.onset_beats, n.pitch))
    return notes


def _parse_track(track: bytes, division: int) -> list[MidiNote]:
    notes = []
    open_notes: dict[int, int] = {}  # pitch -> onset tick
    tick = 0
    p = 0
    status = 0
    while p < len(track):
        delta, p = _read_varlen(track, p)
        tick += delta
        byte = track[p]
        if byte & 0x80:
            status = byte
            p += 1
        if status == 0xFF:  # meta
            p += 1  # type
            length, p = _read_varlen(track, p)
            p += length
            continue
        if status in (0xF0, 0xF7):  # sysex
            length, p = _read_varlen(track, p)
            p += length
            continue
        kind = status & 0xF0
        if kind in (0x80, 0x90, 0xA0, 0xB0, 0xE0):
            d1, d2 = track[p], track[p + 1]
            p += 2
            if kind == 0x90 and d2 > 0:
                open_notes.setdefault(d1, tick)
            elif kind == 0x80 or (kind == 0x90 and d2 == 0):
                onset = open_notes.pop(d1, None)
                if onset is not None and tick > onset:
                    notes.append(MidiNote(onset / division, (tick - onset) / division, d1))
        elif kind in (0xC0, 0xD0):
            p += 1
        else:
            raise InputError(f"unexpected MIDI status byte 0x{status:02x}")
    return notes


def _varlen(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def write_block_chords(path: str, chords: list[tuple[str, ...]], tempo_bpm: int = 100) -> None:
    """Write each chord as a one-beat block in octave 4, lowest pitch class first."""
    if not chords:
        raise InputError("no chords to write")
    division = 480
    events = bytearray()
    events += _varlen(0) + bytes([0xFF, 0x51, 0x03]) + int(60_000_000 / tempo_bpm).to_bytes(3, "big")
    for chord in chords:
        pitches = sorted(60 + label_pitch_class(name) for name in chord)
        for i, pitch in enumerate(pitches):
            events += _varlen(0) + bytes([0x90, pitch, 80] if i == 0 else [pitch, 80])
        for i, pitch in enumerate(pitches):
            events += _varlen(division if i == 0 else 0) + bytes([0x80, pitch, 0] if i == 0 else [pitch, 0])
    events += _varlen(0) + bytes([0xFF, 0x2F, 0x00])
    track = b"MTrk" + struct.pack(">I", len(events)) + bytes(events)
    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, division)
    with open(path, "wb") as fh:
        fh.write(header + track)
