"""End-to-end acceptance checks; each test prints one PASS line (run with -s to see them)."""

import itertools
import random
import time

import pytest

from spiraltension.dataset import AugmentConfig, build_dataset, ingest
from spiraltension.features import extract_features
from spiraltension.library import LibraryFilter, build_library
from spiraltension.metrics import che, mctd, mean_cc
from spiraltension.recovery import RecoveryConfig, mrda, random_features, recover
from spiraltension.spelling import BeamConfig, Chord, spell_sequence, spelled_rows
from spiraltension.spiral import PITCH_LABELS, pitch_coordinate, point_distance
from tests.conftest import CORPUS_DIR


def report(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: PASS{suffix}")


def test_cloud_diameter_oracles():
    expected = {
        (-6, 3, 0): 3.8678,
        (-6, 3, 0, 4): 4.472,
        (6, 3, 0): 3.1241,
        (6, 3, 0, -1): 3.1369,
    }
    for ks, want in expected.items():
        pts = [pitch_coordinate(k) for k in ks]
        got = max(point_distance(a, b) for a, b in itertools.combinations(pts, 2))
        assert got == pytest.approx(want, abs=1e-3), ks
    report("cloud-diameter oracles", "4 spelled chords within 1e-3")


def test_spelling_correctness_and_brute_force_equivalence():
    spelled = spell_sequence([Chord.of(["Gb", "A", "C"])])
    assert [s.indices for s in spelled] == [(6, 3, 0)]

    def brute_best(per_chord):
        best = None
        for combo in itertools.product(*per_chord):
            cost = sum(point_distance(a.center, b.center) for a, b in zip(combo, combo[1:]))
            tie = sum(abs(2 * k - 3) for sp in combo for k in sp.indices)
            flat = tuple(k for sp in combo for k in sp.indices)
            key = (round(cost / 1e-9), tie, flat)
            if best is None or key < best[0]:
                best = (key, combo)
        return [sp.indices for sp in best[1]]

    rng = random.Random(2024)
    mismatches = 0
    for _ in range(500):
        seq = [
            Chord.of(rng.sample(PITCH_LABELS, rng.randint(1, 5)))
            for _ in range(rng.randint(1, 4))
        ]
        per_chord = [spelled_rows(c) for c in seq]
        width = 1
        for rows in per_chord:
            width *= len(rows)
        got = [s.indices for s in spell_sequence(seq, BeamConfig(max(8, width)))]
        if got != brute_best(per_chord):
            mismatches += 1
    assert mismatches == 0
    report("spelling correctness", "tritone chord spelled [6,3,0]; 0/500 brute-force mismatches")


def test_round_trip_recovery(full_library):
    rng = random.Random(424242)
    start = time.perf_counter()
    per_sample = []
    for _ in range(1000):
        length = rng.randint(1, 16)
        chords = [
            Chord(full_library.entries[rng.randrange(len(full_library))].labels)
            for _ in range(length)
        ]
        targets = extract_features(chords)
        result = recover(
            targets, RecoveryConfig(library=full_library, tonality=targets.tonality, beam_width=8)
        )
        per_sample.append(result.per_step_rd)
    elapsed = time.perf_counter() - start
    value = mrda(per_sample)
    assert value < 1e-6
    assert elapsed < 60.0
    report("round-trip recovery", f"MRDA {value:.2e} over 1000 progressions in {elapsed:.1f}s")


@pytest.fixture(scope="module")
def corpus_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("acc") / "corpus.jsonl"
    config = AugmentConfig(density_drop_prob=0.0, melodic_alteration_prob=0.0)
    return build_dataset(CORPUS_DIR, config, out)


def test_noise_separation(full_library, corpus_manifest):
    assert len(corpus_manifest["source_scores"]) >= 50
    ranges = {name: tuple(r) for name, r in corpus_manifest["feature_ranges"].items()}
    noise_rd, exact_rd = [], []
    rng = random.Random(77)
    for i in range(100):
        noise = random_features(ranges, 16, seed=9000 + i)
        result = recover(noise, RecoveryConfig(library=full_library, tonality=noise.tonality))
        noise_rd.append(result.per_step_rd)
    for i in range(60):
        chords = [
            Chord(full_library.entries[rng.randrange(len(full_library))].labels)
            for _ in range(rng.randint(2, 16))
        ]
        targets = extract_features(chords)
        result = recover(targets, RecoveryConfig(library=full_library, tonality=targets.tonality))
        exact_rd.append(result.per_step_rd)
    noise_mrda = mrda(noise_rd)
    exact_mrda = mrda(exact_rd)
    assert 0.22 <= noise_mrda <= 0.42
    assert noise_mrda > 100 * exact_mrda
    report("noise separation", f"noise MRDA {noise_mrda:.3f}, exact {exact_mrda:.2e}")


def test_corpus_metrics():
    import glob

    files = sorted(glob.glob(f"{CORPUS_DIR}/*.json"))
    assert len(files) >= 20
    start = time.perf_counter()
    ccs, ches, mctds = [], [], []
    for path in files[:24]:
        score = ingest(path)
        chords = score.chords()
        labels = [c.labels for c in chords]
        ccs.append(mean_cc(labels))
        ches.append(che(labels))
        mctds.append(mctd(score.melody_tokens(), spell_sequence(chords, BeamConfig())))
    elapsed = time.perf_counter() - start
    cc = sum(ccs) / len(ccs)
    entropy = sum(ches) / len(ches)
    tonal_distance = sum(mctds) / len(mctds)
    assert 0.41 <= cc <= 0.61
    assert 1.74 <= entropy <= 2.34
    assert 1.11 <= tonal_distance <= 1.61
    assert elapsed < 60.0
    report(
        "corpus metrics",
        f"CC {cc:.3f}, CHE {entropy:.3f}, MCTD {tonal_distance:.3f} on {len(ccs)} pieces in {elapsed:.1f}s",
    )


DIATONIC_MAJOR = [
    ["C", "E", "G"], ["F", "A", "C"], ["G", "B", "D"], ["C", "E", "G"],
    ["A", "C", "E"], ["D", "F", "A"], ["G", "B", "D", "F"], ["C", "E", "G"],
]
DIATONIC_MINOR = [
    ["A", "C", "E"], ["D", "F", "A"], ["E", "Ab", "B"], ["A", "C", "E"],
    ["F", "A", "C"], ["D", "F", "A"], ["E", "Ab", "B", "D"], ["A", "C", "E"],
]


def _transpose(piece, n):
    return [
        Chord.of([PITCH_LABELS[(PITCH_LABELS.index(l) + n) % 12] for l in Chord.of(c).labels])
        for c in piece
    ]


def test_key_estimation_transpositions():
    correct = 0
    base_major = extract_features(_transpose(DIATONIC_MAJOR, 0))
    base_minor = extract_features(_transpose(DIATONIC_MINOR, 0))
    for n in range(12):
        major = extract_features(_transpose(DIATONIC_MAJOR, n))
        minor = extract_features(_transpose(DIATONIC_MINOR, n))
        correct += major.tonality == n % 12
        correct += minor.tonality == 12 + (9 + n) % 12
        for feats, base in ((major, base_major), (minor, base_minor)):
            assert feats.tension == pytest.approx(base.tension, abs=1e-9)
            assert feats.distance == pytest.approx(base.distance, abs=1e-9)
    assert correct == 24
    report("key estimation", "24/24 transpositions classified; curves invariant to 1e-9")


def test_recovery_performance(full_library):
    import dataclasses

    targets = random_features(
        {"tension": (1.5, 3.8), "distance": (0.0, 2.0), "strain": (0.1, 1.7)}, 16, seed=5
    )
    config = RecoveryConfig(library=full_library, tonality=0, beam_width=8)
    start = time.perf_counter()
    single = recover(targets, config)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    for workers in (2, 4):
        other = recover(targets, dataclasses.replace(config, workers=workers))
        assert other.chords == single.chords
        assert other.spellings == single.spellings
        assert other.total_cost == single.total_cost
        assert other.achieved.to_dict() == single.achieved.to_dict()
    report("recovery performance", f"T=16 x 1573 entries x beam 8 in {elapsed:.2f}s; worker-invariant")


def test_primary_runs_standalone():
    import sys

    loaded = {name for name in sys.modules if name.split(".")[0] in ("trainer", "frontend")}
    assert not loaded
    report("standalone primary", "no secondary component imported")
