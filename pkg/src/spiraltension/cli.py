"""Command-line frontend; a thin client over the shared handler layer."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from . import api
from .dataset import AugmentConfig, build_dataset
from .errors import ConfigurationError, InputError
from .features import FeatureSequence, MelodyToken, extract_features
from .metrics import che, confidence_interval_95, mctd, mean_cc, srcc
from .midi import write_block_chords
from .recovery import random_features
from .schemas import (
    EditModel,
    EditRequest,
    FeatureFileModel,
    MetricsRequest,
    MelodyTokenModel,
    RecoverRequest,
    ScoreModel,
)
from .spelling import BeamConfig, Chord, spell_sequence

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _cmd_analyze(args) -> int:
    score = ScoreModel.model_validate(_load_json(args.score))
    features = api.analyze_score(score, beam_width=args.beam_width, tonality=args.tonality)
    _dump(features.model_dump(exclude_none=True), args.out)
    return EXIT_OK


def _cmd_spell(args) -> int:
    chords = _load_json(args.chords)
    _dump(api.spell_chords(chords, beam_width=args.beam_width), args.out)
    return EXIT_OK


def _cmd_recover(args) -> int:
    features = FeatureFileModel.model_validate(_load_json(args.features))
    try:
        request = RecoverRequest(
            features=features,
            tonality=args.tonality,
            alpha=args.alpha,
            beta=args.beta,
            gamma=args.gamma,
            beam_width=args.beam_width,
            min_notes=args.min_notes,
            max_notes=args.max_notes,
            quality_filter=args.quality_filter.split(",") if args.quality_filter else None,
            must_contain=args.must_contain.split(",") if args.must_contain else None,
        )
    except ValidationError as exc:
        # the flags, not the feature file, are at fault here
        raise ConfigurationError(str(exc)) from exc
    response = api.recover_features(request)
    _dump(response.model_dump(exclude_none=True), args.out)
    if args.midi_out:
        write_block_chords(args.midi_out, [tuple(c) for c in response.chords])
    return EXIT_OK


def _cmd_edit(args) -> int:
    request = EditRequest(
        features=FeatureFileModel.model_validate(_load_json(args.features)),
        edits=[EditModel.model_validate(e) for e in _load_json(args.edits)],
    )
    _dump(api.apply_edits(request).model_dump(exclude_none=True), args.out)
    return EXIT_OK


def _cmd_dataset_build(args) -> int:
    cfg = AugmentConfig(**_load_json(args.config)) if args.config else AugmentConfig()
    manifest = build_dataset(
        args.corpus, cfg, args.out, beam=BeamConfig(args.beam_width), split_seed=args.split_seed
    )
    print(json.dumps({"n_samples": manifest["n_samples"], "out": str(args.out)}))
    return EXIT_OK


def _load_pieces(chords_path: str, melody_path: str | None):
    chords_doc = _load_json(chords_path)
    piece_chords = chords_doc["pieces"] if isinstance(chords_doc, dict) else [chords_doc]
    melodies = [None] * len(piece_chords)
    if melody_path:
        melody_doc = _load_json(melody_path)
        melody_pieces = melody_doc["pieces"] if isinstance(melody_doc, dict) else [melody_doc]
        if len(melody_pieces) != len(piece_chords):
            raise InputError("melody pieces do not align with chord pieces")
        melodies = melody_pieces
    return piece_chords, melodies


def _cmd_eval(args) -> int:
    piece_chords, melodies = _load_pieces(args.chords, args.melody)
    target = FeatureFileModel.model_validate(_load_json(args.features)) if args.features else None
    rng = np.random.default_rng(args.seed)
    per_run: dict[str, list[float]] = {}
    for _ in range(args.runs):
        if len(piece_chords) > 1:
            count = max(1, round(0.8 * len(piece_chords)))
            picked = sorted(rng.choice(len(piece_chords), size=count, replace=False))
        else:
            picked = [0]
        rows: dict[str, list[float]] = {}
        for idx in picked:
            request = MetricsRequest(
                chords=piece_chords[idx],
                melody=[MelodyTokenModel.model_validate(t) for t in melodies[idx]]
                if melodies[idx]
                else None,
                target_features=target if len(piece_chords) == 1 else None,
                beam_width=args.beam_width,
            )
            report = api.compute_metrics(request)
            rows.setdefault("mean_cc", []).append(report.mean_cc)
            rows.setdefault("che", []).append(report.che)
            if report.mctd is not None:
                rows.setdefault("mctd", []).append(report.mctd)
            for name, value in (report.srcc or {}).items():
                rows.setdefault(f"srcc_{name}", []).append(value)
        for name, values in rows.items():
            per_run.setdefault(name, []).append(float(np.mean(values)))
    out = {"runs": args.runs, "pieces": len(piece_chords)}
    for name, values in per_run.items():
        mean, half = confidence_interval_95(values)
        out[name] = {"mean": mean, "ci95": half}
    _dump(out, args.out)
    return EXIT_OK


def _cmd_noise(args) -> int:
    manifest = _load_json(args.ranges_from)
    ranges = {name: tuple(bounds) for name, bounds in manifest["feature_ranges"].items()}
    features = random_features(ranges, args.length, args.seed, tonality=args.tonality)
    _dump(features.to_dict(), args.out)
    return EXIT_OK


def _cmd_library(args) -> int:
    response = api.library_entries(
        min_notes=args.min_notes,
        max_notes=args.max_notes,
        quality_filter=args.quality_filter.split(",") if args.quality_filter else None,
        must_contain=args.must_contain.split(",") if args.must_contain else None,
    )
    lines = "\n".join(json.dumps(e.model_dump()) for e in response.entries)
    if args.out:
        Path(args.out).write_text(lines + "\n")
    else:
        print(lines)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(manifest_path=args.manifest), host=args.host, port=args.port)
    return EXIT_OK


def _add_beam(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beam-width", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spiraltension")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="score JSON -> feature file")
    p.add_argument("score")
    p.add_argument("--out")
    p.add_argument("--tonality", type=int)
    _add_beam(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("spell", help="chord-label JSON -> fifth-index rows")
    p.add_argument("chords")
    p.add_argument("--out")
    _add_beam(p)
    p.set_defaults(fn=_cmd_spell)

    p = sub.add_parser("recover", help="feature file -> chord progression")
    p.add_argument("features")
    p.add_argument("--out")
    p.add_argument("--midi-out")
    p.add_argument("--tonality", type=int)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--min-notes", type=int, default=2)
    p.add_argument("--max-notes", type=int, default=5)
    p.add_argument("--quality-filter")
    p.add_argument("--must-contain")
    _add_beam(p)
    p.set_defaults(fn=_cmd_recover)

    p = sub.add_parser("edit", help="apply curve edits to a feature file")
    p.add_argument("features")
    p.add_argument("--edits", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_edit)

    p = sub.add_parser("dataset", help="dataset operations")
    dsub = p.add_subparsers(dest="dataset_command", required=True)
    b = dsub.add_parser("build", help="build JSONL dataset + manifest from a corpus dir")
    b.add_argument("corpus")
    b.add_argument("--out", required=True)
    b.add_argument("--config")
    b.add_argument("--split-seed", type=int, default=0)
    _add_beam(b)
    b.set_defaults(fn=_cmd_dataset_build)

    p = sub.add_parser("eval", help="harmonization metrics with 95% CI over runs")
    p.add_argument("--chords", required=True)
    p.add_argument("--melody")
    p.add_argument("--features")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_beam(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("noise", help="random feature curves from manifest ranges")
    p.add_argument("--ranges-from", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tonality", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_noise)

    p = sub.add_parser("library", help="dump chord library entries as JSON lines")
    p.add_argument("--min-notes", type=int, default=2)
    p.add_argument("--max-notes", type=int, default=5)
    p.add_argument("--quality-filter")
    p.add_argument("--must-contain")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_library)

    p = sub.add_parser("serve", help="run the local HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8621)
    p.add_argument("--manifest")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, ValidationError) as exc:
        print(json.dumps({"error": "input", "detail": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except ConfigurationError as exc:
        print(json.dumps({"error": "configuration", "detail": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(json.dumps({"error": "internal", "detail": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
