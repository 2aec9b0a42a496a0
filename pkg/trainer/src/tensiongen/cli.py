"""Command-line entry points: train / generate / reconstruct / disentangle / diagnostics."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .data import load_manifest, load_samples, split_samples, Normalizer
from .model import ModelConfig
from .train import load_checkpoint, train

THETA_GRID = (-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0)


def _model_config(args) -> ModelConfig:
    overrides = {}
    for name in ("epochs", "batch_size", "seed", "hidden", "latent_dim"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "no_attention", False):
        overrides["use_attention"] = False
    if getattr(args, "no_tonality_skip", False):
        overrides["use_tonality_skip"] = False
    if getattr(args, "core", None):
        overrides["recurrent_core"] = args.core
    return ModelConfig(**overrides)


def _cmd_train(args) -> int:
    result = train(
        args.dataset,
        args.manifest,
        args.out,
        config=_model_config(args),
        max_samples=args.max_samples,
    )
    print(json.dumps({"heldout": result["heldout"], "checkpoint": result["checkpoint"]}, indent=2))
    return 0


def _load_melody(path: str) -> list[dict]:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict) and "melody" in doc:
        return doc["melody"]
    if isinstance(doc, dict) and "slices" in doc:  # score document
        return [
            {
                "midi": None if s.get("melody") is None else s["melody"]["midi"],
                "duration_beats": 1.0 if s.get("melody") is None else s["melody"].get("duration_beats", 1.0),
                "weight": 1.0 if s.get("downbeat") else 0.5,
            }
            for s in doc["slices"]
        ]
    return doc


def _cmd_generate(args) -> int:
    from .generate import generate_feature_file

    model, normalizer = load_checkpoint(args.checkpoint)
    melody = _load_melody(args.melody)
    doc = generate_feature_file(model, normalizer, melody, seed=args.seed)
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_reconstruct(args) -> int:
    from .generate import reconstruct_feature_file

    model, normalizer = load_checkpoint(args.checkpoint)
    samples = load_samples(args.dataset)
    sample = next((s for s in samples if s.id == args.sample_id), None)
    if sample is None:
        print(json.dumps({"error": f"sample {args.sample_id!r} not found"}), file=sys.stderr)
        return 1
    doc = reconstruct_feature_file(model, normalizer, sample)
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_disentangle(args) -> int:
    from .generate import (
        apply_direction,
        contrast_sets,
        latent_direction,
        reconstruct_feature_file,
        top_dimensions,
    )

    model, normalizer = load_checkpoint(args.checkpoint)
    samples = load_samples(args.dataset)
    set_a, set_b = contrast_sets(samples, (args.curve, args.stat), args.contrast_size)
    direction = latent_direction(model, normalizer, set_a, set_b, f"{args.stat} of {args.curve}")
    dims = top_dimensions(direction, args.dims)
    sample = samples[args.sample_index]
    sweep = []
    for theta in THETA_GRID:
        doc = reconstruct_feature_file(
            model, normalizer, sample, z_edit=lambda z: apply_direction(z, direction, theta, dims)
        )
        values = np.asarray(doc[args.curve])
        sweep.append({"theta": theta, "std": float(values.std()), "mean": float(values.mean())})
    out = {
        "factor": direction.factor,
        "dims": [int(d) for d in dims],
        "magnitude": [float(v) for v in direction.magnitude],
        "sweep": sweep,
    }
    Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    return 0


def _cmd_diagnostics(args) -> int:
    from .diagnostics import diagnostics_report, write_report

    model, normalizer = load_checkpoint(args.checkpoint)
    samples = load_samples(args.dataset)
    _, test = split_samples(samples)
    report = diagnostics_report(model, test or samples, normalizer)
    write_report(report, args.out)
    print(json.dumps({"posterior_mean_std": report["posterior_mean_std"]}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensiongen")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--hidden", type=int)
    p.add_argument("--latent-dim", dest="latent_dim", type=int)
    p.add_argument("--max-samples", type=int, default=20000)
    p.add_argument("--no-attention", action="store_true")
    p.add_argument("--no-tonality-skip", action="store_true")
    p.add_argument("--core", choices=("gru", "attention"))
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("generate")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--melody", required=True, help="score JSON, feature file, or melody token array")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("reconstruct")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--sample-id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_reconstruct)

    p = sub.add_parser("disentangle")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--curve", default="tension")
    p.add_argument("--stat", default="std")
    p.add_argument("--contrast-size", type=int, default=64)
    p.add_argument("--dims", type=int, default=4)
    p.add_argument("--sample-index", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_disentangle)

    p = sub.add_parser("diagnostics")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_diagnostics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # noqa: BLE001
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
