"""Command line entry point.

Subcommands:

* ``validate --manifest P``  - exit 0 iff the manifest passes validation
* ``evaluate --manifest P --spaces a,b --out P [--format json|csv]
  [--frame-level] [--cov-divisor n-1|n]`` - write a full report
* ``prompts --bundle P``     - print the seven prompt strings
* ``synth --spec P --out DIR`` - materialize a synthetic fixture

Exit codes: 0 success, 2 schema, 3 matched-seed/completeness,
4 numeric failure, 5 I/O. Failures emit one machine-readable JSON line
on stderr naming the offending record.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import (
    BundleError,
    Emb1Error,
    InvalidSpec,
    IoFailure,
    ManifestError,
    MatchedSeedViolation,
    MetricError,
    MissingCondition,
    MissingCrossCondition,
    MissingEmbeddingFile,
    NonFiniteValue,
    SchemaError,
    StylegapError,
    ZeroNormRow,
)
from .manifest import load_manifest
from .prompts import build_prompts, load_bundle
from .protocol import EvalConfig, aggregate
from .report import build_document, canonical_json, render_csv, write_atomic
from .scenarios import build_scenario, load_scenario

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_MATCHED_SEED = 3
EXIT_NUMERIC = 4
EXIT_IO = 5


def exit_code_for(exc: BaseException) -> int:
    """Map a toolkit error to its CLI exit code family."""
    if isinstance(exc, (MatchedSeedViolation, MissingCondition, MissingCrossCondition)):
        return EXIT_MATCHED_SEED
    if isinstance(exc, (NonFiniteValue, ZeroNormRow, MetricError)):
        return EXIT_NUMERIC
    if isinstance(exc, (MissingEmbeddingFile, IoFailure, OSError)):
        return EXIT_IO
    if isinstance(exc, (ManifestError, BundleError, InvalidSpec, Emb1Error, SchemaError)):
        return EXIT_SCHEMA
    return EXIT_SCHEMA


def _diagnostic(exc: BaseException) -> None:
    line = json.dumps(
        {"error": type(exc).__name__, "message": str(exc)}, ensure_ascii=False
    )
    print(line, file=sys.stderr)


def cmd_validate(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    artists = manifest.artist_names()
    n_generated = sum(len(a.generated) for a in manifest.artists)
    n_references = sum(len(a.references) for a in manifest.artists)
    print(
        f"manifest OK: {len(artists)} artist(s), {len(manifest.spaces())} space(s), "
        f"{len(manifest.seeds)} seed(s), {n_generated} generated + "
        f"{n_references} reference clips"
    )
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    spaces = None
    if args.spaces:
        spaces = [s for s in args.spaces.split(",") if s]
        if not spaces:
            raise SchemaError("--spaces must name at least one embedding space")
    config = EvalConfig(cov_divisor=args.cov_divisor, frame_level=args.frame_level)
    result = aggregate(manifest, spaces=spaces, config=config)
    doc = build_document(result, manifest, manifest_path=Path(args.manifest))
    text = render_csv(doc) if args.format == "csv" else canonical_json(doc)
    write_atomic(text, args.out)
    print(f"report written to {args.out}")
    return EXIT_OK


def cmd_prompts(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    for line in build_prompts(bundle).ordered():
        print(line)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    spec = load_scenario(args.spec)
    manifest_path = build_scenario(spec, args.out)
    print(f"fixture written to {manifest_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylegap",
        description="Embedding-space evaluation of prompt-level style control.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a manifest")
    p_validate.add_argument("--manifest", required=True)
    p_validate.set_defaults(func=cmd_validate)

    p_eval = sub.add_parser("evaluate", help="evaluate a manifest into a report")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--spaces", help="comma-separated space tags (default: all)")
    p_eval.add_argument("--out", required=True)
    p_eval.add_argument("--format", choices=("json", "csv"), default="json")
    p_eval.add_argument(
        "--frame-level",
        action="store_true",
        help="compute FAD over pooled frame rows instead of clip vectors",
    )
    p_eval.add_argument("--cov-divisor", choices=("n-1", "n"), default="n-1")
    p_eval.set_defaults(func=cmd_evaluate)

    p_prompts = sub.add_parser("prompts", help="print the prompts of a bundle")
    p_prompts.add_argument("--bundle", required=True)
    p_prompts.set_defaults(func=cmd_prompts)

    p_synth = sub.add_parser("synth", help="materialize a synthetic fixture")
    p_synth.add_argument("--spec", required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StylegapError, OSError) as exc:
        _diagnostic(exc)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
