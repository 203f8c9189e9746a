"""Audio-side command line: embedding extraction and seeded generation.

    stylegap-audio extract  --in DIR --space vggish|clap --checkpoint DIR --out DIR
    stylegap-audio generate --bundle P --seeds 0..9 --checkpoint DIR --out DIR
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    AudioDecodeFailure,
    ExtractorError,
    GenerationFailure,
    IoFailure,
    ModelLoadFailure,
    SampleRateUnsupported,
)
from .extract import ExtractionJob, extract
from .generate import generate_conditions, parse_seed_range

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERIC = 4
EXIT_IO = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ModelLoadFailure, GenerationFailure)):
        return EXIT_SCHEMA
    if isinstance(exc, (AudioDecodeFailure, SampleRateUnsupported)):
        return EXIT_NUMERIC
    if isinstance(exc, (IoFailure, OSError)):
        return EXIT_IO
    return EXIT_SCHEMA


def cmd_extract(args: argparse.Namespace) -> int:
    job = ExtractionJob.from_dir(
        in_dir=args.in_dir,
        space_tag=args.space,
        out_dir=args.out,
        checkpoint=args.checkpoint,
        clip_seconds=args.clip_seconds,
        artist=args.artist,
        role=args.role,
    )
    fragment = extract(job)
    print(f"extracted {len(job.inputs)} clip(s); fragment at {fragment}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    seeds = parse_seed_range(args.seeds)
    clips = generate_conditions(args.bundle, seeds, args.out, args.checkpoint)
    print(f"generated {7 * len(seeds)} clip(s); metadata at {clips}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylegap-audio",
        description="Extract audio embeddings and generate seeded condition clips.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="WAV clips to EMB1 files")
    p_extract.add_argument("--in", dest="in_dir", required=True)
    p_extract.add_argument("--space", required=True)
    p_extract.add_argument("--checkpoint", required=True)
    p_extract.add_argument("--out", required=True)
    p_extract.add_argument("--clip-seconds", type=float, default=15.0)
    p_extract.add_argument("--artist", help="artist for records without clips.json metadata")
    p_extract.add_argument("--role", choices=("generated", "reference"), default="generated")
    p_extract.set_defaults(func=cmd_extract)

    p_generate = sub.add_parser("generate", help="render condition clips per seed")
    p_generate.add_argument("--bundle", required=True)
    p_generate.add_argument("--seeds", required=True, help="'0..9' or '0,1,2'")
    p_generate.add_argument("--checkpoint", required=True)
    p_generate.add_argument("--out", required=True)
    p_generate.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExtractorError, OSError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
