"""Seeded clip generation: a descriptor bundle to the 70-clip layout.

For each seed, seven clips are rendered (baseline, artist-name, styled
1..5), with the generator re-seeded immediately before every render so
that clips under different prompt conditions share their random
initialization. Filenames encode artist, condition, and seed; a
``clips.json`` fragment maps them to manifest condition encodings.

Prompt strings follow the published construction: styled prompts join
the baseline and the set's three tokens with ", ", and the artist-name
prompt appends " [<artist>]".
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .audio import save_wav_pcm16
from .errors import GenerationFailure, IoFailure
from .models import load_generator

CLIPS_NAME = "clips.json"


def load_bundle_dict(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GenerationFailure(f"{path}: not valid JSON: {exc}") from exc
    for key in ("artist_name", "baseline", "sets"):
        if key not in doc:
            raise GenerationFailure(f"{path}: bundle missing {key!r}")
    if len(doc["sets"]) != 5 or any(len(s) != 3 for s in doc["sets"]):
        raise GenerationFailure(f"{path}: bundle must have 5 sets of 3 tokens")
    return doc


def condition_prompts(bundle: dict) -> list[tuple[str, object, str]]:
    """(label, manifest condition encoding, prompt text) in fixed order."""
    baseline = bundle["baseline"]
    out: list[tuple[str, object, str]] = [
        ("baseline", "baseline", baseline),
        ("artist_name", "artist_name", f"{baseline} [{bundle['artist_name']}]"),
    ]
    for k, tokens in enumerate(bundle["sets"], start=1):
        out.append((f"styled_{k}", {"styled": k}, baseline + ", " + ", ".join(tokens)))
    return out


def artist_slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")
    return slug or "artist"


def generate_conditions(
    bundle_path: str | Path,
    seeds: list[int],
    out_dir: str | Path,
    checkpoint: str | Path,
) -> Path:
    """Render all condition clips for every seed; returns the clips.json path."""
    if not seeds:
        raise GenerationFailure("need at least one seed")
    bundle = load_bundle_dict(bundle_path)
    generator = load_generator(checkpoint)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    slug = artist_slug(bundle["artist_name"])

    clips = []
    for seed in seeds:
        for label, condition, prompt in condition_prompts(bundle):
            samples = generator.render(prompt, seed)
            name = f"{slug}__{label}__s{seed:02d}.wav"
            save_wav_pcm16(samples, generator.rate, out_dir / name)
            clips.append({"file": name, "condition": condition, "seed": seed})

    doc = {
        "artist": bundle["artist_name"],
        "baseline_prompt": bundle["baseline"],
        "seeds": list(seeds),
        "sample_rate": generator.rate,
        "clip_seconds": generator.clip_seconds,
        "clips": clips,
    }
    clips_path = out_dir / CLIPS_NAME
    try:
        clips_path.write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoFailure(f"cannot write {clips_path}: {exc}") from exc
    return clips_path


def parse_seed_range(text: str) -> list[int]:
    """Seed lists: '0..9' (inclusive range) or '0,3,7'."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part]
