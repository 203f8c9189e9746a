"""Assemble extraction fragments into a full evaluation manifest.

Fragments carry schema-shaped clip records with paths relative to the
fragment's own directory; composition rebases them against the manifest
location and fills in the envelope (version, seeds, reference count,
artist blocks). The result is consumed by the evaluation toolkit as-is.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import IoFailure


def load_fragment(path: str | Path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    doc["_dir"] = path.parent
    return doc


def compose_manifest(
    out_path: str | Path,
    seeds: list[int],
    reference_count: int,
    artists: list[dict],
) -> Path:
    """Write a manifest composed from fragments.

    Each artist dict needs: name, baseline_prompt, descriptors, and
    fragments (a list of loaded fragment docs whose records carry
    artist/role, plus condition/seed for generated clips).
    """
    out_path = Path(out_path)
    manifest_dir = out_path.parent
    blocks = []
    for artist in artists:
        references = []
        generated = []
        for fragment in artist["fragments"]:
            base: Path = fragment["_dir"]
            for record in fragment["records"]:
                rec = {
                    k: v
                    for k, v in record.items()
                    if k in ("clip_id", "artist", "role", "condition", "seed", "space_tag", "n_rows")
                }
                rec["path"] = os.path.relpath(base / record["path"], manifest_dir)
                if rec.get("artist") != artist["name"]:
                    continue
                if rec.get("role") == "reference":
                    rec.pop("condition", None)
                    rec.pop("seed", None)
                    references.append(rec)
                else:
                    generated.append(rec)
        blocks.append(
            {
                "name": artist["name"],
                "baseline_prompt": artist["baseline_prompt"],
                "descriptors": artist["descriptors"],
                "references": references,
                "generated": generated,
            }
        )
    doc = {
        "version": 1,
        "seeds": list(seeds),
        "reference_count": reference_count,
        "artists": blocks,
    }
    try:
        out_path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {out_path}: {exc}") from exc
    return out_path
