"""Embedding extraction: WAV clips to EMB1 files plus a manifest fragment.

Every input yields exactly one EMB1 file named after the clip stem. The
fragment JSON lists schema-shaped clip records (clip_id, space_tag,
path, n_rows, and - when known - artist/role/condition/seed) so that
fragments compose into the evaluation toolkit's manifest without edits.
Generation metadata is picked up from a ``clips.json`` file in the
input directory when present (written by the generate command);
otherwise records take the job's artist and role.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .audio import load_wav_mono
from .emb1io import write_emb1
from .errors import AudioDecodeFailure, IoFailure
from .models import Embedder, load_embedder

FRAGMENT_NAME = "fragment.json"


@dataclass(frozen=True)
class ExtractionJob:
    """One extraction run over a directory (or explicit list) of WAV clips."""

    inputs: tuple[Path, ...]
    space_tag: str
    out_dir: Path
    checkpoint: Path
    clip_seconds: float = 15.0
    artist: Optional[str] = None
    role: str = "generated"
    generation_meta: Optional[dict] = field(default=None, repr=False)

    @classmethod
    def from_dir(
        cls,
        in_dir: str | Path,
        space_tag: str,
        out_dir: str | Path,
        checkpoint: str | Path,
        clip_seconds: float = 15.0,
        artist: Optional[str] = None,
        role: str = "generated",
    ) -> "ExtractionJob":
        in_dir = Path(in_dir)
        wavs = tuple(sorted(in_dir.glob("*.wav")))
        if not wavs:
            raise AudioDecodeFailure(f"no .wav files in {in_dir}")
        meta = None
        meta_path = in_dir / "clips.json"
        if meta_path.is_file():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return cls(
            inputs=wavs,
            space_tag=space_tag,
            out_dir=Path(out_dir),
            checkpoint=Path(checkpoint),
            clip_seconds=clip_seconds,
            artist=artist,
            role=role,
            generation_meta=meta,
        )


def extract(job: ExtractionJob) -> Path:
    """Run the job; returns the path of the written manifest fragment."""
    embedder = load_embedder(job.checkpoint)
    if embedder.space_tag and embedder.space_tag != job.space_tag:
        raise IoFailure(
            f"checkpoint embeds space {embedder.space_tag!r}, job wants {job.space_tag!r}"
        )
    clip_meta = _index_generation_meta(job.generation_meta)
    job.out_dir.mkdir(parents=True, exist_ok=True)

    records = []
    dim = None
    for wav_path in job.inputs:
        samples = load_wav_mono(wav_path, embedder.rate)
        max_samples = int(round(job.clip_seconds * embedder.rate))
        samples = samples[:max_samples]
        rows = np.asarray(embedder.embed(samples), dtype=np.float64)
        if dim is None:
            dim = rows.shape[1]
        elif rows.shape[1] != dim:
            raise IoFailure(f"{wav_path}: embedding dim {rows.shape[1]} != {dim}")
        clip_id = wav_path.stem
        emb_name = f"{clip_id}.emb1"
        write_emb1(rows.astype(np.float32), job.space_tag, job.out_dir / emb_name)

        record = {
            "clip_id": f"{clip_id}__{job.space_tag}",
            "space_tag": job.space_tag,
            "path": emb_name,
            "n_rows": int(rows.shape[0]),
        }
        if clip_id in clip_meta:
            info = clip_meta[clip_id]
            record["artist"] = info["artist"]
            record["role"] = "generated"
            record["condition"] = info["condition"]
            record["seed"] = info["seed"]
        else:
            if job.artist is not None:
                record["artist"] = job.artist
            record["role"] = job.role
        records.append(record)

    fragment = {"space_tag": job.space_tag, "dim": dim, "records": records}
    fragment_path = job.out_dir / FRAGMENT_NAME
    try:
        fragment_path.write_text(
            json.dumps(fragment, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoFailure(f"cannot write {fragment_path}: {exc}") from exc
    return fragment_path


def _index_generation_meta(meta: Optional[dict]) -> dict[str, dict]:
    if meta is None:
        return {}
    index = {}
    for clip in meta.get("clips", []):
        stem = Path(clip["file"]).stem
        index[stem] = {
            "artist": meta["artist"],
            "condition": clip["condition"],
            "seed": clip["seed"],
        }
    return index
