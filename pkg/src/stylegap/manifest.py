"""Experiment manifest: schema, validation, and indexed access.

A manifest binds every clip of an evaluation run - reference excerpts
and generated clips - to its artist, condition, seed, embedding space,
and EMB1 file. ``load_manifest`` validates the whole structure eagerly:
JSON schema, clip-id uniqueness, per-space reference counts, the
matched-seed completeness grid, and that every referenced EMB1 file
exists and parses with the declared space tag.

Top-level JSON schema::

    {
      "version": 1,
      "seeds": [0, 1, ...],
      "reference_count": 15,          // optional, defaults to 15
      "artists": [
        {
          "name": "...",
          "baseline_prompt": "...",
          "descriptors": "relative/path/to/bundle.json",
          "references": [ClipRecord, ...],
          "generated": [ClipRecord, ...]
        }
      ]
    }

ClipRecord::

    {
      "clip_id": "...", "artist": "...", "role": "generated"|"reference",
      "condition": "baseline"|"artist_name"|{"styled": k}
                   |{"cross_styled": {"source": name, "set": k}},
      "seed": 0, "space_tag": "...", "path": "...", "n_rows": 1,
      "meta": {...}                   // optional, opaque
    }

``condition``/``seed`` are required for generated records and forbidden
for references. ``n_rows`` and ``meta`` are optional everywhere.
A loaded Manifest and its matrices are immutable; share them freely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .conditions import STYLED_SET_COUNT, ConditionKey
from .emb1 import EmbeddingMatrix, read_emb1
from .errors import (
    DuplicateClipId,
    Emb1Error,
    IoFailure,
    MatchedSeedViolation,
    MissingEmbeddingFile,
    ReferenceCountMismatch,
    SchemaError,
    ZeroNormRow,
)

MANIFEST_VERSION = 1
DEFAULT_REFERENCE_COUNT = 15

ROLE_GENERATED = "generated"
ROLE_REFERENCE = "reference"


@dataclass(frozen=True)
class ClipRecord:
    """One clip's metadata plus its loaded embedding matrix."""

    clip_id: str
    artist: str
    role: str
    space_tag: str
    path: str
    condition: Optional[ConditionKey] = None
    seed: Optional[int] = None
    n_rows: Optional[int] = None
    meta: Optional[dict] = None
    matrix: Optional[EmbeddingMatrix] = field(default=None, repr=False, compare=False)

    def clip_vector(self) -> np.ndarray:
        """Pooled clip vector: float64 mean of the matrix rows."""
        assert self.matrix is not None
        return self.matrix.mean_vector()

    def to_json_dict(self) -> dict:
        out: dict = {
            "clip_id": self.clip_id,
            "artist": self.artist,
            "role": self.role,
            "space_tag": self.space_tag,
            "path": self.path,
        }
        if self.condition is not None:
            out["condition"] = self.condition.to_json()
        if self.seed is not None:
            out["seed"] = self.seed
        if self.n_rows is not None:
            out["n_rows"] = self.n_rows
        if self.meta is not None:
            out["meta"] = self.meta
        return out


@dataclass(frozen=True)
class ArtistBlock:
    name: str
    baseline_prompt: str
    descriptors: str
    references: tuple[ClipRecord, ...]
    generated: tuple[ClipRecord, ...]


@dataclass(frozen=True)
class Manifest:
    """Validated manifest with clips indexed by (artist, space, condition, seed)."""

    version: int
    seeds: tuple[int, ...]
    reference_count: int
    artists: tuple[ArtistBlock, ...]
    root: Path

    def artist_names(self) -> list[str]:
        return [a.name for a in self.artists]

    def artist(self, name: str) -> ArtistBlock:
        for block in self.artists:
            if block.name == name:
                return block
        raise KeyError(name)

    def spaces(self) -> list[str]:
        tags = {r.space_tag for a in self.artists for r in a.references}
        return sorted(tags)

    def references(self, artist: str, space: str) -> list[ClipRecord]:
        return [r for r in self.artist(artist).references if r.space_tag == space]

    def generated(
        self,
        artist: str,
        space: str,
        condition: Optional[ConditionKey] = None,
    ) -> list[ClipRecord]:
        records = [
            r for r in self.artist(artist).generated if r.space_tag == space
        ]
        if condition is not None:
            records = [r for r in records if r.condition == condition]
        return sorted(records, key=lambda r: r.seed)

    def lookup(
        self, artist: str, space: str, condition: ConditionKey, seed: int
    ) -> ClipRecord:
        for r in self.artist(artist).generated:
            if r.space_tag == space and r.condition == condition and r.seed == seed:
                return r
        raise KeyError((artist, space, condition, seed))

    def conditions(self, artist: str, space: str) -> list[ConditionKey]:
        keys = {r.condition for r in self.generated(artist, space)}
        return sorted(keys, key=lambda c: c.sort_key())

    def to_json_dict(self) -> dict:
        """Canonical dict form: artists by name, records in stable order."""
        return {
            "version": self.version,
            "seeds": list(self.seeds),
            "reference_count": self.reference_count,
            "artists": [
                {
                    "name": a.name,
                    "baseline_prompt": a.baseline_prompt,
                    "descriptors": a.descriptors,
                    "references": [
                        r.to_json_dict()
                        for r in sorted(a.references, key=lambda r: (r.space_tag, r.clip_id))
                    ],
                    "generated": [
                        r.to_json_dict()
                        for r in sorted(
                            a.generated,
                            key=lambda r: (r.space_tag, r.condition.sort_key(), r.seed),
                        )
                    ],
                }
                for a in sorted(self.artists, key=lambda a: a.name)
            ],
        }


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    """Serialize a manifest back to canonical JSON."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest.to_json_dict(), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Parsing and validation
# ---------------------------------------------------------------------------


def load_manifest(path: str | Path) -> Manifest:
    """Load, validate, and index a manifest JSON file.

    Relative clip paths resolve against the manifest's directory. All
    EMB1 files are opened and validated eagerly, so a returned Manifest
    is fully usable without further I/O.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    return parse_manifest(doc, root=path.parent)


def parse_manifest(doc: object, root: str | Path) -> Manifest:
    root = Path(root)
    if not isinstance(doc, dict):
        raise SchemaError("manifest top level must be a JSON object")
    version = doc.get("version")
    if version != MANIFEST_VERSION:
        raise SchemaError(f"manifest version must be {MANIFEST_VERSION}, got {version!r}")
    seeds = doc.get("seeds")
    if (
        not isinstance(seeds, list)
        or not seeds
        or not all(isinstance(s, int) and not isinstance(s, bool) and s >= 0 for s in seeds)
    ):
        raise SchemaError("manifest 'seeds' must be a non-empty list of non-negative integers")
    if len(set(seeds)) != len(seeds):
        raise SchemaError("manifest 'seeds' contains duplicates")
    reference_count = doc.get("reference_count", DEFAULT_REFERENCE_COUNT)
    if not isinstance(reference_count, int) or isinstance(reference_count, bool) or reference_count < 1:
        raise SchemaError(f"'reference_count' must be a positive integer, got {reference_count!r}")
    artists_doc = doc.get("artists")
    if not isinstance(artists_doc, list) or not artists_doc:
        raise SchemaError("manifest 'artists' must be a non-empty list")

    seen_ids: set[str] = set()
    artist_names: set[str] = set()
    blocks = []
    for entry in artists_doc:
        blocks.append(_parse_artist(entry, root, seen_ids))
    for block in blocks:
        if block.name in artist_names:
            raise SchemaError(f"artist {block.name!r} appears twice")
        artist_names.add(block.name)

    manifest = Manifest(
        version=version,
        seeds=tuple(seeds),
        reference_count=reference_count,
        artists=tuple(blocks),
        root=root,
    )
    _validate_counts(manifest)
    return manifest


def _parse_artist(entry: object, root: Path, seen_ids: set[str]) -> ArtistBlock:
    if not isinstance(entry, dict):
        raise SchemaError("artist entry must be a JSON object")
    name = entry.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaError("artist 'name' must be a non-empty string")
    baseline_prompt = entry.get("baseline_prompt")
    if not isinstance(baseline_prompt, str) or not baseline_prompt:
        raise SchemaError(f"artist {name!r}: 'baseline_prompt' must be a non-empty string")
    descriptors = entry.get("descriptors")
    if not isinstance(descriptors, str) or not descriptors:
        raise SchemaError(f"artist {name!r}: 'descriptors' must be a path string")
    refs_doc = entry.get("references")
    gens_doc = entry.get("generated")
    if not isinstance(refs_doc, list) or not isinstance(gens_doc, list):
        raise SchemaError(f"artist {name!r}: 'references' and 'generated' must be lists")

    references = tuple(
        _parse_record(r, name, ROLE_REFERENCE, root, seen_ids) for r in refs_doc
    )
    generated = tuple(
        _parse_record(r, name, ROLE_GENERATED, root, seen_ids) for r in gens_doc
    )
    return ArtistBlock(
        name=name,
        baseline_prompt=baseline_prompt,
        descriptors=descriptors,
        references=references,
        generated=generated,
    )


def _parse_record(
    rec: object, artist: str, expected_role: str, root: Path, seen_ids: set[str]
) -> ClipRecord:
    if not isinstance(rec, dict):
        raise SchemaError(f"artist {artist!r}: clip record must be a JSON object")
    clip_id = rec.get("clip_id")
    if not isinstance(clip_id, str) or not clip_id:
        raise SchemaError(f"artist {artist!r}: 'clip_id' must be a non-empty string")
    if clip_id in seen_ids:
        raise DuplicateClipId(f"clip_id {clip_id!r} appears more than once")
    seen_ids.add(clip_id)

    if rec.get("artist") != artist:
        raise SchemaError(f"clip {clip_id!r}: 'artist' must equal {artist!r}")
    role = rec.get("role")
    if role != expected_role:
        raise SchemaError(
            f"clip {clip_id!r}: role {role!r} but listed under '{expected_role}'"
        )
    space_tag = rec.get("space_tag")
    if not isinstance(space_tag, str) or not space_tag:
        raise SchemaError(f"clip {clip_id!r}: 'space_tag' must be a non-empty string")
    rel_path = rec.get("path")
    if not isinstance(rel_path, str) or not rel_path:
        raise SchemaError(f"clip {clip_id!r}: 'path' must be a non-empty string")

    condition = None
    seed = None
    if expected_role == ROLE_GENERATED:
        if "condition" not in rec or "seed" not in rec:
            raise SchemaError(f"clip {clip_id!r}: generated records need condition and seed")
        condition = ConditionKey.from_json(rec["condition"])
        if condition.is_cross and condition.source_artist == artist:
            raise SchemaError(
                f"clip {clip_id!r}: cross_styled source must differ from the artist"
            )
        seed = rec["seed"]
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise SchemaError(f"clip {clip_id!r}: 'seed' must be a non-negative integer")
    else:
        if "condition" in rec or "seed" in rec:
            raise SchemaError(f"clip {clip_id!r}: reference records carry no condition or seed")

    n_rows = rec.get("n_rows")
    if n_rows is not None and (
        not isinstance(n_rows, int) or isinstance(n_rows, bool) or n_rows < 1
    ):
        raise SchemaError(f"clip {clip_id!r}: 'n_rows' must be a positive integer")
    meta = rec.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise SchemaError(f"clip {clip_id!r}: 'meta' must be an object")

    matrix = _load_matrix(clip_id, root / rel_path, space_tag, n_rows)
    return ClipRecord(
        clip_id=clip_id,
        artist=artist,
        role=expected_role,
        space_tag=space_tag,
        path=rel_path,
        condition=condition,
        seed=seed,
        n_rows=n_rows,
        meta=meta,
        matrix=matrix,
    )


def _load_matrix(
    clip_id: str, path: Path, space_tag: str, n_rows: Optional[int]
) -> EmbeddingMatrix:
    if not path.is_file():
        raise MissingEmbeddingFile(f"clip {clip_id!r}: no embedding file at {path}")
    try:
        matrix = read_emb1(path)
    except (Emb1Error, IoFailure) as exc:
        raise MissingEmbeddingFile(f"clip {clip_id!r}: unreadable EMB1 at {path}: {exc}") from exc
    if matrix.space_tag != space_tag:
        raise MissingEmbeddingFile(
            f"clip {clip_id!r}: file space tag {matrix.space_tag!r} != declared {space_tag!r}"
        )
    if n_rows is not None and matrix.n != n_rows:
        raise SchemaError(
            f"clip {clip_id!r}: file has {matrix.n} rows, record declares {n_rows}"
        )
    pooled_norm = float(np.linalg.norm(matrix.mean_vector()))
    if pooled_norm <= 0.0:
        raise ZeroNormRow(f"clip {clip_id!r}: pooled clip vector has zero norm")
    return matrix


def _validate_counts(manifest: Manifest) -> None:
    """Reference counts and the matched-seed completeness grid, per space."""
    core = [ConditionKey.baseline(), ConditionKey.artist_name()] + [
        ConditionKey.styled(k) for k in range(1, STYLED_SET_COUNT + 1)
    ]
    seed_set = set(manifest.seeds)

    for block in manifest.artists:
        spaces = sorted(
            {r.space_tag for r in block.references}
            | {r.space_tag for r in block.generated}
        )
        for space in spaces:
            refs = [r for r in block.references if r.space_tag == space]
            if len(refs) != manifest.reference_count:
                raise ReferenceCountMismatch(
                    f"artist {block.name!r}, space {space!r}: "
                    f"{len(refs)} references, expected {manifest.reference_count}"
                )
            gens = [r for r in block.generated if r.space_tag == space]
            by_key: dict[tuple, list[ClipRecord]] = {}
            for rec in gens:
                if rec.seed not in seed_set:
                    raise MatchedSeedViolation(
                        f"clip {rec.clip_id!r}: seed {rec.seed} is not in the declared seed list"
                    )
                by_key.setdefault((rec.condition, rec.seed), []).append(rec)
            for key, recs in by_key.items():
                if len(recs) > 1:
                    cond, seed = key
                    raise MatchedSeedViolation(
                        f"artist {block.name!r}, space {space!r}: duplicate "
                        f"{cond.label()} record for seed {seed}"
                    )
            for seed in manifest.seeds:
                for cond in core:
                    if (cond, seed) not in by_key:
                        raise MatchedSeedViolation(
                            f"artist {block.name!r}, space {space!r}: seed {seed} "
                            f"missing its {cond.label()} record"
                        )
            # Any cross-styled group present must cover all seeds and sets.
            cross_sources = {
                c.source_artist for (c, _) in by_key if c.is_cross
            }
            for source in sorted(cross_sources):
                for seed in manifest.seeds:
                    for k in range(1, STYLED_SET_COUNT + 1):
                        cond = ConditionKey.cross_styled(source, k)
                        if (cond, seed) not in by_key:
                            raise MatchedSeedViolation(
                                f"artist {block.name!r}, space {space!r}: seed {seed} "
                                f"missing its {cond.label()} record"
                            )
