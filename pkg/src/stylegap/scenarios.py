"""Synthetic fixture manifests with known geometry.

Three canonical scenarios exercise the full evaluation pipeline without
any real audio:

* ``null``          - every condition reuses the baseline embedding for
                      its seed, and all condition means equal the
                      reference mean: FADs and deltas vanish.
* ``displacement``  - same-artist styled conditions rotate toward the
                      reference centroid, cross-artist ones away:
                      positive diagonal deltas, negative off-diagonals,
                      and artist-name beats styled on FAD.
* ``cross``         - styled equals baseline (zero diagonal) while
                      cross-artist conditions rotate away (negative
                      off-diagonals).

Geometry: for each (artist, space) the reference centroid is a unit
vector m, conditions place their mean at angle theta from m inside the
plane spanned by m and a unit vector w orthogonal to it, and every
population shares one rank-``rank`` covariance A A^T. Populations are
built from exact-moment designs (orthonormal columns scaled to the
sample size), so each population's sample mean and covariance equal the
intended parameters to rounding; with a shared covariance, the expected
Fréchet distance of a condition against the references reduces to the
squared mean separation 2 - 2 cos(theta). Per-seed noise rows are
shared across conditions, mirroring the matched-seed design.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .conditions import STYLED_SET_COUNT, ConditionKey
from .emb1 import EmbeddingMatrix, write_emb1
from .errors import InvalidSpec, IoFailure
from .prompts import bundle_from_dict
from .synth import derive_stream_seed, stream_gaussian

SCENARIOS = ("null", "displacement", "cross")

_DEFAULT_SPACES = ({"tag": "vggish", "dim": 16}, {"tag": "clap", "dim": 24})
_DEFAULT_ARTISTS = ("artist_alpha", "artist_beta")

# Condition angles (degrees from the reference centroid) per scenario.
_BASELINE_DEG = {"null": 0.0, "displacement": 60.0, "cross": 60.0}
_ARTIST_NAME_DEG = {"null": 0.0, "displacement": 15.0, "cross": 15.0}

_ADJECTIVES = ("amber", "hollow", "velvet", "glassy", "dusty", "silver", "muted")
_NOUNS = (
    "pad texture",
    "pulse layer",
    "room tone",
    "chord bed",
    "string swell",
    "bass floor",
    "drum grain",
)


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one synthetic fixture manifest."""

    scenario: str
    rng_seed: int
    seeds: tuple[int, ...] = tuple(range(10))
    reference_count: int = 15
    artists: tuple[str, ...] = _DEFAULT_ARTISTS
    spaces: tuple[tuple[str, int], ...] = tuple(
        (s["tag"], s["dim"]) for s in _DEFAULT_SPACES
    )
    include_cross: bool = True
    rank: int = 8
    noise_scale: float = 0.01

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise InvalidSpec(f"unknown scenario {self.scenario!r}, pick one of {SCENARIOS}")
        if not isinstance(self.rng_seed, int):
            raise InvalidSpec("rng_seed must be an integer")
        if len(self.seeds) < 2 or len(set(self.seeds)) != len(self.seeds):
            raise InvalidSpec("need at least two distinct seeds")
        if self.reference_count < 2:
            raise InvalidSpec("reference_count must be at least 2")
        if len(self.artists) < 1 or len(set(self.artists)) != len(self.artists):
            raise InvalidSpec("artists must be distinct and non-empty")
        if self.include_cross and len(self.artists) < 2:
            raise InvalidSpec("cross conditions need at least two artists")
        if not self.spaces:
            raise InvalidSpec("need at least one embedding space")
        max_rank = min(len(self.seeds) - 1, self.reference_count - 1)
        if not 1 <= self.rank <= max_rank:
            raise InvalidSpec(f"rank must be in 1..{max_rank} for these population sizes")
        for tag, dim in self.spaces:
            if not tag or dim < self.rank + 2:
                raise InvalidSpec(
                    f"space {tag!r}: dim must be at least rank + 2 = {self.rank + 2}"
                )
        if not 0.0 < self.noise_scale < 0.1:
            raise InvalidSpec("noise_scale must be in (0, 0.1) to keep rows off the origin")


def scenario_from_json(doc: object) -> ScenarioSpec:
    """Parse a scenario spec from its JSON document form."""
    if not isinstance(doc, dict):
        raise InvalidSpec("scenario spec must be a JSON object")
    unknown = set(doc) - {
        "scenario",
        "rng_seed",
        "seeds",
        "reference_count",
        "artists",
        "spaces",
        "include_cross",
        "rank",
        "noise_scale",
    }
    if unknown:
        raise InvalidSpec(f"unknown scenario spec keys: {sorted(unknown)}")
    if "scenario" not in doc or "rng_seed" not in doc:
        raise InvalidSpec("scenario spec needs 'scenario' and 'rng_seed'")
    kwargs: dict = {"scenario": doc["scenario"], "rng_seed": doc["rng_seed"]}
    if "seeds" in doc:
        kwargs["seeds"] = tuple(doc["seeds"])
    if "reference_count" in doc:
        kwargs["reference_count"] = doc["reference_count"]
    if "artists" in doc:
        kwargs["artists"] = tuple(doc["artists"])
    if "spaces" in doc:
        spaces = doc["spaces"]
        if not isinstance(spaces, list) or not all(
            isinstance(s, dict) and set(s) == {"tag", "dim"} for s in spaces
        ):
            raise InvalidSpec("'spaces' must be a list of {tag, dim} objects")
        kwargs["spaces"] = tuple((s["tag"], s["dim"]) for s in spaces)
    if "include_cross" in doc:
        kwargs["include_cross"] = bool(doc["include_cross"])
    if "rank" in doc:
        kwargs["rank"] = doc["rank"]
    if "noise_scale" in doc:
        kwargs["noise_scale"] = doc["noise_scale"]
    try:
        return ScenarioSpec(**kwargs)
    except TypeError as exc:
        raise InvalidSpec(f"malformed scenario spec: {exc}") from exc


def load_scenario(path: str | Path) -> ScenarioSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{path}: not valid JSON: {exc}") from exc
    return scenario_from_json(doc)


def condition_angle(spec: ScenarioSpec, condition: ConditionKey) -> float:
    """Angle in degrees between a condition's mean and the reference centroid."""
    if spec.scenario == "null":
        return 0.0
    if condition.kind == "baseline":
        return _BASELINE_DEG[spec.scenario]
    if condition.kind == "artist_name":
        return _ARTIST_NAME_DEG[spec.scenario]
    if condition.kind == "styled":
        if spec.scenario == "cross":
            return _BASELINE_DEG[spec.scenario]
        return 22.0 + condition.set_index
    return 84.0 + condition.set_index


def expected_fad(spec: ScenarioSpec, condition: ConditionKey) -> float:
    """Closed-form Fréchet distance of a condition against the references.

    Means are unit vectors at the condition angle and all populations
    share one covariance, so only the squared mean separation remains.
    """
    theta = math.radians(condition_angle(spec, condition))
    return 2.0 - 2.0 * math.cos(theta)


# ---------------------------------------------------------------------------
# Population construction
# ---------------------------------------------------------------------------


def _design_matrix(n: int, r: int, seed: int) -> np.ndarray:
    """n x r design with exact zero column means and identity sample covariance.

    Columns are an orthonormal basis (orthogonal to the all-ones vector)
    scaled by sqrt(n - 1), so the sample covariance with divisor n - 1
    is the identity up to float64 rounding.
    """
    raw = stream_gaussian(seed, n * r).reshape(n, r)
    centered = raw - raw.mean(axis=0)
    q, rr = np.linalg.qr(centered)
    if np.abs(np.diag(rr)).min() < 1e-9:
        raise InvalidSpec("degenerate design draw; choose a different rng_seed")
    q = q * np.sign(np.diag(rr))
    return math.sqrt(n - 1) * q


def _unit(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    if norm < 1e-9:
        raise InvalidSpec(
            "degenerate direction draw (too many artists for this dimension?); "
            "raise the space dims or change rng_seed"
        )
    return vector / norm


@dataclass(frozen=True)
class _SpaceGeometry:
    """Per-(artist, space) directions, covariance factor, and noise bank."""

    centroid: np.ndarray
    lateral: np.ndarray
    factor: np.ndarray = field(repr=False)
    noise_bank: np.ndarray = field(repr=False)

    def condition_rows(self, theta_deg: float) -> np.ndarray:
        theta = math.radians(theta_deg)
        mean = math.cos(theta) * self.centroid + math.sin(theta) * self.lateral
        return mean + self.noise_bank @ self.factor.T


def _space_geometry(
    spec: ScenarioSpec, artist_index: int, tag: str, dim: int
) -> _SpaceGeometry:
    label = f"{spec.artists[artist_index]}/{tag}"
    # Mutually orthogonal centroids across artists, one lateral direction
    # orthogonal to this artist's centroid.
    raw = [
        stream_gaussian(
            derive_stream_seed(spec.rng_seed, f"{a}/{tag}/centroid"), dim
        )
        for a in spec.artists
    ]
    centroids: list[np.ndarray] = []
    for vec in raw:
        for prev in centroids:
            vec = vec - (vec @ prev) * prev
        centroids.append(_unit(vec))
    centroid = centroids[artist_index]
    lateral = stream_gaussian(derive_stream_seed(spec.rng_seed, f"{label}/lateral"), dim)
    lateral = _unit(lateral - (lateral @ centroid) * centroid)

    basis_raw = stream_gaussian(
        derive_stream_seed(spec.rng_seed, f"{label}/basis"), dim * spec.rank
    ).reshape(dim, spec.rank)
    basis, rr = np.linalg.qr(basis_raw)
    basis = basis * np.sign(np.diag(rr))
    factor = basis * math.sqrt(spec.noise_scale)

    noise_bank = _design_matrix(
        len(spec.seeds), spec.rank, derive_stream_seed(spec.rng_seed, f"{label}/seed-noise")
    )
    return _SpaceGeometry(
        centroid=centroid, lateral=lateral, factor=factor, noise_bank=noise_bank
    )


def _reference_rows(spec: ScenarioSpec, geom: _SpaceGeometry, label: str) -> np.ndarray:
    design = _design_matrix(
        spec.reference_count, spec.rank, derive_stream_seed(spec.rng_seed, label)
    )
    return geom.centroid + design @ geom.factor.T


def _bundle_dict(spec: ScenarioSpec, artist_index: int) -> dict:
    name = spec.artists[artist_index]
    sets = []
    for k in range(STYLED_SET_COUNT):
        tokens = []
        for t in range(3):
            adj = _ADJECTIVES[(artist_index * 5 + k + t) % len(_ADJECTIVES)]
            noun = _NOUNS[(artist_index * 3 + 2 * k + t) % len(_NOUNS)]
            tokens.append(f"{adj} {noun}")
        sets.append(tokens)
    return {
        "artist_name": name,
        "baseline": f"a calm synthetic bed with steady motion and soft dynamics for {name.replace('_', ' ')}",
        "sets": sets,
    }


# ---------------------------------------------------------------------------
# Fixture emission
# ---------------------------------------------------------------------------


def build_scenario(spec: ScenarioSpec, out_dir: str | Path) -> Path:
    """Write EMB1 files, descriptor bundles, and the manifest for a scenario.

    Returns the manifest path. Rerunning with the same spec reproduces
    identical directory contents.
    """
    out_dir = Path(out_dir)
    emb_dir = out_dir / "emb"
    bundle_dir = out_dir / "bundles"
    emb_dir.mkdir(parents=True, exist_ok=True)
    bundle_dir.mkdir(parents=True, exist_ok=True)

    conditions = _conditions_for(spec)
    artists_doc = []
    for ai, artist in enumerate(spec.artists):
        bundle = _bundle_dict(spec, ai)
        bundle_from_dict(bundle)  # generated bundles must themselves validate
        bundle_path = bundle_dir / f"{artist}.json"
        _write_json(bundle_path, bundle)

        references = []
        generated = []
        for tag, dim in spec.spaces:
            geom = _space_geometry(spec, ai, tag, dim)
            ref_rows = _reference_rows(spec, geom, f"{artist}/{tag}/references")
            for i, row in enumerate(ref_rows):
                clip_id = f"{artist}__{tag}__ref{i:02d}"
                rel = f"emb/{clip_id}.emb1"
                _write_rows(out_dir / rel, tag, row)
                references.append(
                    {
                        "clip_id": clip_id,
                        "artist": artist,
                        "role": "reference",
                        "space_tag": tag,
                        "path": rel,
                        "n_rows": 1,
                    }
                )
            for condition in conditions[artist]:
                rows = geom.condition_rows(condition_angle(spec, condition))
                for si, seed in enumerate(spec.seeds):
                    clip_id = f"{artist}__{tag}__{condition.label()}_s{seed:02d}"
                    rel = f"emb/{clip_id}.emb1"
                    _write_rows(out_dir / rel, tag, rows[si])
                    generated.append(
                        {
                            "clip_id": clip_id,
                            "artist": artist,
                            "role": "generated",
                            "condition": condition.to_json(),
                            "seed": seed,
                            "space_tag": tag,
                            "path": rel,
                            "n_rows": 1,
                        }
                    )
        artists_doc.append(
            {
                "name": artist,
                "baseline_prompt": bundle["baseline"],
                "descriptors": f"bundles/{artist}.json",
                "references": references,
                "generated": generated,
            }
        )

    manifest_doc = {
        "version": 1,
        "seeds": list(spec.seeds),
        "reference_count": spec.reference_count,
        "artists": artists_doc,
    }
    manifest_path = out_dir / "manifest.json"
    _write_json(manifest_path, manifest_doc)
    return manifest_path


def _conditions_for(spec: ScenarioSpec) -> dict[str, list[ConditionKey]]:
    out: dict[str, list[ConditionKey]] = {}
    for artist in spec.artists:
        conds = [ConditionKey.baseline(), ConditionKey.artist_name()]
        conds += [ConditionKey.styled(k) for k in range(1, STYLED_SET_COUNT + 1)]
        if spec.include_cross:
            for source in spec.artists:
                if source == artist:
                    continue
                conds += [
                    ConditionKey.cross_styled(source, k)
                    for k in range(1, STYLED_SET_COUNT + 1)
                ]
        out[artist] = conds
    return out


def _write_rows(path: Path, tag: str, row: np.ndarray) -> None:
    matrix = EmbeddingMatrix(
        space_tag=tag, rows=row.reshape(1, -1).astype(np.float32)
    )
    write_emb1(matrix, path)


def _write_json(path: Path, doc: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
