"""Experiment protocol: per-condition metrics, aggregation, cross-artist deltas.

For each (artist, space, condition) cell this module computes the
Fréchet distance of the generated population against the artist's
references, the median nearest-reference distance, and the mean
centroid similarity. Aggregation collapses the five styled sets into
mean/std FAD, pooled and per-set medians, and the name-free gap
(styled mean FAD minus artist-name FAD; the analogous median
min-distance gap is reported alongside). Cross-artist deltas average
centroid similarities over a source artist's five descriptor sets
before subtracting the target's baseline similarity.

Everything is a pure function of the (immutable) manifest plus an
EvalConfig; evaluation cells are independent and the aggregate reduce
uses a fixed (artist, space, condition) ordering, so output is
deterministic regardless of schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .conditions import STYLED_SET_COUNT, ConditionKey
from .errors import (
    MatchedSeedViolation,
    MetricError,
    MissingCondition,
    MissingCrossCondition,
)
from .manifest import ClipRecord, Manifest
from .metrics import (
    DeltaStat,
    centroid_similarity,
    delta,
    estimate_gaussian,
    frechet_distance,
    median,
    min_distance,
    min_distance_condition,
)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation knobs: covariance divisor and FAD pooling mode.

    ``frame_level=False`` (default) computes FAD over pooled per-clip
    vectors; ``True`` pools all embedding rows of a condition's clips
    into one frame population. Nearest-reference and centroid metrics
    always use per-clip vectors.
    """

    cov_divisor: str = "n-1"
    frame_level: bool = False


@dataclass(frozen=True)
class ConditionMetrics:
    fad: float
    dmin_median: float
    centroid_sim_mean: float
    n_clips: int
    per_clip_dmin: tuple[tuple[str, float], ...] = field(repr=False, default=())


@dataclass(frozen=True)
class ArtistSpaceReport:
    """All metrics for one (artist, space) cell."""

    artist: str
    space: str
    baseline: ConditionMetrics
    artist_name: ConditionMetrics
    styled: tuple[ConditionMetrics, ...]
    styled_fad_mean: float
    styled_fad_std: float
    styled_dmin_median_per_set: tuple[float, ...]
    styled_dmin_median_pooled: float
    name_free_gap: float
    name_free_gap_dmin: float


@dataclass(frozen=True)
class DeltaCell:
    """Delta-matrix entry for (target, source), with per-set values."""

    target: str
    source: str
    stat: DeltaStat
    per_set: tuple[float, ...]


@dataclass(frozen=True)
class AggregateReport:
    artists: tuple[str, ...]
    spaces: tuple[str, ...]
    config: EvalConfig
    cells: tuple[ArtistSpaceReport, ...]
    delta_matrices: dict[str, dict[tuple[str, str], Optional[DeltaCell]]]


def _clip_vectors(records: list[ClipRecord]) -> np.ndarray:
    return np.stack([r.clip_vector() for r in records])


def _frame_rows(records: list[ClipRecord]) -> np.ndarray:
    return np.concatenate([r.matrix.rows.astype(np.float64) for r in records])


def evaluate_condition(
    manifest: Manifest,
    artist: str,
    space: str,
    condition: ConditionKey,
    config: EvalConfig = EvalConfig(),
) -> ConditionMetrics:
    """Metrics of one condition's population against the artist's references."""
    refs = manifest.references(artist, space)
    gens = manifest.generated(artist, space, condition)
    if not refs:
        raise MissingCondition(f"artist {artist!r} has no references in space {space!r}")
    if not gens:
        raise MissingCondition(
            f"artist {artist!r}, space {space!r}: no {condition.label()} records"
        )
    try:
        ref_vectors = _clip_vectors(refs)
        gen_vectors = _clip_vectors(gens)

        if config.frame_level:
            fad_gen, fad_ref = _frame_rows(gens), _frame_rows(refs)
        else:
            fad_gen, fad_ref = gen_vectors, ref_vectors
        fad = frechet_distance(
            estimate_gaussian(fad_gen, config.cov_divisor),
            estimate_gaussian(fad_ref, config.cov_divisor),
        )
        dmin = min_distance_condition(
            gen_vectors, ref_vectors, ids=[r.clip_id for r in gens]
        )
        sim = centroid_similarity(gen_vectors, ref_vectors)
    except MetricError as exc:
        raise type(exc)(
            f"artist {artist!r}, space {space!r}, {condition.label()}: {exc}"
        ) from exc
    return ConditionMetrics(
        fad=fad,
        dmin_median=dmin.median,
        centroid_sim_mean=sim,
        n_clips=len(gens),
        per_clip_dmin=dmin.per_clip,
    )


def styled_fad_stats(per_set_fads: list[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (divisor count-1) of per-set FADs."""
    n = len(per_set_fads)
    mean = sum(per_set_fads) / n
    var = sum((x - mean) ** 2 for x in per_set_fads) / (n - 1)
    return mean, math.sqrt(var)


def evaluate_artist_space(
    manifest: Manifest, artist: str, space: str, config: EvalConfig = EvalConfig()
) -> ArtistSpaceReport:
    baseline = evaluate_condition(manifest, artist, space, ConditionKey.baseline(), config)
    artist_name = evaluate_condition(
        manifest, artist, space, ConditionKey.artist_name(), config
    )
    styled = tuple(
        evaluate_condition(manifest, artist, space, ConditionKey.styled(k), config)
        for k in range(1, STYLED_SET_COUNT + 1)
    )
    fad_mean, fad_std = styled_fad_stats([m.fad for m in styled])
    pooled = median([d for m in styled for _, d in m.per_clip_dmin])
    return ArtistSpaceReport(
        artist=artist,
        space=space,
        baseline=baseline,
        artist_name=artist_name,
        styled=styled,
        styled_fad_mean=fad_mean,
        styled_fad_std=fad_std,
        styled_dmin_median_per_set=tuple(m.dmin_median for m in styled),
        styled_dmin_median_pooled=pooled,
        name_free_gap=fad_mean - artist_name.fad,
        name_free_gap_dmin=pooled - artist_name.dmin_median,
    )


def cross_artist_matrix(
    manifest: Manifest, space: str, config: EvalConfig = EvalConfig()
) -> dict[tuple[str, str], DeltaCell]:
    """Delta matrix for one space; entry (target, source) averages the
    source's five descriptor sets against the target's references.

    Requires cross-styled records for every ordered artist pair.
    """
    cells: dict[tuple[str, str], DeltaCell] = {}
    for target in manifest.artist_names():
        for source in manifest.artist_names():
            cell = _delta_cell(manifest, space, target, source, config, required=True)
            cells[(target, source)] = cell
    return cells


def _delta_cell(
    manifest: Manifest,
    space: str,
    target: str,
    source: str,
    config: EvalConfig,
    required: bool,
) -> Optional[DeltaCell]:
    refs = manifest.references(target, space)
    if not refs:
        raise MissingCondition(f"artist {target!r} has no references in space {space!r}")
    ref_vectors = _clip_vectors(refs)
    base_records = manifest.generated(target, space, ConditionKey.baseline())
    if not base_records:
        raise MissingCondition(f"artist {target!r}, space {space!r}: no baseline records")
    baseline_sim = centroid_similarity(_clip_vectors(base_records), ref_vectors)

    per_set = []
    for k in range(1, STYLED_SET_COUNT + 1):
        if source == target:
            condition = ConditionKey.styled(k)
        else:
            condition = ConditionKey.cross_styled(source, k)
        records = manifest.generated(target, space, condition)
        if not records:
            if required:
                raise MissingCrossCondition(
                    f"artist {target!r}, space {space!r}: no {condition.label()} records"
                )
            return None
        per_set.append(centroid_similarity(_clip_vectors(records), ref_vectors))
    styled_sim = float(np.mean(per_set))
    stat = delta(styled_sim, baseline_sim)
    return DeltaCell(
        target=target,
        source=source,
        stat=stat,
        per_set=tuple(s - baseline_sim for s in per_set),
    )


def aggregate(
    manifest: Manifest,
    spaces: Optional[list[str]] = None,
    config: EvalConfig = EvalConfig(),
) -> AggregateReport:
    """Full evaluation over every (artist, space) cell, in fixed order.

    The delta matrix's off-diagonal entries need cross-styled records;
    when a manifest carries none for a pair, that entry is None rather
    than an error (the diagonal is always computable).
    """
    if spaces is None:
        spaces = manifest.spaces()
    artists = sorted(manifest.artist_names())
    spaces = sorted(spaces)
    for space in spaces:
        if space not in manifest.spaces():
            raise MissingCondition(f"manifest has no clips in space {space!r}")

    cells = tuple(
        evaluate_artist_space(manifest, artist, space, config)
        for artist in artists
        for space in spaces
    )
    matrices: dict[str, dict[tuple[str, str], Optional[DeltaCell]]] = {}
    for space in spaces:
        matrix: dict[tuple[str, str], Optional[DeltaCell]] = {}
        for target in artists:
            for source in artists:
                matrix[(target, source)] = _delta_cell(
                    manifest, space, target, source, config, required=(source == target)
                )
        matrices[space] = matrix
    return AggregateReport(
        artists=tuple(artists),
        spaces=tuple(spaces),
        config=config,
        cells=cells,
        delta_matrices=matrices,
    )


def pair_by_seed(
    manifest: Manifest, artist: str, space: Optional[str] = None
) -> dict[int, tuple[str, ...]]:
    """Per-seed 7-tuples of clip ids: baseline, artist-name, styled 1..5."""
    if space is None:
        spaces = manifest.spaces()
        if len(spaces) != 1:
            raise MissingCondition(
                f"manifest has spaces {spaces}; pass one explicitly"
            )
        space = spaces[0]
    core = [ConditionKey.baseline(), ConditionKey.artist_name()] + [
        ConditionKey.styled(k) for k in range(1, STYLED_SET_COUNT + 1)
    ]
    table: dict[int, tuple[str, ...]] = {}
    for seed in manifest.seeds:
        row = []
        for condition in core:
            try:
                row.append(manifest.lookup(artist, space, condition, seed).clip_id)
            except KeyError:
                raise MatchedSeedViolation(
                    f"artist {artist!r}, space {space!r}: seed {seed} missing "
                    f"its {condition.label()} record"
                ) from None
        table[seed] = tuple(row)
    return table


def paired_dmin_diffs(
    manifest: Manifest,
    artist: str,
    space: str,
    condition_a: ConditionKey,
    condition_b: ConditionKey,
) -> dict[int, float]:
    """Per-seed difference of nearest-reference distances between two conditions."""
    ref_vectors = _clip_vectors(manifest.references(artist, space))
    out: dict[int, float] = {}
    for seed in manifest.seeds:
        rec_a = manifest.lookup(artist, space, condition_a, seed)
        rec_b = manifest.lookup(artist, space, condition_b, seed)
        out[seed] = min_distance(rec_a.clip_vector(), ref_vectors) - min_distance(
            rec_b.clip_vector(), ref_vectors
        )
    return out
