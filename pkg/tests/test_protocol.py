"""Protocol: condition evaluation, aggregation, pairing, cross-artist deltas."""

import json
import math

import numpy as np
import pytest

from stylegap.conditions import ConditionKey
from stylegap.emb1 import EmbeddingMatrix, write_emb1
from stylegap.errors import MissingCondition, MissingCrossCondition
from stylegap.manifest import load_manifest
from stylegap.protocol import (
    EvalConfig,
    aggregate,
    cross_artist_matrix,
    evaluate_artist_space,
    evaluate_condition,
    pair_by_seed,
    paired_dmin_diffs,
    styled_fad_stats,
)
from stylegap.scenarios import ScenarioSpec, build_scenario, expected_fad

from conftest import manifest_doc, write_doc


def _write_constant_manifest(tmp_path, vector, seeds=(0, 1)):
    """Manifest where every clip (refs and all conditions) is one vector."""
    emb = tmp_path / "emb"
    emb.mkdir()
    seeds = list(seeds)
    conditions = [
        ("baseline", "baseline"),
        ("artist_name", "artist_name"),
    ] + [(f"styled_{k}", {"styled": k}) for k in range(1, 6)]
    records = {"references": [], "generated": []}
    rows = np.asarray([vector], dtype=np.float32)

    def emit(clip_id):
        write_emb1(EmbeddingMatrix(space_tag="toy", rows=rows), emb / f"{clip_id}.emb1")

    for i in range(2):
        clip_id = f"ref{i}"
        emit(clip_id)
        records["references"].append(
            {
                "clip_id": clip_id,
                "artist": "a",
                "role": "reference",
                "space_tag": "toy",
                "path": f"emb/{clip_id}.emb1",
            }
        )
    for label, condition in conditions:
        for seed in seeds:
            clip_id = f"{label}_s{seed}"
            emit(clip_id)
            records["generated"].append(
                {
                    "clip_id": clip_id,
                    "artist": "a",
                    "role": "generated",
                    "condition": condition,
                    "seed": seed,
                    "space_tag": "toy",
                    "path": f"emb/{clip_id}.emb1",
                }
            )
    doc = {
        "version": 1,
        "seeds": seeds,
        "reference_count": 2,
        "artists": [
            {
                "name": "a",
                "baseline_prompt": "x",
                "descriptors": "none.json",
                "references": records["references"],
                "generated": records["generated"],
            }
        ],
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_self_evaluation_is_perfect(tmp_path):
    manifest = load_manifest(_write_constant_manifest(tmp_path, [3.0, 4.0]))
    metrics = evaluate_condition(manifest, "a", "toy", ConditionKey.baseline())
    assert metrics.fad == 0.0
    assert metrics.dmin_median == 0.0
    assert metrics.centroid_sim_mean == pytest.approx(1.0)
    assert metrics.n_clips == 2


def test_n_clips_equals_seed_count(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    metrics = evaluate_condition(
        manifest, "artist_alpha", "vggish", ConditionKey.styled(2)
    )
    assert metrics.n_clips == len(manifest.seeds) == 10


def test_fixture_fad_matches_closed_form(displacement_dir):
    spec = ScenarioSpec(scenario="displacement", rng_seed=20240811)
    manifest = load_manifest(displacement_dir / "manifest.json")
    for condition in [
        ConditionKey.baseline(),
        ConditionKey.artist_name(),
        ConditionKey.styled(1),
        ConditionKey.styled(5),
    ]:
        metrics = evaluate_condition(manifest, "artist_beta", "clap", condition)
        expected = expected_fad(spec, condition)
        assert metrics.fad == pytest.approx(expected, rel=0.05, abs=1e-9)


def test_missing_condition(small_dir):
    manifest = load_manifest(small_dir / "manifest.json")
    with pytest.raises(MissingCondition):
        evaluate_condition(manifest, "artist_alpha", "nope", ConditionKey.baseline())


def test_metric_errors_carry_cell_context(tmp_path):
    from stylegap.errors import InsufficientSamples

    # A single seed gives one-clip populations: covariance undefined.
    manifest = load_manifest(_write_constant_manifest(tmp_path, [1.0, 2.0], seeds=(0,)))
    with pytest.raises(InsufficientSamples, match="artist 'a'.*baseline"):
        evaluate_condition(manifest, "a", "toy", ConditionKey.baseline())


def test_styled_fad_stats_examples():
    mean, std = styled_fad_stats([2.0, 2.0, 2.0, 2.0, 2.0])
    assert mean == 2.0 and std == 0.0
    mean, std = styled_fad_stats([1.0, 2.0, 3.0, 4.0, 5.0])
    assert mean == pytest.approx(3.0, abs=1e-12)
    assert std == pytest.approx(math.sqrt(2.5), abs=1e-12)


def test_name_free_gap_arithmetic(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    cell = evaluate_artist_space(manifest, "artist_alpha", "vggish")
    assert cell.name_free_gap == cell.styled_fad_mean - cell.artist_name.fad
    assert cell.name_free_gap > 0.0  # styled displaced less than artist-name
    assert cell.name_free_gap_dmin == (
        cell.styled_dmin_median_pooled - cell.artist_name.dmin_median
    )


def test_pooled_and_per_set_medians_both_present(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    cell = evaluate_artist_space(manifest, "artist_alpha", "clap")
    assert len(cell.styled_dmin_median_per_set) == 5
    assert cell.styled_dmin_median_pooled > 0.0


def test_pair_by_seed_layout(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    table = pair_by_seed(manifest, "artist_alpha", "vggish")
    assert len(table) == 10
    for seed, row in table.items():
        assert len(row) == 7
        assert f"s{seed:02d}" in row[0]


def test_paired_dmin_diffs_zero_for_identical(null_dir):
    manifest = load_manifest(null_dir / "manifest.json")
    diffs = paired_dmin_diffs(
        manifest,
        "artist_alpha",
        "vggish",
        ConditionKey.styled(1),
        ConditionKey.baseline(),
    )
    assert all(d == 0.0 for d in diffs.values())


def test_cross_matrix_shape_and_signs(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    matrix = cross_artist_matrix(manifest, "clap")
    assert len(matrix) == 4
    for (target, source), cell in matrix.items():
        assert cell.stat.delta == cell.stat.styled_mean_sim - cell.stat.baseline_mean_sim
        assert len(cell.per_set) == 5
        if target == source:
            assert cell.stat.delta > 0.0
        else:
            assert cell.stat.delta < 0.0


def test_cross_matrix_requires_cross_records(small_dir, tmp_path):
    spec = ScenarioSpec(
        scenario="displacement",
        rng_seed=5,
        seeds=tuple(range(4)),
        reference_count=4,
        spaces=(("toy", 6),),
        rank=2,
        include_cross=False,
    )
    manifest = load_manifest(build_scenario(spec, tmp_path))
    with pytest.raises(MissingCrossCondition):
        cross_artist_matrix(manifest, "toy")
    # aggregate still succeeds: off-diagonal entries become None
    report = aggregate(manifest)
    matrix = report.delta_matrices["toy"]
    assert matrix[("artist_alpha", "artist_alpha")] is not None
    assert matrix[("artist_alpha", "artist_beta")] is None


def test_aggregate_deterministic_and_ordered(displacement_dir):
    manifest = load_manifest(displacement_dir / "manifest.json")
    r1 = aggregate(manifest)
    r2 = aggregate(manifest)
    assert r1.artists == ("artist_alpha", "artist_beta")
    assert r1.spaces == ("clap", "vggish")
    for c1, c2 in zip(r1.cells, r2.cells):
        assert c1 == c2


def test_permutation_invariance(small_dir):
    base = load_manifest(small_dir / "manifest.json")
    doc = manifest_doc(small_dir)
    rng = np.random.default_rng(1)
    for artist in doc["artists"]:
        rng.shuffle(artist["generated"])
        rng.shuffle(artist["references"])
    shuffled = load_manifest(write_doc(small_dir, doc, name="shuffled.json"))
    for artist in base.artist_names():
        a = evaluate_artist_space(base, artist, "toy")
        b = evaluate_artist_space(shuffled, artist, "toy")
        assert a.baseline.fad == b.baseline.fad
        assert a.styled_fad_mean == b.styled_fad_mean
        assert a.baseline.dmin_median == b.baseline.dmin_median
        assert a.baseline.centroid_sim_mean == b.baseline.centroid_sim_mean


def test_frame_level_pooling_differs_with_multirow_clips(tmp_path):
    # Two-row clips: frame-level FAD sees 2x the rows, clip-level the means.
    rng = np.random.default_rng(8)
    emb = tmp_path / "emb"
    emb.mkdir()
    seeds = [0, 1, 2]
    doc = {
        "version": 1,
        "seeds": seeds,
        "reference_count": 3,
        "artists": [
            {
                "name": "a",
                "baseline_prompt": "x",
                "descriptors": "d.json",
                "references": [],
                "generated": [],
            }
        ],
    }

    def emit(clip_id, rows):
        write_emb1(
            EmbeddingMatrix(space_tag="toy", rows=rows.astype(np.float32)),
            emb / f"{clip_id}.emb1",
        )

    for i in range(3):
        clip_id = f"r{i}"
        emit(clip_id, rng.standard_normal((2, 4)) + 2.0)
        doc["artists"][0]["references"].append(
            {
                "clip_id": clip_id,
                "artist": "a",
                "role": "reference",
                "space_tag": "toy",
                "path": f"emb/{clip_id}.emb1",
            }
        )
    conditions = [("baseline", "baseline"), ("artist_name", "artist_name")] + [
        (f"styled_{k}", {"styled": k}) for k in range(1, 6)
    ]
    for label, condition in conditions:
        for seed in seeds:
            clip_id = f"{label}_s{seed}"
            emit(clip_id, rng.standard_normal((2, 4)) + 2.0)
            doc["artists"][0]["generated"].append(
                {
                    "clip_id": clip_id,
                    "artist": "a",
                    "role": "generated",
                    "condition": condition,
                    "seed": seed,
                    "space_tag": "toy",
                    "path": f"emb/{clip_id}.emb1",
                }
            )
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    manifest = load_manifest(path)
    clip_level = evaluate_condition(
        manifest, "a", "toy", ConditionKey.baseline(), EvalConfig(frame_level=False)
    )
    frame_level = evaluate_condition(
        manifest, "a", "toy", ConditionKey.baseline(), EvalConfig(frame_level=True)
    )
    assert clip_level.fad != frame_level.fad
    # the per-clip metrics are pooling-independent
    assert clip_level.dmin_median == frame_level.dmin_median
    assert clip_level.centroid_sim_mean == frame_level.centroid_sim_mean
