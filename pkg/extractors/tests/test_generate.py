"""Seeded generation: layout, determinism, prompt derivation."""

import json

import pytest

from stylegap_extractors.cli import main
from stylegap_extractors.errors import GenerationFailure
from stylegap_extractors.generate import (
    condition_prompts,
    generate_conditions,
    parse_seed_range,
)

from conftest import make_bundle


def test_parse_seed_range():
    assert parse_seed_range("0..9") == list(range(10))
    assert parse_seed_range("0,3,7") == [0, 3, 7]
    assert parse_seed_range("4..4") == [4]


def test_condition_prompts_order(tmp_path):
    bundle_path = make_bundle(tmp_path / "b.json", "Artist A", "amber")
    bundle = json.loads(bundle_path.read_text(encoding="utf-8"))
    prompts = condition_prompts(bundle)
    assert [label for label, _, _ in prompts] == [
        "baseline", "artist_name", "styled_1", "styled_2", "styled_3", "styled_4", "styled_5",
    ]
    assert prompts[1][2] == bundle["baseline"] + " [Artist A]"
    assert prompts[2][2] == bundle["baseline"] + ", " + ", ".join(bundle["sets"][0])


def test_generation_layout_and_metadata(checkpoints, tmp_path):
    bundle_path = make_bundle(tmp_path / "b.json", "Artist A", "amber")
    out = tmp_path / "clips"
    clips_path = generate_conditions(bundle_path, [0, 1], out, checkpoints["tonegen"])
    wavs = sorted(out.glob("*.wav"))
    assert len(wavs) == 14  # 2 seeds x 7 conditions
    doc = json.loads(clips_path.read_text(encoding="utf-8"))
    assert doc["artist"] == "Artist A"
    assert doc["seeds"] == [0, 1]
    assert len(doc["clips"]) == 14
    names = {c["file"] for c in doc["clips"]}
    assert "artist_a__baseline__s00.wav" in names
    assert "artist_a__styled_5__s01.wav" in names


def test_same_seed_same_prompt_identical_bytes(checkpoints, tmp_path):
    bundle_path = make_bundle(tmp_path / "b.json", "Artist A", "amber")
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    generate_conditions(bundle_path, [3], out1, checkpoints["tonegen"])
    generate_conditions(bundle_path, [3], out2, checkpoints["tonegen"])
    for wav in sorted(out1.glob("*.wav")):
        assert wav.read_bytes() == (out2 / wav.name).read_bytes()


def test_conditions_differ_within_a_seed(checkpoints, tmp_path):
    bundle_path = make_bundle(tmp_path / "b.json", "Artist A", "amber")
    out = tmp_path / "clips"
    generate_conditions(bundle_path, [5], out, checkpoints["tonegen"])
    baseline = (out / "artist_a__baseline__s05.wav").read_bytes()
    named = (out / "artist_a__artist_name__s05.wav").read_bytes()
    styled = (out / "artist_a__styled_1__s05.wav").read_bytes()
    assert baseline != named
    assert baseline != styled


def test_malformed_bundle_rejected(checkpoints, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"artist_name": "A", "baseline": "x", "sets": [[]]}))
    with pytest.raises(GenerationFailure):
        generate_conditions(path, [0], tmp_path / "out", checkpoints["tonegen"])


def test_cli_generate_and_missing_checkpoint(checkpoints, tmp_path, capsys):
    bundle_path = make_bundle(tmp_path / "b.json", "Artist A", "amber")
    code = main(
        [
            "generate",
            "--bundle", str(bundle_path),
            "--seeds", "0..1",
            "--checkpoint", str(checkpoints["tonegen"]),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert code == 0
    assert len(list((tmp_path / "out").glob("*.wav"))) == 14

    code = main(
        [
            "generate",
            "--bundle", str(bundle_path),
            "--seeds", "0..1",
            "--checkpoint", str(tmp_path / "missing"),
            "--out", str(tmp_path / "out2"),
        ]
    )
    assert code == 2
    diagnostic = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert diagnostic["error"] == "ModelLoadFailure"
    assert "checkpoint" in diagnostic["message"]
