"""Shared fixtures: synthetic scenario manifests built once per session."""

import json
from pathlib import Path

import pytest

from stylegap.scenarios import ScenarioSpec, build_scenario

SESSION_SEED = 20240811


@pytest.fixture(scope="session")
def displacement_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("displacement")
    build_scenario(ScenarioSpec(scenario="displacement", rng_seed=SESSION_SEED), out)
    return out


@pytest.fixture(scope="session")
def null_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("null")
    build_scenario(ScenarioSpec(scenario="null", rng_seed=SESSION_SEED), out)
    return out


@pytest.fixture(scope="session")
def cross_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("cross")
    build_scenario(ScenarioSpec(scenario="cross", rng_seed=SESSION_SEED), out)
    return out


@pytest.fixture(scope="session")
def small_dir(tmp_path_factory) -> Path:
    """Compact single-space fixture for fast manifest-mutation tests."""
    out = tmp_path_factory.mktemp("small")
    spec = ScenarioSpec(
        scenario="displacement",
        rng_seed=SESSION_SEED,
        seeds=tuple(range(4)),
        reference_count=4,
        spaces=(("toy", 6),),
        rank=2,
        include_cross=True,
    )
    build_scenario(spec, out)
    return out


def manifest_doc(fixture_dir: Path) -> dict:
    return json.loads((fixture_dir / "manifest.json").read_text(encoding="utf-8"))


def write_doc(fixture_dir: Path, doc: dict, name: str = "mutated.json") -> Path:
    path = fixture_dir / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path
