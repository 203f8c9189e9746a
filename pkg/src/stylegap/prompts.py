"""Descriptor bundles and prompt construction.

A descriptor bundle carries one artist's neutral baseline sentence and
five sets of three short style tokens. Prompt strings are derived
deterministically:

* styled prompt k  = baseline + ", " + token1 + ", " + token2 + ", " + token3
* artist-name prompt = baseline + " [" + artist_name + "]"

The ", " join and the bracket format are fixed; byte-exact prompt
reproduction is part of the contract. Tokens must be 2-4 words of
lowercase ASCII (letters, digits, hyphens), single-space separated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import (
    DuplicateSet,
    IoFailure,
    NonLowercaseAscii,
    SchemaError,
    TokenTooLong,
    TokenTooShort,
    WrongSetCount,
    WrongTokenCount,
)

SET_COUNT = 5
TOKENS_PER_SET = 3
MIN_WORDS = 2
MAX_WORDS = 4

_TOKEN_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789 -")


@dataclass(frozen=True)
class DescriptorBundle:
    """Validated descriptor bundle for one artist."""

    artist_name: str
    baseline: str
    sets: tuple[tuple[str, str, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "artist_name": self.artist_name,
            "baseline": self.baseline,
            "sets": [list(s) for s in self.sets],
        }


@dataclass(frozen=True)
class PromptSet:
    """The seven prompt strings derived from one bundle."""

    baseline_prompt: str
    artist_name_prompt: str
    styled_prompts: tuple[str, str, str, str, str]

    def ordered(self) -> list[str]:
        """Fixed order: baseline, artist-name, styled 1..5."""
        return [self.baseline_prompt, self.artist_name_prompt, *self.styled_prompts]


def validate_token(token: str) -> None:
    """Check one style token against the lexical constraints."""
    if not isinstance(token, str):
        raise SchemaError(f"token must be a string, got {type(token).__name__}")
    bad = set(token) - _TOKEN_CHARS
    if bad:
        raise NonLowercaseAscii(
            f"token {token!r} contains disallowed characters: {sorted(bad)!r}"
        )
    words = token.split(" ")
    if any(w == "" for w in words):
        raise NonLowercaseAscii(f"token {token!r} has empty words (stray spaces)")
    if len(words) < MIN_WORDS:
        raise TokenTooShort(f"token {token!r} has {len(words)} word(s), minimum is {MIN_WORDS}")
    if len(words) > MAX_WORDS:
        raise TokenTooLong(f"token {token!r} has {len(words)} words, maximum is {MAX_WORDS}")


def parse_bundle(json_text: str) -> DescriptorBundle:
    """Parse and validate a descriptor bundle from JSON text."""
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bundle is not valid JSON: {exc}") from exc
    return bundle_from_dict(doc)


def bundle_from_dict(doc: object) -> DescriptorBundle:
    if not isinstance(doc, dict):
        raise SchemaError("bundle top level must be a JSON object")
    missing = {"artist_name", "baseline", "sets"} - set(doc)
    if missing:
        raise SchemaError(f"bundle is missing keys: {sorted(missing)}")
    artist_name = doc["artist_name"]
    baseline = doc["baseline"]
    sets = doc["sets"]
    if not isinstance(artist_name, str) or not artist_name:
        raise SchemaError("'artist_name' must be a non-empty string")
    if not isinstance(baseline, str) or not baseline:
        raise SchemaError("'baseline' must be a non-empty string")
    if not isinstance(sets, list):
        raise SchemaError("'sets' must be a list")
    if len(sets) != SET_COUNT:
        raise WrongSetCount(f"bundle has {len(sets)} sets, expected {SET_COUNT}")
    parsed = []
    for i, token_set in enumerate(sets, start=1):
        if not isinstance(token_set, list):
            raise SchemaError(f"set {i} must be a list of tokens")
        if len(token_set) != TOKENS_PER_SET:
            raise WrongTokenCount(
                f"set {i} has {len(token_set)} tokens, expected {TOKENS_PER_SET}"
            )
        for token in token_set:
            validate_token(token)
        parsed.append(tuple(token_set))
    for i in range(len(parsed)):
        for j in range(i + 1, len(parsed)):
            if parsed[i] == parsed[j]:
                raise DuplicateSet(f"sets {i + 1} and {j + 1} are identical")
    return DescriptorBundle(artist_name=artist_name, baseline=baseline, sets=tuple(parsed))


def load_bundle(path: str | Path) -> DescriptorBundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_bundle(text)


def serialize_bundle(bundle: DescriptorBundle) -> str:
    """JSON text such that parse_bundle(serialize_bundle(b)) == b."""
    return json.dumps(bundle.to_json_dict(), indent=2, ensure_ascii=False)


def styled_prompt(baseline: str, tokens: tuple[str, str, str]) -> str:
    return baseline + ", " + ", ".join(tokens)


def artist_name_prompt(baseline: str, artist_name: str) -> str:
    return f"{baseline} [{artist_name}]"


def build_prompts(bundle: DescriptorBundle) -> PromptSet:
    """Derive all seven prompt strings from a validated bundle."""
    styled = tuple(styled_prompt(bundle.baseline, s) for s in bundle.sets)
    return PromptSet(
        baseline_prompt=bundle.baseline,
        artist_name_prompt=artist_name_prompt(bundle.baseline, bundle.artist_name),
        styled_prompts=styled,
    )


def packaged_bundle(name: str) -> DescriptorBundle:
    """Load one of the bundles shipped with the package (by file stem)."""
    text = (
        resources.files("stylegap")
        .joinpath("data", "bundles", f"{name}.json")
        .read_text(encoding="utf-8")
    )
    return parse_bundle(text)


def extra_artist_tokens() -> dict[str, tuple[str, str, str]]:
    """Shipped single-set descriptor fixtures for the extra artists."""
    text = (
        resources.files("stylegap")
        .joinpath("data", "extra_artist_tokens.json")
        .read_text(encoding="utf-8")
    )
    doc = json.loads(text)
    return {name: tuple(tokens) for name, tokens in doc["artists"].items()}
