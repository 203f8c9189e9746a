"""Experimental condition keys.

A generated clip belongs to exactly one condition: the plain baseline
prompt, the artist-name prompt, one of the five styled descriptor sets,
or a cross-styled condition carrying another artist's descriptor set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import SchemaError

STYLED_SET_COUNT = 5

_BASELINE = "baseline"
_ARTIST_NAME = "artist_name"
_STYLED = "styled"
_CROSS_STYLED = "cross_styled"


@dataclass(frozen=True)
class ConditionKey:
    """Immutable, hashable key identifying an experimental condition."""

    kind: str
    set_index: Optional[int] = None
    source_artist: Optional[str] = None

    @classmethod
    def baseline(cls) -> "ConditionKey":
        return cls(_BASELINE)

    @classmethod
    def artist_name(cls) -> "ConditionKey":
        return cls(_ARTIST_NAME)

    @classmethod
    def styled(cls, set_index: int) -> "ConditionKey":
        _check_set_index(set_index)
        return cls(_STYLED, set_index=set_index)

    @classmethod
    def cross_styled(cls, source_artist: str, set_index: int) -> "ConditionKey":
        _check_set_index(set_index)
        if not source_artist:
            raise SchemaError("cross_styled condition requires a source artist")
        return cls(_CROSS_STYLED, set_index=set_index, source_artist=source_artist)

    @property
    def is_cross(self) -> bool:
        return self.kind == _CROSS_STYLED

    def to_json(self) -> object:
        """Encode for the manifest JSON schema."""
        if self.kind == _BASELINE:
            return "baseline"
        if self.kind == _ARTIST_NAME:
            return "artist_name"
        if self.kind == _STYLED:
            return {"styled": self.set_index}
        return {"cross_styled": {"source": self.source_artist, "set": self.set_index}}

    @classmethod
    def from_json(cls, value: object) -> "ConditionKey":
        """Decode the manifest JSON encoding of a condition."""
        if value == "baseline":
            return cls.baseline()
        if value == "artist_name":
            return cls.artist_name()
        if isinstance(value, dict):
            if set(value) == {"styled"}:
                idx = value["styled"]
                if not isinstance(idx, int) or isinstance(idx, bool):
                    raise SchemaError(f"styled set index must be an integer: {idx!r}")
                return cls.styled(idx)
            if set(value) == {"cross_styled"}:
                inner = value["cross_styled"]
                if (
                    not isinstance(inner, dict)
                    or set(inner) != {"source", "set"}
                    or not isinstance(inner["source"], str)
                ):
                    raise SchemaError(f"malformed cross_styled condition: {value!r}")
                idx = inner["set"]
                if not isinstance(idx, int) or isinstance(idx, bool):
                    raise SchemaError(f"cross_styled set index must be an integer: {idx!r}")
                return cls.cross_styled(inner["source"], idx)
        raise SchemaError(f"unrecognized condition encoding: {value!r}")

    def label(self) -> str:
        """Stable human-readable label, used in reports and diagnostics."""
        if self.kind == _STYLED:
            return f"styled_{self.set_index}"
        if self.kind == _CROSS_STYLED:
            return f"cross_styled_{self.source_artist}_{self.set_index}"
        return self.kind

    def sort_key(self) -> tuple:
        """Fixed condition ordering: baseline, artist_name, styled, cross."""
        order = {_BASELINE: 0, _ARTIST_NAME: 1, _STYLED: 2, _CROSS_STYLED: 3}
        return (order[self.kind], self.source_artist or "", self.set_index or 0)


def _check_set_index(set_index: int) -> None:
    if not isinstance(set_index, int) or isinstance(set_index, bool):
        raise SchemaError(f"set index must be an integer: {set_index!r}")
    if not 1 <= set_index <= STYLED_SET_COUNT:
        raise SchemaError(
            f"set index must be in 1..{STYLED_SET_COUNT}, got {set_index}"
        )


BASELINE = ConditionKey.baseline()
ARTIST_NAME = ConditionKey.artist_name()
STYLED = tuple(ConditionKey.styled(k) for k in range(1, STYLED_SET_COUNT + 1))
