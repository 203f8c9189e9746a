"""Report documents: canonical JSON, CSV projection, atomic writes.

Reports must be byte-identical across runs on identical inputs, so the
JSON is rendered by a small canonical emitter: keys sorted, floats
formatted to 9 significant digits (well beyond metric tolerances), no
timestamps or absolute paths. The CSV export is a projection of the
per-condition summary table; JSON is the authoritative format. Output
files are written to a temporary sibling and atomically renamed, so a
failing run leaves no partial report behind.
"""

from __future__ import annotations

import hashlib
import math
import os
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import IoFailure
from .manifest import Manifest
from .protocol import AggregateReport, ArtistSpaceReport, ConditionMetrics

SCHEMA_VERSION = 1

_CSV_COLUMNS = (
    "artist",
    "space",
    "condition",
    "fad",
    "dmin_median",
    "centroid_sim_mean",
    "n_clips",
)


def format_float(value: float) -> str:
    """Canonical 9-significant-digit rendering, valid as a JSON number."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"not a float: {value!r}")
    if math.isnan(value) or math.isinf(value):
        raise ValueError("reports cannot contain NaN or infinity")
    return f"{value:.9g}"


def canonical_json(doc: object) -> str:
    """Render a JSON document deterministically (sorted keys, fixed floats)."""
    pieces: list[str] = []
    _emit(doc, pieces)
    return "".join(pieces) + "\n"


def _emit(node: object, out: list[str]) -> None:
    if node is None:
        out.append("null")
    elif node is True:
        out.append("true")
    elif node is False:
        out.append("false")
    elif isinstance(node, str):
        out.append(_escape(node))
    elif isinstance(node, int):
        out.append(str(node))
    elif isinstance(node, float):
        out.append(format_float(node))
    elif isinstance(node, (list, tuple)):
        out.append("[")
        for i, item in enumerate(node):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(node, dict):
        out.append("{")
        for i, key in enumerate(sorted(node)):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(_escape(key))
            out.append(":")
            _emit(node[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(node).__name__} to report JSON")


def _escape(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


# ---------------------------------------------------------------------------
# Document assembly
# ---------------------------------------------------------------------------


def build_document(
    report: AggregateReport, manifest: Manifest, manifest_path: Optional[Path] = None
) -> dict:
    """Assemble the full report document from an aggregate evaluation."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": {
            "cov_divisor": report.config.cov_divisor,
            "pooling": "frame" if report.config.frame_level else "clip",
            "spaces": list(report.spaces),
            "reference_count": manifest.reference_count,
            "seed_count": len(manifest.seeds),
        },
        "manifest": _manifest_identity(manifest, manifest_path),
        "results": [_cell_dict(cell) for cell in report.cells],
        "delta": [
            _delta_space_dict(report, space) for space in report.spaces
        ],
        "tables": _tables(report),
    }
    return doc


def _manifest_identity(manifest: Manifest, manifest_path: Optional[Path]) -> dict:
    identity: dict = {
        "artists": sorted(manifest.artist_names()),
        "seeds": list(manifest.seeds),
    }
    if manifest_path is not None:
        identity["file"] = Path(manifest_path).name
        identity["sha256"] = hashlib.sha256(Path(manifest_path).read_bytes()).hexdigest()
    return identity


def _condition_dict(label: str, metrics: ConditionMetrics) -> dict:
    return {
        "condition": label,
        "fad": metrics.fad,
        "dmin_median": metrics.dmin_median,
        "centroid_sim_mean": metrics.centroid_sim_mean,
        "n_clips": metrics.n_clips,
    }


def _cell_dict(cell: ArtistSpaceReport) -> dict:
    conditions = [
        _condition_dict("baseline", cell.baseline),
        _condition_dict("artist_name", cell.artist_name),
    ]
    for k, metrics in enumerate(cell.styled, start=1):
        conditions.append(_condition_dict(f"styled_{k}", metrics))
    return {
        "artist": cell.artist,
        "space": cell.space,
        "conditions": conditions,
        "styled_fad_mean": cell.styled_fad_mean,
        "styled_fad_std": cell.styled_fad_std,
        "styled_dmin_median_per_set": list(cell.styled_dmin_median_per_set),
        "styled_dmin_median_pooled": cell.styled_dmin_median_pooled,
        "name_free_gap": cell.name_free_gap,
        "name_free_gap_dmin": cell.name_free_gap_dmin,
    }


def _delta_space_dict(report: AggregateReport, space: str) -> dict:
    artists = list(report.artists)
    matrix = report.delta_matrices[space]
    rows = []
    cells = []
    for target in artists:
        row = []
        for source in artists:
            cell = matrix[(target, source)]
            if cell is None:
                row.append(None)
                continue
            row.append(cell.stat.delta)
            cells.append(
                {
                    "target": target,
                    "source": source,
                    "delta": cell.stat.delta,
                    "styled_mean_sim": cell.stat.styled_mean_sim,
                    "baseline_mean_sim": cell.stat.baseline_mean_sim,
                    "per_set": list(cell.per_set),
                }
            )
        rows.append(row)
    return {"space": space, "artists": artists, "matrix": rows, "cells": cells}


def _tables(report: AggregateReport) -> dict:
    condition_summary = []
    fad_summary = []
    dmin_summary = []
    for cell in report.cells:
        for label, metrics in _iter_conditions(cell):
            condition_summary.append(
                {
                    "artist": cell.artist,
                    "space": cell.space,
                    "condition": label,
                    "fad": metrics.fad,
                    "dmin_median": metrics.dmin_median,
                    "centroid_sim_mean": metrics.centroid_sim_mean,
                    "n_clips": metrics.n_clips,
                }
            )
        fad_summary.append(
            {
                "artist": cell.artist,
                "space": cell.space,
                "baseline": cell.baseline.fad,
                "artist_name": cell.artist_name.fad,
                "styled_mean": cell.styled_fad_mean,
                "styled_std": cell.styled_fad_std,
                "name_free_gap": cell.name_free_gap,
            }
        )
        dmin_summary.append(
            {
                "artist": cell.artist,
                "space": cell.space,
                "baseline": cell.baseline.dmin_median,
                "artist_name": cell.artist_name.dmin_median,
                "styled_per_set": list(cell.styled_dmin_median_per_set),
                "styled_pooled": cell.styled_dmin_median_pooled,
                "name_free_gap_dmin": cell.name_free_gap_dmin,
            }
        )
    delta_cells = []
    for space in report.spaces:
        for (target, source), cell in sorted(report.delta_matrices[space].items()):
            if cell is not None:
                delta_cells.append(
                    {
                        "space": space,
                        "target": target,
                        "source": source,
                        "delta": cell.stat.delta,
                    }
                )
    return {
        "condition_summary": condition_summary,
        "fad_summary": fad_summary,
        "dmin_summary": dmin_summary,
        "delta_cells": delta_cells,
    }


def _iter_conditions(cell: ArtistSpaceReport):
    yield "baseline", cell.baseline
    yield "artist_name", cell.artist_name
    for k, metrics in enumerate(cell.styled, start=1):
        yield f"styled_{k}", metrics


# ---------------------------------------------------------------------------
# Rendering and atomic output
# ---------------------------------------------------------------------------


def render_csv(doc: dict) -> str:
    """CSV projection: one row per (artist, space, condition)."""
    lines = [",".join(_CSV_COLUMNS)]
    for row in doc["tables"]["condition_summary"]:
        fields = []
        for col in _CSV_COLUMNS:
            value = row[col]
            if isinstance(value, float):
                fields.append(format_float(value))
            else:
                fields.append(str(value))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def write_atomic(text: str, path: str | Path) -> None:
    """Write via a temporary sibling plus rename; no partial files remain."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            tmp.unlink(missing_ok=True)
        except OSError:
            pass
        raise IoFailure(f"cannot write {path}: {exc}") from exc
