"""Report cells, significance markers, and table rendering.

A cell is a tau value plus a marker set. The dagger lands on the larger
side of a significant two-column pair; the star on the larger of separate
and batch; the arrow markers land on the edited column and record whether
it sits significantly above or below separate (s) and batch (b). Renderers
emit a fixed-order CSV, a JSON sidecar carrying every bootstrap interval,
and a Markdown grid.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
from typing import Mapping, Optional, Sequence

from .errors import MissingComparisonError
from .inference import BootstrapInterval, Direction, TripleResult

TRIPLE_ROLES = ("separate", "batch", "edited")


class Marker(enum.Enum):
    DAGGER = "dagger"
    STAR = "star"
    S_UP = "s_up"
    S_DOWN = "s_down"
    B_UP = "b_up"
    B_DOWN = "b_down"


_EXCLUSIVE = ((Marker.S_UP, Marker.S_DOWN), (Marker.B_UP, Marker.B_DOWN))


def render_markers(markers: frozenset[Marker] | set[Marker]) -> str:
    """Compact rendering of a marker set, e.g. "†", "★", "s,b↑", "s↑,b↓"."""
    for first, second in _EXCLUSIVE:
        if first in markers and second in markers:
            raise ValueError(f"{first.value} and {second.value} are mutually exclusive")
    parts = []
    if Marker.DAGGER in markers:
        parts.append("†")
    if Marker.STAR in markers:
        parts.append("★")
    s_arrow = "↑" if Marker.S_UP in markers else "↓" if Marker.S_DOWN in markers else None
    b_arrow = "↑" if Marker.B_UP in markers else "↓" if Marker.B_DOWN in markers else None
    if s_arrow is not None and s_arrow == b_arrow:
        parts.append(f"s,b{s_arrow}")
    else:
        if s_arrow is not None:
            parts.append(f"s{s_arrow}")
        if b_arrow is not None:
            parts.append(f"b{b_arrow}")
    return ",".join(parts)


@dataclasses.dataclass(frozen=True)
class ReportCell:
    tau: float
    markers: frozenset[Marker] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "markers", frozenset(self.markers))
        render_markers(self.markers)  # enforces mutual exclusion

    def rendered(self) -> str:
        text = f"{self.tau:.3f}"
        marks = render_markers(self.markers)
        return f"{text}^{{{marks}}}" if marks else text


def annotate_significance(
    taus: Mapping[str, float],
    pair_labels: Optional[tuple[str, str]] = None,
    pair: Optional[BootstrapInterval] = None,
    triple: Optional[TripleResult] = None,
) -> dict[str, ReportCell]:
    """Attach markers to a row of tau values.

    ``pair`` tests taus[pair_labels[0]] minus taus[pair_labels[1]]; a
    significant result puts the dagger on the larger side. ``triple`` covers
    the separate/batch/edited labels: the star goes to the larger of a
    significant separate/batch pair, and the edited cell collects arrows
    against separate and batch. Referenced comparisons must be present.
    """
    markers: dict[str, set[Marker]] = {label: set() for label in taus}

    if pair_labels is not None:
        if pair is None:
            raise MissingComparisonError(f"no interval for pair {pair_labels}")
        first, second = pair_labels
        if first not in taus or second not in taus:
            raise MissingComparisonError(f"pair {pair_labels} not among columns {sorted(taus)}")
        if pair.significant:
            winner = first if pair.direction is Direction.A_FAVORED else second
            markers[winner].add(Marker.DAGGER)
    elif pair is not None:
        raise MissingComparisonError("pair interval given without pair labels")

    has_triple_labels = all(role in taus for role in TRIPLE_ROLES)
    if has_triple_labels and triple is None:
        raise MissingComparisonError(f"columns {TRIPLE_ROLES} need a triple result")
    if triple is not None:
        if not has_triple_labels:
            raise MissingComparisonError(
                f"triple result needs columns {TRIPLE_ROLES}, got {sorted(taus)}"
            )
        if triple.separate_vs_batch.significant:
            winner = (
                "separate"
                if triple.separate_vs_batch.direction is Direction.A_FAVORED
                else "batch"
            )
            markers[winner].add(Marker.STAR)
        if triple.edited_vs_separate.significant:
            up = triple.edited_vs_separate.direction is Direction.A_FAVORED
            markers["edited"].add(Marker.S_UP if up else Marker.S_DOWN)
        if triple.edited_vs_batch.significant:
            up = triple.edited_vs_batch.direction is Direction.A_FAVORED
            markers["edited"].add(Marker.B_UP if up else Marker.B_DOWN)

    return {label: ReportCell(taus[label], frozenset(marks)) for label, marks in markers.items()}


@dataclasses.dataclass(frozen=True)
class RowReport:
    """One table row: a label, item count, and a cell per column."""

    label: str
    n_items: int
    columns: tuple[str, ...]
    cells: Mapping[str, ReportCell]
    conditions: Mapping[str, str]
    intervals: Mapping[str, BootstrapInterval]


@dataclasses.dataclass(frozen=True)
class BlockReport:
    name: str
    variant: str
    rows: tuple[RowReport, ...]


@dataclasses.dataclass(frozen=True)
class Report:
    """All blocks for one item subset ("all" when unstratified)."""

    domain: str
    seed: int
    n_resamples: int
    subset: str
    subset_size: int
    blocks: tuple[BlockReport, ...]


def render_csv(reports: Sequence[Report]) -> str:
    """Machine-readable cells, one line per (subset, block, row, column).

    Written through the csv module so marker strings containing commas
    (the merged arrow forms) stay inside one field.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["subset", "block", "variant", "row", "column", "condition", "n_items", "tau", "markers"]
    )
    for report in reports:
        for block in report.blocks:
            for row in block.rows:
                for column in row.columns:
                    cell = row.cells[column]
                    writer.writerow(
                        [
                            report.subset,
                            block.name,
                            block.variant,
                            row.label,
                            column,
                            row.conditions[column],
                            row.n_items,
                            repr(cell.tau),
                            render_markers(cell.markers),
                        ]
                    )
    return out.getvalue()


def render_json(reports: Sequence[Report]) -> str:
    """Sidecar with every bootstrap interval behind the markers."""
    payload = {
        "reports": [
            {
                "domain": report.domain,
                "subset": report.subset,
                "subset_size": report.subset_size,
                "seed": report.seed,
                "n_resamples": report.n_resamples,
                "blocks": [
                    {
                        "name": block.name,
                        "variant": block.variant,
                        "rows": [
                            {
                                "label": row.label,
                                "n_items": row.n_items,
                                "columns": list(row.columns),
                                "cells": {
                                    column: {
                                        "tau": row.cells[column].tau,
                                        "markers": render_markers(row.cells[column].markers),
                                        "condition": row.conditions[column],
                                    }
                                    for column in row.columns
                                },
                                "intervals": {
                                    name: interval.as_dict()
                                    for name, interval in row.intervals.items()
                                },
                            }
                            for row in block.rows
                        ],
                    }
                    for block in report.blocks
                ],
            }
            for report in reports
        ]
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def render_markdown(reports: Sequence[Report]) -> str:
    """Readable grid with the marker superscripts spelled out."""
    lines: list[str] = []
    for report in reports:
        lines.append(
            f"## Subset: {report.subset} ({report.subset_size} items, "
            f"domain {report.domain}, seed {report.seed}, "
            f"{report.n_resamples} resamples)"
        )
        lines.append("")
        for block in report.blocks:
            lines.append(f"### {block.name} [{block.variant}]")
            lines.append("")
            if not block.rows:
                lines.append("(no rows)")
                lines.append("")
                continue
            columns = block.rows[0].columns
            lines.append("| row | " + " | ".join(columns) + " | n |")
            lines.append("|" + "---|" * (len(columns) + 2))
            for row in block.rows:
                cells = " | ".join(row.cells[c].rendered() for c in columns)
                lines.append(f"| {row.label} | {cells} | {row.n_items} |")
            lines.append("")
    return "\n".join(lines) + "\n"
