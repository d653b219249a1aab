"""Thin adapters from public dataset layouts into the canonical record file.

Both adapters only reshape human annotations; they never invent scores.
The essay-scoring adapter reads the tab-separated training file layout
(essay_id, essay_set, rater columns named rater<N>_domain1, plus optional
per-attribute columns). The instruction-following adapter reads a JSON
list of items carrying per-annotator holistic scores and per-question
yes/no answers.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Mapping, Union

from .errors import DataError, ParseError
from .model import (
    OVERALL,
    CallStrategy,
    Decomposition,
    ExampleRegime,
    RaterKind,
    RatingRecord,
    RubricCondition,
)
from .records import Domain, ScaleMap, write_records

#: Human raters scored with the dataset's own full rubrics.
HUMAN_HOLISTIC = RubricCondition(Decomposition.HOLISTIC, ExampleRegime.FULL)
HUMAN_ANALYTIC = RubricCondition(
    Decomposition.ANALYTIC, ExampleRegime.FULL, CallStrategy.NOT_APPLICABLE
)

_HOLISTIC_COLUMN = re.compile(r"rater(\w+)_domain1\Z")


def essay_rows_to_records(
    rows: list[dict],
    essay_set: str,
    attributes: Mapping[str, str],
) -> list[RatingRecord]:
    """Records from parsed TSV rows, filtered to one essay set.

    Holistic scores come from every rater<N>_domain1 column; analytic scores
    come from the given column -> criterion mapping under a single shared
    annotator id, matching the one-value-per-attribute layout.
    """
    records = []
    matched = False
    for row in rows:
        if row.get("essay_set") != essay_set:
            continue
        matched = True
        item_id = row.get("essay_id", "").strip()
        if not item_id:
            raise DataError("row without an essay_id")
        for column, text in row.items():
            if text is None or not text.strip():
                continue
            match = _HOLISTIC_COLUMN.fullmatch(column)
            if match:
                records.append(
                    RatingRecord(
                        item_id=item_id,
                        rater_id=f"rater{match.group(1)}",
                        rater_kind=RaterKind.HUMAN,
                        condition=HUMAN_HOLISTIC,
                        criterion=OVERALL,
                        value=float(text),
                    )
                )
            elif column in attributes:
                records.append(
                    RatingRecord(
                        item_id=item_id,
                        rater_id="attributes",
                        rater_kind=RaterKind.HUMAN,
                        condition=HUMAN_ANALYTIC,
                        criterion=attributes[column],
                        value=float(text),
                    )
                )
    if not matched:
        raise DataError(f"no rows for essay_set {essay_set!r}")
    if not records:
        raise DataError("no score columns matched; expected rater<N>_domain1 or attributes")
    return records


def convert_essays(
    tsv_path: Union[Path, str],
    out_path: Union[Path, str],
    essay_set: str,
    scales: ScaleMap,
    attributes: Mapping[str, str] | None = None,
) -> int:
    """Essay TSV to canonical records. Returns the record count."""
    tsv_path = Path(tsv_path)
    if not tsv_path.is_file():
        raise DataError(f"input file not found: {tsv_path}")
    with tsv_path.open(encoding="utf-8", errors="replace", newline="") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        if not reader.fieldnames or "essay_id" not in reader.fieldnames:
            raise ParseError("expected a tab-separated header with an essay_id column")
        try:
            rows = list(reader)
        except csv.Error as exc:
            raise ParseError(f"bad TSV: {exc}") from exc
    records = essay_rows_to_records(rows, essay_set, dict(attributes or {}))
    return write_records(out_path, records, Domain.AES, scales)


def instruction_items_to_records(items: list[dict]) -> list[RatingRecord]:
    """Records from instruction-following annotation objects.

    Each object carries item_id, holistic {annotator: score}, and questions
    {annotator: [0/1 per decomposed question]}. Question criteria are named
    q1..qk in order; every annotator must answer the same question count.
    """
    records = []
    for index, item in enumerate(items):
        where = f"item {index}"
        if not isinstance(item, dict) or "item_id" not in item:
            raise ParseError(f"{where}: expected an object with item_id")
        item_id = str(item["item_id"])
        for rater_id, score in (item.get("holistic") or {}).items():
            records.append(
                RatingRecord(
                    item_id=item_id,
                    rater_id=str(rater_id),
                    rater_kind=RaterKind.HUMAN,
                    condition=HUMAN_HOLISTIC,
                    criterion=OVERALL,
                    value=float(score),
                )
            )
        questions = item.get("questions") or {}
        counts = {len(answers) for answers in questions.values()}
        if len(counts) > 1:
            raise ParseError(f"{where}: annotators answered differing question counts {counts}")
        for rater_id, answers in questions.items():
            for question_index, answer in enumerate(answers, start=1):
                records.append(
                    RatingRecord(
                        item_id=item_id,
                        rater_id=str(rater_id),
                        rater_kind=RaterKind.HUMAN,
                        condition=HUMAN_ANALYTIC,
                        criterion=f"q{question_index}",
                        value=float(answer),
                    )
                )
    if not records:
        raise DataError("no annotations found in input")
    return records


def convert_instructions(
    json_path: Union[Path, str],
    out_path: Union[Path, str],
    scales: ScaleMap,
) -> int:
    """Instruction-following JSON to canonical records. Returns the record count."""
    json_path = Path(json_path)
    if not json_path.is_file():
        raise DataError(f"input file not found: {json_path}")
    try:
        items = json.loads(json_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(items, list):
        raise ParseError("input must be a JSON list of annotation objects")
    records = instruction_items_to_records(items)
    return write_records(out_path, records, Domain.IF, scales)
