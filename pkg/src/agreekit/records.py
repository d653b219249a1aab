"""Line-delimited JSON record files: the one on-disk rating format.

Every line is one RatingRecord plus its dataset domain, written as
schema_version, item_id, rater_id, rater_kind, domain, condition,
criterion, value, and (for autoraters with a distribution) answer_tokens.
The condition may be the object form or the compact slash string.
Serializing and re-parsing any valid record is field-identical.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import (
    DataError,
    DuplicateRecordError,
    ParseError,
    SchemaVersionMismatchError,
)
from .model import (
    OVERALL,
    CallStrategy,
    Decomposition,
    ExampleRegime,
    RaterKind,
    RatingRecord,
    RubricCondition,
    ScaleKind,
    ScoreScale,
    validate_record,
)
from .scoring import ScoreDistribution, parse_answer_tokens

SCHEMA_VERSION = 1


class Domain(enum.Enum):
    AES = "AES"
    IF = "IF"


@dataclasses.dataclass(frozen=True)
class ScaleMap:
    """Which scale governs a record: holistic and analytic halves of a dataset."""

    holistic: ScoreScale
    analytic: ScoreScale

    def for_criterion(self, criterion: str) -> ScoreScale:
        return self.holistic if criterion == OVERALL else self.analytic


@dataclasses.dataclass(frozen=True)
class Dataset:
    domain: Domain
    records: tuple[RatingRecord, ...]


def condition_to_object(condition: RubricCondition) -> dict:
    return {
        "decomposition": condition.decomposition.value,
        "examples": condition.examples.value,
        "call_strategy": condition.call_strategy.value,
        "edited": condition.edited,
    }


def _condition_from_object(obj: dict, line: Optional[int]) -> RubricCondition:
    try:
        decomposition = Decomposition(obj["decomposition"])
        examples = ExampleRegime(obj["examples"])
        call = CallStrategy(obj.get("call_strategy", CallStrategy.NOT_APPLICABLE.value))
        edited = bool(obj.get("edited", False))
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad condition object: {exc}", line) from exc
    try:
        return RubricCondition(decomposition, examples, call, edited)
    except ValueError as exc:
        raise SchemaVersionMismatchError(str(exc)) from exc


def parse_condition_field(value: Union[str, dict], line: Optional[int] = None) -> RubricCondition:
    """Accept either condition encoding.

    Unknown tokens are parse errors; recognizable tokens in a combination the
    condition type forbids are schema mismatches.
    """
    if isinstance(value, dict):
        return _condition_from_object(value, line)
    if isinstance(value, str):
        try:
            return RubricCondition.decode(value)
        except ValueError as exc:
            message = str(exc)
            if "unknown" in message or "empty" in message:
                raise ParseError(message, line) from exc
            raise SchemaVersionMismatchError(message) from exc
    raise ParseError(f"condition must be an object or string, got {type(value).__name__}", line)


def _render_token(score: int, scale: ScoreScale) -> str:
    if scale.kind is ScaleKind.BINARY_YES_NO:
        return "YES" if score == 1 else "NO"
    return str(score)


def record_to_dict(record: RatingRecord, domain: Domain, scales: ScaleMap) -> dict:
    out: dict = {
        "schema_version": SCHEMA_VERSION,
        "item_id": record.item_id,
        "rater_id": record.rater_id,
        "rater_kind": record.rater_kind.value,
        "domain": domain.value,
        "condition": condition_to_object(record.condition),
        "criterion": record.criterion,
        "value": record.value,
    }
    if record.distribution is not None:
        scale = scales.for_criterion(record.criterion)
        out["answer_tokens"] = [
            [_render_token(score, scale), logprob] for score, logprob in record.distribution.entries
        ]
    return out


def record_from_dict(obj: dict, scales: ScaleMap, line: Optional[int] = None) -> tuple[Domain, RatingRecord]:
    if not isinstance(obj, dict):
        raise ParseError(f"record must be a JSON object, got {type(obj).__name__}", line)
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatchError(
            f"schema_version {version!r} is not the supported version {SCHEMA_VERSION}"
        )
    try:
        domain = Domain(obj["domain"])
        rater_kind = RaterKind(obj["rater_kind"])
        item_id = str(obj["item_id"])
        rater_id = str(obj["rater_id"])
        criterion = str(obj["criterion"])
        value = float(obj["value"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad record field: {exc}", line) from exc
    condition = parse_condition_field(obj.get("condition"), line)
    scale = scales.for_criterion(criterion)
    distribution: Optional[ScoreDistribution] = None
    tokens = obj.get("answer_tokens")
    if tokens is not None:
        try:
            pairs = [(str(t), float(lp)) for t, lp in tokens]
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad answer_tokens: {exc}", line) from exc
        distribution = parse_answer_tokens(pairs, scale)
    try:
        record = RatingRecord(
            item_id=item_id,
            rater_id=rater_id,
            rater_kind=rater_kind,
            condition=condition,
            criterion=criterion,
            value=value,
            distribution=distribution,
        )
    except ValueError as exc:
        raise ParseError(str(exc), line) from exc
    validate_record(record, scale)
    return domain, record


def ingest(
    path: Union[Path, str],
    scales: ScaleMap,
    expected_domain: Optional[Domain] = None,
) -> Dataset:
    """Read and validate a record file.

    Every line must parse, validate against its governing scale, carry the
    same domain, and be unique on (item, rater, condition, criterion).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"record file not found: {path}")
    records: list[RatingRecord] = []
    seen: set[tuple[str, str, str, str]] = set()
    domain: Optional[Domain] = expected_domain
    with path.open(encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line_no) from exc
            line_domain, record = record_from_dict(obj, scales, line_no)
            if domain is None:
                domain = line_domain
            elif line_domain is not domain:
                raise ParseError(
                    f"domain {line_domain.value} conflicts with {domain.value}", line_no
                )
            if record.key in seen:
                raise DuplicateRecordError(
                    f"line {line_no}: duplicate record for {record.key}"
                )
            seen.add(record.key)
            records.append(record)
    if not records:
        raise DataError(f"record file is empty: {path}")
    assert domain is not None
    return Dataset(domain=domain, records=tuple(records))


def write_records(
    path: Union[Path, str],
    records: Iterable[RatingRecord],
    domain: Domain,
    scales: ScaleMap,
) -> int:
    """Write records as one JSON object per line. Returns the line count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record_to_dict(record, domain, scales), ensure_ascii=False))
            handle.write("\n")
            count += 1
    return count
