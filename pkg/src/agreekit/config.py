"""Experiment configuration: a JSON file describing one report run.

A config names the dataset, the ordered criterion manifest, the scales,
per-family consolidation policies, and a list of comparison blocks. Each
block pins one side to a fixed condition and varies the other side across
a column group: a significance pair, a separate/batch/edited triple, or a
single column with no test.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from pathlib import Path
from typing import Mapping, Union

from .aggregation import AVERAGE_ALL, ConsolidationPolicy
from .errors import ConfigError
from .model import (
    CallStrategy,
    ComparisonKind,
    ComparisonVariant,
    Decomposition,
    RaterKind,
    RubricCondition,
    ScaleKind,
    ScoreFamily,
    ScoreScale,
)
from .records import Domain, ScaleMap

TRIPLE_ROLES = ("separate", "batch", "edited")


class Aggregation(enum.Enum):
    SCALAR = "scalar"
    PARETO = "pareto"
    RATIO = "ratio"


class RowsKind(enum.Enum):
    SINGLE = "single"
    PER_CRITERION = "per_criterion"


class GroupKind(enum.Enum):
    PAIR = "pair"
    TRIPLE = "triple"
    SINGLE = "single"


@dataclasses.dataclass(frozen=True)
class SideSpec:
    rater_kind: RaterKind
    condition: RubricCondition
    aggregation: Aggregation


@dataclasses.dataclass(frozen=True)
class ColumnGroup:
    """The varying side's columns: labels paired with conditions, in order."""

    kind: GroupKind
    labels: tuple[str, ...]
    conditions: tuple[RubricCondition, ...]

    def __post_init__(self) -> None:
        expected = {GroupKind.PAIR: 2, GroupKind.TRIPLE: 3, GroupKind.SINGLE: 1}[self.kind]
        if len(self.labels) != expected or len(self.conditions) != expected:
            raise ConfigError(
                f"{self.kind.value} column group needs exactly {expected} columns, "
                f"got {len(self.conditions)}"
            )
        decompositions = {c.decomposition for c in self.conditions}
        if len(decompositions) != 1:
            raise ConfigError("all columns in a group must share one decomposition")
        if self.kind is GroupKind.TRIPLE:
            if self.labels != TRIPLE_ROLES:
                raise ConfigError(
                    f"triple columns must be keyed {TRIPLE_ROLES} in that order, "
                    f"got {self.labels}"
                )
            separate, batch, edited = self.conditions
            if separate.call_strategy is not CallStrategy.SEPARATE or separate.edited:
                raise ConfigError(f"separate column got condition {separate.encode()!r}")
            if batch.call_strategy is not CallStrategy.BATCH:
                raise ConfigError(f"batch column got condition {batch.encode()!r}")
            if not edited.edited:
                raise ConfigError(f"edited column got condition {edited.encode()!r}")

    @property
    def decomposition(self) -> Decomposition:
        return self.conditions[0].decomposition


@dataclasses.dataclass(frozen=True)
class ComparisonBlock:
    name: str
    variant: ComparisonVariant
    rows: RowsKind
    row_label: str
    side_a: SideSpec
    side_b_rater: RaterKind
    side_b_aggregation: Aggregation
    columns: ColumnGroup

    def __post_init__(self) -> None:
        family_a = ScoreFamily(self.side_a.rater_kind, self.side_a.condition.decomposition)
        family_b = ScoreFamily(self.side_b_rater, self.columns.decomposition)
        try:
            ComparisonKind(self.variant, family_a, family_b)
        except ValueError as exc:
            raise ConfigError(f"block {self.name!r}: {exc}") from exc
        for side_name, decomposition, aggregation in (
            ("side_a", self.side_a.condition.decomposition, self.side_a.aggregation),
            ("side_b", self.columns.decomposition, self.side_b_aggregation),
        ):
            if self.rows is RowsKind.PER_CRITERION:
                if decomposition is not Decomposition.ANALYTIC:
                    raise ConfigError(
                        f"block {self.name!r}: per-criterion rows need analytic {side_name}"
                    )
                if aggregation is not Aggregation.SCALAR:
                    raise ConfigError(
                        f"block {self.name!r}: per-criterion rows need scalar aggregation"
                    )
            else:
                if aggregation is Aggregation.SCALAR and decomposition is not Decomposition.HOLISTIC:
                    raise ConfigError(
                        f"block {self.name!r}: scalar {side_name} in a single-row block "
                        f"must be holistic; use pareto or ratio for analytic sides"
                    )
                if aggregation is not Aggregation.SCALAR and decomposition is Decomposition.HOLISTIC:
                    raise ConfigError(
                        f"block {self.name!r}: {aggregation.value} aggregation needs an "
                        f"analytic {side_name}"
                    )

    @property
    def family_a(self) -> ScoreFamily:
        return ScoreFamily(self.side_a.rater_kind, self.side_a.condition.decomposition)

    @property
    def family_b(self) -> ScoreFamily:
        return ScoreFamily(self.side_b_rater, self.columns.decomposition)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    dataset: Path
    domain: Domain
    criteria: tuple[str, ...]
    scales: ScaleMap
    consolidation: Mapping[str, ConsolidationPolicy]
    comparisons: tuple[ComparisonBlock, ...]
    n_resamples: int
    seed: int
    stratify: bool
    output_format: str

    def policy_for(self, family: ScoreFamily) -> ConsolidationPolicy:
        return self.consolidation.get(family.encode(), AVERAGE_ALL)


def _parse_scale(obj: object, where: str) -> ScoreScale:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: scale must be an object")
    kind_text = obj.get("kind", "integer")
    try:
        kind = ScaleKind(kind_text)
    except ValueError:
        raise ConfigError(f"{where}: unknown scale kind {kind_text!r}") from None
    if kind is ScaleKind.BINARY_YES_NO:
        lo, hi = obj.get("min", 0), obj.get("max", 1)
    else:
        try:
            lo, hi = obj["min"], obj["max"]
        except KeyError as exc:
            raise ConfigError(f"{where}: integer scale needs min and max") from exc
    try:
        return ScoreScale(int(lo), int(hi), kind)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_condition(text: object, where: str) -> RubricCondition:
    if not isinstance(text, str):
        raise ConfigError(f"{where}: condition must be a compact string")
    try:
        return RubricCondition.decode(text)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_enum(cls: type, value: object, where: str):
    try:
        return cls(value)
    except ValueError:
        choices = [member.value for member in cls]
        raise ConfigError(f"{where}: expected one of {choices}, got {value!r}") from None


def _parse_block(obj: dict, index: int) -> ComparisonBlock:
    where = f"comparisons[{index}]"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: must be an object")
    name = obj.get("name", f"block{index}")
    variant = _parse_enum(ComparisonVariant, obj.get("variant"), f"{where}.variant")
    rows = _parse_enum(RowsKind, obj.get("rows", "single"), f"{where}.rows")

    side_a_obj = obj.get("side_a")
    if not isinstance(side_a_obj, dict):
        raise ConfigError(f"{where}.side_a: must be an object")
    side_a = SideSpec(
        rater_kind=_parse_enum(
            RaterKind, side_a_obj.get("rater_kind"), f"{where}.side_a.rater_kind"
        ),
        condition=_parse_condition(side_a_obj.get("condition"), f"{where}.side_a.condition"),
        aggregation=_parse_enum(
            Aggregation, side_a_obj.get("aggregation", "scalar"), f"{where}.side_a.aggregation"
        ),
    )

    side_b_obj = obj.get("side_b")
    if not isinstance(side_b_obj, dict):
        raise ConfigError(f"{where}.side_b: must be an object")
    columns_obj = side_b_obj.get("columns")
    if not isinstance(columns_obj, dict):
        raise ConfigError(f"{where}.side_b.columns: must be an object")
    group_kind = _parse_enum(
        GroupKind, columns_obj.get("kind"), f"{where}.side_b.columns.kind"
    )
    conditions_obj = columns_obj.get("conditions")
    if not isinstance(conditions_obj, dict) or not conditions_obj:
        raise ConfigError(f"{where}.side_b.columns.conditions: must map labels to conditions")
    labels = tuple(conditions_obj)
    if group_kind is GroupKind.TRIPLE:
        missing = set(TRIPLE_ROLES) - set(labels)
        if missing:
            raise ConfigError(
                f"{where}.side_b.columns: triple needs conditions for {sorted(missing)}"
            )
        labels = TRIPLE_ROLES
    conditions = tuple(
        _parse_condition(conditions_obj[label], f"{where}.side_b.columns.conditions[{label}]")
        for label in labels
    )
    try:
        columns = ColumnGroup(group_kind, labels, conditions)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None

    try:
        return ComparisonBlock(
            name=str(name),
            variant=variant,
            rows=rows,
            row_label=str(obj.get("row_label", "OVERALL")),
            side_a=side_a,
            side_b_rater=_parse_enum(
                RaterKind, side_b_obj.get("rater_kind"), f"{where}.side_b.rater_kind"
            ),
            side_b_aggregation=_parse_enum(
                Aggregation,
                side_b_obj.get("aggregation", "scalar"),
                f"{where}.side_b.aggregation",
            ),
            columns=columns,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def config_from_dict(obj: dict, base_dir: Union[Path, str, None] = None) -> ExperimentConfig:
    """Validate a parsed JSON object into an ExperimentConfig.

    Relative dataset paths resolve against base_dir (the config file's
    directory when loaded from disk).
    """
    if not isinstance(obj, dict):
        raise ConfigError("config root must be a JSON object")
    for field in ("dataset", "domain", "criteria", "scales", "comparisons", "seed"):
        if field not in obj:
            raise ConfigError(f"config is missing required field {field!r}")

    dataset = Path(obj["dataset"])
    if base_dir is not None and not dataset.is_absolute():
        dataset = Path(base_dir) / dataset
    domain = _parse_enum(Domain, obj["domain"], "domain")

    criteria_obj = obj["criteria"]
    if (
        not isinstance(criteria_obj, list)
        or not criteria_obj
        or not all(isinstance(c, str) and c for c in criteria_obj)
    ):
        raise ConfigError("criteria must be a nonempty list of names")
    if len(set(criteria_obj)) != len(criteria_obj):
        raise ConfigError("criteria contains duplicates")
    criteria = tuple(criteria_obj)

    scales_obj = obj["scales"]
    if not isinstance(scales_obj, dict):
        raise ConfigError("scales must be an object with holistic and analytic entries")
    scales = ScaleMap(
        holistic=_parse_scale(scales_obj.get("holistic"), "scales.holistic"),
        analytic=_parse_scale(scales_obj.get("analytic"), "scales.analytic"),
    )

    consolidation: dict[str, ConsolidationPolicy] = {}
    for family_text, policy_text in obj.get("consolidation", {}).items():
        try:
            ScoreFamily.decode(family_text)
        except ValueError:
            raise ConfigError(f"consolidation: unknown score family {family_text!r}") from None
        try:
            consolidation[family_text] = ConsolidationPolicy.decode(str(policy_text))
        except ValueError as exc:
            raise ConfigError(f"consolidation[{family_text}]: {exc}") from exc

    comparisons_obj = obj["comparisons"]
    if not isinstance(comparisons_obj, list) or not comparisons_obj:
        raise ConfigError("comparisons must be a nonempty list")
    comparisons = tuple(_parse_block(block, i) for i, block in enumerate(comparisons_obj))

    seed = obj["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    n_resamples = obj.get("n_resamples", 1000)
    if not isinstance(n_resamples, int) or isinstance(n_resamples, bool) or n_resamples < 1:
        raise ConfigError(f"n_resamples must be a positive integer, got {n_resamples!r}")
    stratify = obj.get("stratify", False)
    if not isinstance(stratify, bool):
        raise ConfigError("stratify must be true or false")
    output_format = obj.get("output_format", "both")
    if output_format not in ("csv", "markdown", "both"):
        raise ConfigError(f"output_format must be csv, markdown, or both, got {output_format!r}")

    per_criterion_needed = any(b.rows is RowsKind.PER_CRITERION for b in comparisons)
    if per_criterion_needed and not criteria:
        raise ConfigError("per-criterion blocks need a criterion manifest")

    return ExperimentConfig(
        dataset=dataset,
        domain=domain,
        criteria=criteria,
        scales=scales,
        consolidation=consolidation,
        comparisons=comparisons,
        n_resamples=n_resamples,
        seed=seed,
        stratify=stratify,
        output_format=output_format,
    )


def load_config(path: Union[Path, str]) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(obj, base_dir=path.parent)
