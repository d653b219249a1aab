"""End-to-end experiment runs: records in, significance-annotated tables out.

The pipeline ingests a record file, consolidates raters per score family,
derives rank codes per comparison block (scalar scores, Pareto dominance
over criterion vectors, or instruction-following ratios), bootstraps the
configured pairs and triples, and assembles Report objects. Every cell's
bootstrap seed is derived from (subset, block, row) counters, so results
are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .aggregation import ConsolidationPolicy, consolidate, follow_ratio, pareto_compare
from .concordance import TauStatistic, preference_codes, scalar_codes
from .config import (
    Aggregation,
    ColumnGroup,
    ComparisonBlock,
    ExperimentConfig,
    GroupKind,
    RowsKind,
)
from .errors import ConfigError, DataError
from .inference import Correction, TripleResult, bootstrap_tau_diff, compare_triple
from .model import (
    OVERALL,
    Decomposition,
    RaterKind,
    RatingRecord,
    RubricCondition,
    ScoreFamily,
    ScoreScale,
)
from .records import Dataset, ingest
from .report import (
    BlockReport,
    Report,
    RowReport,
    annotate_significance,
    render_csv,
    render_json,
    render_markdown,
)
from .rng import derive_seed
from .stratify import AgreementLevel, levels_for, partition_by_agreement

#: criterion -> item -> rater -> value, for one (family, condition) cell of the data
_CellIndex = dict[str, dict[str, dict[str, float]]]


def anchor_holistic_score(ratio: float, scale: ScoreScale = ScoreScale(1, 5)) -> float:
    """Holistic anchor score for an instruction-following ratio.

    Linear over the holistic scale: ratios 1.0, 0.5, and 0.0 land on 5, 3,
    and 1 with the default 1..5 scale.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"ratio must lie in [0, 1], got {ratio}")
    return scale.min_score + ratio * (scale.max_score - scale.min_score)


class _DataIndex:
    """Dataset records grouped by (family, condition), then criterion and item."""

    def __init__(self, records: Sequence[RatingRecord]):
        self.cells: dict[tuple[str, str], _CellIndex] = {}
        for record in records:
            key = (record.family.encode(), record.condition.encode())
            cell = self.cells.setdefault(key, {})
            per_item = cell.setdefault(record.criterion, {})
            per_item.setdefault(record.item_id, {})[record.rater_id] = record.value

    def cell(self, family: ScoreFamily, condition: RubricCondition) -> _CellIndex:
        key = (family.encode(), condition.encode())
        try:
            return self.cells[key]
        except KeyError:
            raise ConfigError(
                f"dataset has no records for family {key[0]} under condition {key[1]}"
            ) from None

    def has(self, family: ScoreFamily, condition: RubricCondition) -> bool:
        return (family.encode(), condition.encode()) in self.cells


def _consolidated(
    cell: _CellIndex, criterion: str, policy: ConsolidationPolicy
) -> dict[str, float]:
    per_item = cell.get(criterion, {})
    return {item: consolidate(raters, policy) for item, raters in per_item.items()}


def _side_values(
    index: _DataIndex,
    family: ScoreFamily,
    condition: RubricCondition,
    aggregation: Aggregation,
    criterion: str,
    criteria: tuple[str, ...],
    policy: ConsolidationPolicy,
) -> dict[str, object]:
    """Per-item value for one side: a float, or a criterion vector for Pareto."""
    cell = index.cell(family, condition)
    if aggregation is Aggregation.SCALAR:
        return dict(_consolidated(cell, criterion, policy))
    per_criterion = {c: _consolidated(cell, c, policy) for c in criteria}
    complete = set.intersection(*(set(v) for v in per_criterion.values())) if criteria else set()
    if aggregation is Aggregation.PARETO:
        return {
            item: {c: per_criterion[c][item] for c in criteria} for item in complete
        }
    # ratio: exact follow ratio for binary answers, mean for weighted scores
    out: dict[str, object] = {}
    for item in complete:
        values = [per_criterion[c][item] for c in criteria]
        if all(v in (0.0, 1.0) for v in values):
            out[item] = follow_ratio([int(v) for v in values])
        else:
            out[item] = sum(values) / len(values)
    return out


def _codes_for(values: dict[str, object], items: Sequence[str], aggregation: Aggregation):
    if aggregation is Aggregation.PARETO:
        vectors = [values[item] for item in items]
        return preference_codes(
            list(range(len(items))), lambda i, j: pareto_compare(vectors[i], vectors[j])
        )
    return scalar_codes([float(values[item]) for item in items])


def _compute_row(
    index: _DataIndex,
    config: ExperimentConfig,
    block: ComparisonBlock,
    row_label: str,
    criterion: str,
    subset_items: Optional[set[str]],
    cell_seed: int,
) -> RowReport:
    policy_a = config.policy_for(block.family_a)
    policy_b = config.policy_for(block.family_b)
    side_a = _side_values(
        index,
        block.family_a,
        block.side_a.condition,
        block.side_a.aggregation,
        criterion,
        config.criteria,
        policy_a,
    )
    per_column = {
        label: _side_values(
            index,
            block.family_b,
            condition,
            block.side_b_aggregation,
            criterion,
            config.criteria,
            policy_b,
        )
        for label, condition in zip(block.columns.labels, block.columns.conditions)
    }

    shared = set(side_a)
    for values in per_column.values():
        shared &= set(values)
    if subset_items is not None:
        shared &= subset_items
    items = sorted(shared)
    if len(items) < 2:
        raise DataError(
            f"block {block.name!r} row {row_label!r} has {len(items)} shared items; "
            f"need at least 2"
        )

    codes_a = _codes_for(side_a, items, block.side_a.aggregation)
    stats = {
        label: TauStatistic(codes_a, _codes_for(per_column[label], items, block.side_b_aggregation))
        for label in block.columns.labels
    }
    taus = {label: stat.tau_of() for label, stat in stats.items()}

    pair_labels: Optional[tuple[str, str]] = None
    pair = None
    triple: Optional[TripleResult] = None
    intervals: dict[str, object] = {}
    if block.columns.kind is GroupKind.PAIR:
        first, second = block.columns.labels
        pair_labels = (first, second)
        pair = bootstrap_tau_diff(
            len(items),
            stats[first],
            stats[second],
            n_resamples=config.n_resamples,
            correction=Correction.NONE95,
            seed=cell_seed,
        )
        intervals["pair"] = pair
    elif block.columns.kind is GroupKind.TRIPLE:
        triple = compare_triple(
            len(items),
            {label: stats[label] for label in block.columns.labels},
            n_resamples=config.n_resamples,
            seed=cell_seed,
        )
        intervals["edited_vs_separate"] = triple.edited_vs_separate
        intervals["edited_vs_batch"] = triple.edited_vs_batch
        intervals["separate_vs_batch"] = triple.separate_vs_batch

    cells = annotate_significance(taus, pair_labels, pair, triple)
    conditions = {
        label: condition.encode()
        for label, condition in zip(block.columns.labels, block.columns.conditions)
    }
    return RowReport(
        label=row_label,
        n_items=len(items),
        columns=block.columns.labels,
        cells=cells,
        conditions=conditions,
        intervals=intervals,
    )


def _block_rows(block: ComparisonBlock, criteria: tuple[str, ...]) -> list[tuple[str, str]]:
    """(row label, criterion) pairs driving each row's scalar lookups."""
    if block.rows is RowsKind.PER_CRITERION:
        return [(criterion, criterion) for criterion in criteria]
    # single-row blocks only use the criterion for scalar (holistic) sides
    return [(block.row_label, OVERALL)]


def _check_conditions(index: _DataIndex, config: ExperimentConfig) -> None:
    for block in config.comparisons:
        if not index.has(block.family_a, block.side_a.condition):
            raise ConfigError(
                f"block {block.name!r} references condition "
                f"{block.side_a.condition.encode()!r} with no {block.family_a.encode()} records"
            )
        for condition in block.columns.conditions:
            if not index.has(block.family_b, condition):
                raise ConfigError(
                    f"block {block.name!r} references condition {condition.encode()!r} "
                    f"with no {block.family_b.encode()} records"
                )


def _agreement_subsets(
    dataset: Dataset, index: _DataIndex
) -> list[tuple[str, set[str]]]:
    """Partition items by human holistic agreement, in level order."""
    conditions = {
        record.condition.encode()
        for record in dataset.records
        if record.rater_kind is RaterKind.HUMAN
        and record.condition.decomposition is Decomposition.HOLISTIC
    }
    if len(conditions) != 1:
        raise ConfigError(
            f"stratification needs exactly one human holistic condition, found "
            f"{sorted(conditions) or 'none'}"
        )
    cell = index.cell(
        ScoreFamily(RaterKind.HUMAN, Decomposition.HOLISTIC),
        RubricCondition.decode(next(iter(conditions))),
    )
    per_item = cell.get(OVERALL, {})
    partition = partition_by_agreement(per_item)
    rater_count = len(next(iter(per_item.values())))
    return [
        (level.value, set(partition[level])) for level in levels_for(rater_count)
    ]


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[Report]:
    """Compute every configured table.

    Returns one Report per item subset: a single "all" subset normally, or
    one per agreement level when stratification is on. Rows are computed
    concurrently when workers exceeds 1; output is identical either way.
    """
    if workers < 1:
        raise ConfigError(f"workers must be at least 1, got {workers}")
    dataset = ingest(config.dataset, config.scales, expected_domain=config.domain)
    index = _DataIndex(dataset.records)
    _check_conditions(index, config)

    if config.stratify:
        subsets = _agreement_subsets(dataset, index)
    else:
        subsets = [("all", {record.item_id for record in dataset.records})]

    tasks = []
    for subset_index, (subset_name, subset_items) in enumerate(subsets):
        for block_index, block in enumerate(config.comparisons):
            for row_index, (row_label, criterion) in enumerate(
                _block_rows(block, config.criteria)
            ):
                cell_seed = derive_seed(config.seed, subset_index, block_index, row_index)
                tasks.append(
                    (
                        subset_index,
                        block_index,
                        row_index,
                        block,
                        row_label,
                        criterion,
                        subset_items,
                        cell_seed,
                    )
                )

    def run_task(task) -> tuple[tuple[int, int, int], RowReport]:
        subset_index, block_index, row_index, block, row_label, criterion, items, seed = task
        row = _compute_row(index, config, block, row_label, criterion, items, seed)
        return (subset_index, block_index, row_index), row

    results: dict[tuple[int, int, int], RowReport] = {}
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for key, row in pool.map(run_task, tasks):
                results[key] = row
    else:
        for task in tasks:
            key, row = run_task(task)
            results[key] = row

    reports = []
    for subset_index, (subset_name, subset_items) in enumerate(subsets):
        blocks = []
        for block_index, block in enumerate(config.comparisons):
            rows = tuple(
                results[(subset_index, block_index, row_index)]
                for row_index in range(len(_block_rows(block, config.criteria)))
            )
            blocks.append(BlockReport(name=block.name, variant=block.variant.value, rows=rows))
        reports.append(
            Report(
                domain=config.domain.value,
                seed=config.seed,
                n_resamples=config.n_resamples,
                subset=subset_name,
                subset_size=len(subset_items),
                blocks=tuple(blocks),
            )
        )
    return reports


def write_report(
    reports: Sequence[Report], out_dir: Union[Path, str], output_format: str = "both"
) -> list[Path]:
    """Render and write the report files. Nothing is written until every
    format has rendered, so a failed run leaves no partial output."""
    out_dir = Path(out_dir)
    rendered: list[tuple[str, str]] = []
    if output_format in ("csv", "both"):
        rendered.append(("report.csv", render_csv(reports)))
        rendered.append(("report.json", render_json(reports)))
    if output_format in ("markdown", "both"):
        rendered.append(("report.md", render_markdown(reports)))
    if not rendered:
        raise ConfigError(f"unknown output format {output_format!r}")
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in rendered:
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
