"""Command-line entry points.

Subcommands: run (full experiment from a config), tau (rank agreement of
two score columns), bootstrap (significance of a tau difference), convert
(dataset adapters), prompts (inspect assembled prompts), and replay-check
(verify a response store). Exit codes: 0 success, 1 data error, 2 config
or usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .concordance import TauStatistic, tau_scalar
from .config import load_config
from .errors import AgreekitError, ConfigError, DataError
from .inference import Correction, bootstrap_tau_diff
from .model import RubricCondition, ScaleKind, ScoreScale
from .pipeline import run_experiment, write_report
from .promptkit import Example, RubricBundle, assemble_prompts
from .providers import ReplayStore, prompt_hash
from .records import ScaleMap

from . import convert as convert_mod

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2


def _read_columns(path: str, names: Sequence[str]) -> dict[str, list[float]]:
    file_path = Path(path)
    if not file_path.is_file():
        raise DataError(f"input file not found: {file_path}")
    with file_path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for name in names:
            if name not in header:
                raise DataError(f"column {name!r} not in header {header}")
        columns: dict[str, list[float]] = {name: [] for name in names}
        for line_no, row in enumerate(reader, start=2):
            for name in names:
                text = (row.get(name) or "").strip()
                if not text:
                    raise DataError(f"line {line_no}: empty value in column {name!r}")
                try:
                    columns[name].append(float(text))
                except ValueError:
                    raise DataError(
                        f"line {line_no}: column {name!r} has non-numeric value {text!r}"
                    ) from None
    return columns


def _parse_scale(text: str) -> ScoreScale:
    if text.strip().lower() == "binary":
        return ScoreScale(0, 1, ScaleKind.BINARY_YES_NO)
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ConfigError(f"scale must be MIN:MAX or 'binary', got {text!r}")
    try:
        return ScoreScale(int(lo), int(hi))
    except ValueError as exc:
        raise ConfigError(f"bad scale {text!r}: {exc}") from exc


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    if args.resamples is not None:
        config = dataclasses.replace(config, n_resamples=args.resamples)
    reports = run_experiment(config, workers=args.workers)
    paths = write_report(reports, args.out, config.output_format)
    for path in paths:
        print(path)
    return EXIT_OK


def _cmd_tau(args: argparse.Namespace) -> int:
    columns = _read_columns(args.csv, [args.x, args.y])
    result = tau_scalar(columns[args.x], columns[args.y])
    print(
        json.dumps(
            {
                "tau": result.tau,
                "concordant": result.concordant,
                "discordant": result.discordant,
                "ties_x": result.ties_x,
                "ties_y": result.ties_y,
                "ties_both": result.ties_both,
                "n_items": result.n_items,
            }
        )
    )
    return EXIT_OK


def _cmd_bootstrap(args: argparse.Namespace) -> int:
    columns = _read_columns(args.csv, [args.reference, args.a, args.b])
    reference = columns[args.reference]
    stat_a = TauStatistic.from_scores(columns[args.a], reference)
    stat_b = TauStatistic.from_scores(columns[args.b], reference)
    interval = bootstrap_tau_diff(
        len(reference),
        stat_a,
        stat_b,
        n_resamples=args.resamples,
        correction=Correction(args.correction),
        seed=args.seed,
    )
    print(json.dumps(interval.as_dict()))
    return EXIT_OK


def _cmd_convert_essays(args: argparse.Namespace) -> int:
    attributes = {}
    for spec in args.attribute or []:
        column, sep, criterion = spec.partition("=")
        if not sep or not column or not criterion:
            raise ConfigError(f"--attribute must be COLUMN=CRITERION, got {spec!r}")
        attributes[column] = criterion
    scales = ScaleMap(
        holistic=_parse_scale(args.holistic_scale), analytic=_parse_scale(args.analytic_scale)
    )
    count = convert_mod.convert_essays(args.input, args.out, args.essay_set, scales, attributes)
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def _cmd_convert_instructions(args: argparse.Namespace) -> int:
    scales = ScaleMap(
        holistic=_parse_scale(args.holistic_scale), analytic=_parse_scale(args.analytic_scale)
    )
    count = convert_mod.convert_instructions(args.input, args.out, scales)
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def _load_bundle(path: str) -> RubricBundle:
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"bundle file not found: {file_path}")
    try:
        obj = json.loads(file_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bundle is not valid JSON: {exc}") from exc
    try:
        criteria = tuple(obj["criteria"])
        rubrics = dict(obj["rubrics"])
        scale_obj = obj["scale"]
        scale = ScoreScale(
            int(scale_obj.get("min", 0)),
            int(scale_obj.get("max", 1)),
            ScaleKind(scale_obj.get("kind", "integer")),
        )
        examples = tuple(
            Example(
                text=str(example["text"]),
                scores={str(k): float(v) for k, v in example["scores"].items()},
                explanation=example.get("explanation"),
            )
            for example in obj.get("examples", [])
        )
        return RubricBundle(
            rubric_texts=rubrics,
            criterion_order=criteria,
            scale=scale,
            example_pool=examples,
            context_block=obj.get("context"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad bundle: {exc}") from exc


def _cmd_prompts(args: argparse.Namespace) -> int:
    condition = RubricCondition.decode(args.condition)
    bundle = _load_bundle(args.bundle)
    if args.item_file:
        item_path = Path(args.item_file)
        if not item_path.is_file():
            raise DataError(f"item file not found: {item_path}")
        item_text = item_path.read_text(encoding="utf-8")
    else:
        item_text = args.item
    prompts = assemble_prompts(condition, bundle, item_text)
    for index, prompt in enumerate(prompts, start=1):
        print(f"=== prompt {index}/{len(prompts)} ===")
        print(prompt)
    return EXIT_OK


def _cmd_replay_check(args: argparse.Namespace) -> int:
    store = ReplayStore(args.store)
    if not store.root.is_dir():
        raise DataError(f"store directory not found: {store.root}")
    problems = 0
    checked = 0
    for path in sorted(store.root.glob("*.json")):
        checked += 1
        digest = path.stem
        try:
            record = store.load(digest)
        except AgreekitError as exc:
            print(f"BAD  {path.name}: {exc}")
            problems += 1
            continue
        if prompt_hash(record["prompt_text"]) != digest:
            print(f"BAD  {path.name}: prompt_text does not hash to the file name")
            problems += 1
    print(f"checked {checked} stored responses, {problems} problems")
    if args.prompts:
        prompts_path = Path(args.prompts)
        if not prompts_path.is_file():
            raise DataError(f"prompts file not found: {prompts_path}")
        try:
            prompts = json.loads(prompts_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"prompts file is not valid JSON: {exc}") from exc
        if not isinstance(prompts, list):
            raise DataError("prompts file must be a JSON list of prompt strings")
        missing = store.missing([str(p) for p in prompts])
        for digest in missing:
            print(f"MISS {digest}")
        print(f"coverage: {len(prompts) - len(missing)}/{len(prompts)} prompts")
        problems += len(missing)
    return EXIT_DATA if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agreekit",
        description="Rank agreement between raters under rubric variants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment")
    run.add_argument("--config", required=True, help="experiment config JSON")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--resamples", type=int, default=None, help="override resample count")
    run.add_argument("--workers", type=int, default=1, help="concurrent row computations")
    run.set_defaults(func=_cmd_run)

    tau = sub.add_parser("tau", help="tie-aware rank agreement of two CSV columns")
    tau.add_argument("--csv", required=True)
    tau.add_argument("--x", required=True, help="first column name")
    tau.add_argument("--y", required=True, help="second column name")
    tau.set_defaults(func=_cmd_tau)

    boot = sub.add_parser(
        "bootstrap", help="significance of tau(a, reference) minus tau(b, reference)"
    )
    boot.add_argument("--csv", required=True)
    boot.add_argument("--reference", required=True, help="shared reference column")
    boot.add_argument("--a", required=True)
    boot.add_argument("--b", required=True)
    boot.add_argument("--resamples", type=int, default=1000)
    boot.add_argument("--seed", type=int, required=True)
    boot.add_argument(
        "--correction", choices=[c.value for c in Correction], default=Correction.NONE95.value
    )
    boot.set_defaults(func=_cmd_bootstrap)

    convert = sub.add_parser("convert", help="dataset adapters")
    convert_sub = convert.add_subparsers(dest="adapter", required=True)

    essays = convert_sub.add_parser("essays", help="essay-scoring TSV to records")
    essays.add_argument("--input", required=True)
    essays.add_argument("--out", required=True)
    essays.add_argument("--essay-set", required=True)
    essays.add_argument("--holistic-scale", default="1:6", help="MIN:MAX")
    essays.add_argument("--analytic-scale", default="1:6", help="MIN:MAX or 'binary'")
    essays.add_argument(
        "--attribute",
        action="append",
        metavar="COLUMN=CRITERION",
        help="map an attribute column to a criterion (repeatable)",
    )
    essays.set_defaults(func=_cmd_convert_essays)

    instructions = convert_sub.add_parser(
        "instructions", help="instruction-following JSON to records"
    )
    instructions.add_argument("--input", required=True)
    instructions.add_argument("--out", required=True)
    instructions.add_argument("--holistic-scale", default="1:5", help="MIN:MAX")
    instructions.add_argument("--analytic-scale", default="binary", help="MIN:MAX or 'binary'")
    instructions.set_defaults(func=_cmd_convert_instructions)

    prompts = sub.add_parser("prompts", help="print assembled prompts for one item")
    prompts.add_argument("--condition", required=True, help="e.g. analytic/separate/3ex/edited")
    prompts.add_argument("--bundle", required=True, help="rubric bundle JSON")
    group = prompts.add_mutually_exclusive_group(required=True)
    group.add_argument("--item", help="item text inline")
    group.add_argument("--item-file", help="read item text from a file")
    prompts.set_defaults(func=_cmd_prompts)

    replay = sub.add_parser("replay-check", help="verify a replay store")
    replay.add_argument("--store", required=True, help="store directory")
    replay.add_argument("--prompts", help="JSON list of prompts to check coverage for")
    replay.set_defaults(func=_cmd_replay_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AgreekitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
