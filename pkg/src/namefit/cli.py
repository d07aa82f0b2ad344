"""Command-line front end: wires corpora, scenario configs, and analyses
into reproducible runs with machine-readable outputs.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
All randomness flows from the single top-level --seed flag.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__, binning, inference, intervals, rare_names
from .corpus import (
    DatePolicy,
    DateWindow,
    Gender,
    OccurrenceRecord,
    Region,
    build_frequency_distribution,
    build_origin_distribution,
    distribution_rows,
    filter_records,
    generate_uniform_sample,
    load_corpus,
    read_distribution_csv,
)
from .distributions import RandomSource
from .errors import DataError, NumericError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

# Namespaces under the root random source, so corpus draws and figure
# bootstraps never share a child stream.
_RNG_CORPORA = 0
_RNG_FIGURES = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _float_list(raw: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {raw!r}")


def _int_list(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="namefit", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="root random seed (u64)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format for analysis results")
    parser.add_argument("--alpha", type=float, default=0.05, help="base significance level")
    parser.add_argument("--bins", type=int, default=6, help="default bin count")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a corpus file against the schema")
    p.add_argument("corpus", help="occurrence corpus CSV")

    p = sub.add_parser("distribution", help="build and export a distribution from a corpus")
    p.add_argument("corpus")
    p.add_argument("--variable", choices=("frequency", "origin"), default="frequency")
    p.add_argument("--merge-semitic", action="store_true")
    p.add_argument("--window", type=int, nargs=2, metavar=("START", "END"))
    p.add_argument("--policy", choices=("inclusive", "exclusive"), default="inclusive")
    p.add_argument("--gender", choices=[g.value for g in Gender])
    p.add_argument("--region", choices=[r.value for r in Region])
    p.add_argument("--include-fictitious", action="store_true")
    p.add_argument("--include-nicknames", action="store_true")
    p.add_argument("--exclude", action="append", default=[], metavar="CATEGORY")
    p.add_argument("-o", "--output", help="output path (default: stdout)")

    p = sub.add_parser("bins", help="compute equal-frequency bins for a reference")
    p.add_argument("--distribution", required=True, help="reference name,count CSV")
    p.add_argument("-o", "--output")

    p = sub.add_parser("gof", help="goodness-of-fit test on explicit counts")
    p.add_argument("--observed", type=_int_list, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--uniform", type=int, metavar="K",
                       help="uniform reference over K cells")
    group.add_argument("--probs", type=_float_list, help="reference probabilities")

    p = sub.add_parser("independence", help="2 x K chi-square test of independence")
    p.add_argument("--row", type=_int_list, action="append", required=True,
                   help="table row (give exactly twice)")

    p = sub.add_parser("power", help="power against a specific alternative")
    p.add_argument("--null", required=True,
                   help="'uK' for uniform over K cells, or comma-separated probabilities")
    p.add_argument("--alt", type=_float_list, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("ci", help="Wald proportion confidence interval")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=float, default=0.95)

    p = sub.add_parser("bootstrap-ci", help="bootstrap intervals for uniform draws")
    p.add_argument("--distribution", required=True, help="reference name,count CSV")
    p.add_argument("--draw-size", type=int, required=True)
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("--level", type=float, default=0.95)

    p = sub.add_parser("rare", help="rare-name tail probabilities")
    p.add_argument("--test", help="test distribution name,count CSV")
    p.add_argument("--reference", help="reference distribution name,count CSV")
    p.add_argument("--definition", choices=[d.value for d in rare_names.RareDefinition],
                   help="required with --test/--reference")
    p.add_argument("--pool", type=int, help="pool occurrences N (explicit mode)")
    p.add_argument("--rare-occ", type=int, help="rare occurrences K (explicit mode)")
    p.add_argument("--n", type=int, help="draw size (explicit mode)")
    p.add_argument("--k", type=int, help="observed rare count (explicit mode)")
    p.add_argument("--k-values", type=_int_list, help="sensitivity across rare counts")
    p.add_argument("--table", action="store_true", help="emit the full tail table")

    p = sub.add_parser("suite", help="run a declarative scenario suite")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", required=True)

    p = sub.add_parser("figures", help="emit figure datasets from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", required=True)

    return parser


def _emit(args, payload: dict, csv_header: Sequence[str], csv_rows: Sequence[Sequence]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)


def cmd_validate(args) -> int:
    result = load_corpus(args.corpus)
    print(f"{args.corpus}: {len(result.records)} records, {len(result.rejections)} rejected")
    for rejection in result.rejections:
        print(f"row {rejection.row}: {rejection.reason}")
    return EXIT_OK if result.clean else EXIT_DATA


@dataclass(frozen=True)
class _Filters:
    window: DateWindow | None = None
    gender: Gender | None = None
    region: Region | None = None
    include_fictitious: bool = False
    include_nicknames: bool = False
    exclusions: frozenset[str] = frozenset()

    def apply(self, records: Sequence[OccurrenceRecord]) -> list[OccurrenceRecord]:
        window = self.window or DateWindow(-(10 ** 9), 10 ** 9, DatePolicy.INCLUSIVE)
        return filter_records(
            records,
            window,
            gender=self.gender,
            region=self.region,
            include_fictitious=self.include_fictitious,
            include_nicknames=self.include_nicknames,
            exclusions=self.exclusions,
        )


def _load_clean_corpus(path: str | Path) -> list[OccurrenceRecord]:
    result = load_corpus(path)
    if not result.clean:
        details = "; ".join(f"row {r.row}: {r.reason}" for r in result.rejections[:5])
        raise DataError(
            f"{path}: {len(result.rejections)} rejected rows ({details}"
            + ("; ..." if len(result.rejections) > 5 else "") + ")"
        )
    return list(result.records)


def cmd_distribution(args) -> int:
    records = _load_clean_corpus(args.corpus)
    filters = _Filters(
        window=DateWindow(*args.window, DatePolicy(args.policy)) if args.window else None,
        gender=Gender(args.gender) if args.gender else None,
        region=Region(args.region) if args.region else None,
        include_fictitious=args.include_fictitious,
        include_nicknames=args.include_nicknames,
        exclusions=frozenset(args.exclude),
    )
    records = filters.apply(records)
    if args.variable == "origin":
        counts = build_origin_distribution(records, args.merge_semitic).counts
    else:
        counts = build_frequency_distribution(records).counts
    rows = distribution_rows(counts)
    if args.format == "json":
        text = json.dumps([{"name": n, "count": c} for n, c in rows], indent=2)
    else:
        lines = ["name,count"] + [f"{n},{c}" for n, c in rows]
        text = "\n".join(lines)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_bins(args) -> int:
    reference = read_distribution_csv(args.distribution)
    spec = binning.compute_bins(binning.profile(reference), args.bins)
    if args.format == "json" or not args.output:
        text = json.dumps(spec.to_json_dict(), indent=2)
    else:
        lines = ["bin,lo,hi,label,reference_mass"] + [
            f"{i},{b.lo},{'' if b.hi is None else b.hi},{b.label},{b.reference_mass}"
            for i, b in enumerate(spec.bins)
        ]
        text = "\n".join(lines)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def _gof_payload(result: inference.GofResult) -> dict:
    return {
        "statistic": result.statistic,
        "df": result.df,
        "p_value": result.p_value,
        "bins_used": result.bins_used,
        "min_expected": result.conditions.min_expected,
        "share_below_five": result.conditions.share_below_five,
        "conditions_passed": result.conditions.passed,
        "reference_adjusted": result.reference_adjusted,
    }


def _emit_gof(args, result: inference.GofResult) -> None:
    payload = _gof_payload(result)
    _emit(args, payload, list(payload), [list(payload.values())])


def cmd_gof(args) -> int:
    observed = args.observed
    if args.uniform is not None:
        if args.uniform != len(observed):
            raise DataError(
                f"--uniform {args.uniform} does not match {len(observed)} observed cells"
            )
        probs = [1.0 / args.uniform] * args.uniform
    else:
        total = sum(args.probs)
        if abs(total - 1.0) > 5e-3:
            raise DataError(f"reference probabilities sum to {total}, not 1")
        probs = [p / total for p in args.probs]
    result = inference.gof_test(observed, probs, sum(observed))
    _emit_gof(args, result)
    return EXIT_OK


def cmd_independence(args) -> int:
    if len(args.row) != 2:
        raise DataError(f"independence needs exactly 2 rows, got {len(args.row)}")
    _emit_gof(args, inference.independence_test(args.row))
    return EXIT_OK


def cmd_power(args) -> int:
    if args.null.startswith("u"):
        try:
            k = int(args.null[1:])
        except ValueError:
            raise DataError(f"invalid uniform null spec: {args.null!r}")
        null = [1.0 / k] * k
    else:
        null = _float_list(args.null)
    spec = inference.PowerSpec(tuple(null), tuple(args.alt), args.n, args.alpha)
    value = inference.power(spec)
    _emit(args, {"power": value}, ["power"], [[value]])
    return EXIT_OK


def cmd_ci(args) -> int:
    ci = intervals.wald_ci(args.count, args.n, args.level)
    payload = {
        "center": ci.center, "lower": ci.lower, "upper": ci.upper,
        "level": ci.level, "method": ci.method, "defined": ci.defined,
    }
    _emit(args, payload, list(payload), [list(payload.values())])
    return EXIT_OK


def cmd_bootstrap_ci(args) -> int:
    reference = read_distribution_csv(args.distribution)
    spec = binning.compute_bins(binning.profile(reference), args.bins)
    cis = intervals.bootstrap_uniform_ci(
        reference, spec, args.draw_size, args.replicates,
        RandomSource(args.seed), args.level, args.jobs,
    )
    rows = [
        [label, ci.center, ci.lower, ci.upper, ci.level, ci.defined]
        for label, ci in zip(spec.labels(), cis)
    ]
    payload = {
        "bins": [
            {"label": label, "center": ci.center, "lower": ci.lower,
             "upper": ci.upper, "level": ci.level, "defined": ci.defined}
            for label, ci in zip(spec.labels(), cis)
        ]
    }
    _emit(args, payload, ["bin_label", "center", "lower", "upper", "level", "defined"], rows)
    return EXIT_OK


def cmd_rare(args) -> int:
    if args.test or args.reference:
        if not (args.test and args.reference and args.definition):
            raise DataError("--test, --reference, and --definition are required together")
        definition = rare_names.RareDefinition(args.definition)
        test = read_distribution_csv(args.test)
        reference = read_distribution_csv(args.reference)
        spec = rare_names.RareSpec(
            definition=definition,
            pool_occurrences=reference.total,
            rare_occurrences=rare_names.rare_occurrences(reference, definition),
            draw_size=test.total if args.n is None else args.n,
        )
        k = rare_names.count_rare(test, reference, definition)
    else:
        missing = [flag for flag, value in
                   (("--pool", args.pool), ("--rare-occ", args.rare_occ), ("--n", args.n))
                   if value is None]
        if missing:
            raise DataError(f"explicit mode needs {', '.join(missing)}")
        if args.k is None and not args.k_values:
            raise DataError("explicit mode needs --k or --k-values")
        definition = rare_names.RareDefinition(args.definition or "once")
        spec = rare_names.RareSpec(
            definition=definition,
            pool_occurrences=args.pool,
            rare_occurrences=args.rare_occ,
            draw_size=args.n,
        )
        k = args.k
    if args.k_values:
        rows = rare_names.rare_sensitivity(spec, args.k_values)
    else:
        result = rare_names.rare_tail(spec, k)
        rows = list(result.table) if args.table else [result.table[k]]
    payload = {
        "observed_rare": k,
        "pool_occurrences": spec.pool_occurrences,
        "rare_occurrences": spec.rare_occurrences,
        "draw_size": spec.draw_size,
        "definition": spec.definition.value,
        "rows": [
            {"k": r.k, "tail_binomial": r.tail_binomial, "tail_exact": r.tail_exact}
            for r in rows
        ],
    }
    _emit(args, payload, ["k", "tail_binomial", "tail_exact"],
          [[r.k, r.tail_binomial, r.tail_exact] for r in rows])
    return EXIT_OK


def _parse_filters(raw: Mapping) -> _Filters:
    window = None
    if "window" in raw:
        start, end = raw["window"]
        window = DateWindow(int(start), int(end), DatePolicy(raw.get("policy", "inclusive")))
    elif "policy" in raw:
        raise DataError("filter 'policy' given without 'window'")
    try:
        return _Filters(
            window=window,
            gender=Gender(raw["gender"]) if raw.get("gender") else None,
            region=Region(raw["region"]) if raw.get("region") else None,
            include_fictitious=bool(raw.get("include_fictitious", False)),
            include_nicknames=bool(raw.get("include_nicknames", False)),
            exclusions=frozenset(raw.get("exclusions", ())),
        )
    except ValueError as exc:
        raise DataError(f"invalid filter config: {exc}")


def _resolve_corpora(
    config: Mapping, base_dir: Path, seed: int
) -> tuple[dict[str, list[OccurrenceRecord]], dict[str, dict]]:
    """Load and filter every corpus named in a config.

    File-backed corpora load first; generated (uniform-draw) corpora then
    sample from them, each with its own child source in config order.
    Returns the records per tag plus manifest-ready provenance entries.
    """
    raw_corpora = config.get("corpora")
    if not isinstance(raw_corpora, Mapping) or not raw_corpora:
        raise DataError("config must define a nonempty 'corpora' object")
    corpora: dict[str, list[OccurrenceRecord]] = {}
    provenance: dict[str, dict] = {}
    generated: list[tuple[str, Mapping]] = []
    for tag, entry in raw_corpora.items():
        if "uniform_from" in entry:
            generated.append((tag, entry))
            continue
        if "path" not in entry:
            raise DataError(f"corpus {tag!r} needs a 'path' or 'uniform_from'")
        path = base_dir / entry["path"]
        records = _load_clean_corpus(path)
        records = _parse_filters(entry.get("filters", {})).apply(records)
        corpora[tag] = records
        provenance[tag] = {
            "path": str(path),
            "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
        }
    corpora_rng = RandomSource(seed).child(_RNG_CORPORA)
    for index, (tag, entry) in enumerate(generated):
        source = entry["uniform_from"]
        if source not in corpora:
            raise DataError(f"corpus {tag!r} draws from unknown corpus {source!r}")
        if "draw_size" not in entry:
            raise DataError(f"corpus {tag!r} needs a 'draw_size'")
        draw_size = int(entry["draw_size"])
        corpora[tag] = generate_uniform_sample(
            corpora[source], draw_size, corpora_rng.child(index), source_tag=tag
        )
        provenance[tag] = {"uniform_from": source, "draw_size": draw_size, "seed": seed}
    return corpora, provenance


def _manifest(args, config_path: Path, provenance: dict) -> dict:
    return {
        "config_hash": hashlib.sha256(config_path.read_bytes()).hexdigest(),
        "corpus_digests": provenance,
        "seed": args.seed,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "command_line": sys.argv,
    }


def _load_config(path: str) -> tuple[dict, Path]:
    config_path = Path(path)
    if not config_path.exists():
        raise DataError(f"config file not found: {config_path}")
    try:
        config = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON in {config_path}: {exc}")
    if not isinstance(config, dict):
        raise DataError(f"config root must be an object in {config_path}")
    return config, config_path


def _format_cell(p: float | None) -> str:
    return "NA" if p is None else repr(p)


def cmd_suite(args) -> int:
    config, config_path = _load_config(args.config)
    corpora, provenance = _resolve_corpora(config, config_path.parent, args.seed)
    raw_scenarios = config.get("scenarios")
    if not isinstance(raw_scenarios, list) or not raw_scenarios:
        raise DataError("config must define a nonempty 'scenarios' list")
    scenarios = [
        inference.ScenarioConfig.from_dict({"k": args.bins, **raw})
        for raw in raw_scenarios
    ]
    suite = inference.run_suite(scenarios, corpora, alpha=args.alpha, jobs=args.jobs)
    matrix = inference.to_matrix(suite)

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "matrix.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["reference", "variable", *matrix.column_keys])
        for (reference, variable), row in zip(matrix.row_keys, matrix.cells):
            writer.writerow([reference, variable, *(_format_cell(p) for p in row)])
    scenario_details = []
    for result in suite.results:
        detail = result.scenario.to_dict()
        detail.update(
            skipped=result.skipped,
            p_value=result.p_value,
            statistic=result.gof.statistic if result.gof else None,
            df=result.gof.df if result.gof else None,
            bins_used=result.gof.bins_used if result.gof else None,
            fallback_k=result.fallback_k,
            conditions_passed=result.gof.conditions.passed if result.gof else None,
            min_expected=result.gof.conditions.min_expected if result.gof else None,
            verdict=result.verdict,
            matched=result.matched,
            dropped_categories=list(result.dropped_categories),
            dropped_observed=result.dropped_observed,
            subtraction_exact=result.subtraction_exact,
            bin_labels=list(result.bin_spec.labels()) if result.bin_spec else None,
        )
        scenario_details.append(detail)
    (out / "matrix.json").write_text(
        json.dumps(
            {
                "benchmark": {
                    "alpha": suite.benchmark.alpha,
                    "num_tests": suite.benchmark.num_tests,
                    "adjusted": suite.benchmark.adjusted,
                },
                "match_count": suite.match_count,
                "num_tests": suite.num_tests,
                "columns": list(matrix.column_keys),
                "rows": [list(key) for key in matrix.row_keys],
                "cells": [[cell for cell in row] for row in matrix.cells],
                "scenarios": scenario_details,
            },
            indent=2,
        ) + "\n",
        encoding="utf-8",
    )
    with (out / "scenarios.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        header = [
            "test_source", "reference_source", "variable", "expected_fit",
            "subtract_from_reference", "merge_semitic", "k", "skipped", "p_value",
            "statistic", "df", "bins_used", "fallback_k", "conditions_passed",
            "verdict", "matched", "dropped_categories", "dropped_observed",
            "subtraction_exact",
        ]
        writer.writerow(header)
        for detail in scenario_details:
            writer.writerow([
                detail["test_source"], detail["reference_source"], detail["variable"],
                detail["expected_fit"], detail["subtract_from_reference"],
                detail["merge_semitic"], detail["k"], detail["skipped"],
                _format_cell(detail["p_value"]), detail["statistic"], detail["df"],
                detail["bins_used"], detail["fallback_k"], detail["conditions_passed"],
                detail["verdict"], detail["matched"],
                ";".join(detail["dropped_categories"]), detail["dropped_observed"],
                detail["subtraction_exact"],
            ])
    (out / "manifest.json").write_text(
        json.dumps(_manifest(args, config_path, provenance), indent=2) + "\n",
        encoding="utf-8",
    )
    print(
        f"{suite.match_count} of {suite.num_tests} tests matched their hypotheses "
        f"(benchmark {suite.benchmark.alpha}/{suite.benchmark.num_tests} = "
        f"{suite.benchmark.adjusted:.6g})"
    )
    return EXIT_OK


def _figure_points(
    entry: Mapping,
    corpora: Mapping[str, Sequence[OccurrenceRecord]],
    args,
    figure_rng: RandomSource,
) -> list[intervals.SeriesPoint]:
    mode = entry.get("mode", "frequency")
    reference_tag = entry.get("reference")
    if reference_tag not in corpora:
        raise DataError(f"figure references unknown corpus {reference_tag!r}")
    test_tags = entry.get("tests", [])
    for tag in test_tags:
        if tag not in corpora:
            raise DataError(f"figure references unknown corpus {tag!r}")
    level = float(entry.get("level", 0.95))
    if mode == "origin":
        merge = bool(entry.get("merge_semitic", False))
        reference = build_origin_distribution(corpora[reference_tag], merge)
        tests = {
            tag: build_origin_distribution(corpora[tag], merge) for tag in test_tags
        }
        return intervals.origin_figure_series(tests, reference, level)
    reference = build_frequency_distribution(corpora[reference_tag])
    tests = {tag: build_frequency_distribution(corpora[tag]) for tag in test_tags}
    if mode == "top_names":
        return intervals.top_names_series(
            tests, reference, int(entry.get("top", 12)), level
        )
    if mode != "frequency":
        raise DataError(f"unknown figure mode {mode!r}")
    spec = binning.compute_bins(
        binning.profile(reference), int(entry.get("bins", args.bins))
    )
    points = intervals.figure_series(tests, reference, spec, level)
    bootstrap = entry.get("bootstrap")
    if bootstrap:
        if "draw_size" not in bootstrap:
            raise DataError("figure bootstrap entry needs a 'draw_size'")
        points.extend(
            intervals.bootstrap_series(
                bootstrap.get("series", "uniform"),
                reference,
                spec,
                int(bootstrap["draw_size"]),
                int(bootstrap.get("replicates", 10_000)),
                figure_rng,
                level,
                args.jobs,
            )
        )
    return points


def cmd_figures(args) -> int:
    config, config_path = _load_config(args.config)
    corpora, provenance = _resolve_corpora(config, config_path.parent, args.seed)
    raw_figures = config.get("figures")
    if not isinstance(raw_figures, list) or not raw_figures:
        raise DataError("config must define a nonempty 'figures' list")
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    figures_rng = RandomSource(args.seed).child(_RNG_FIGURES)
    for index, entry in enumerate(raw_figures):
        name = entry.get("name", f"figure{index}")
        points = _figure_points(entry, corpora, args, figures_rng.child(index))
        with (out / f"{name}.csv").open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["series", "bin_label", "center", "lower", "upper", "defined"])
            for point in points:
                writer.writerow([
                    point.series, point.bin_label, repr(point.center),
                    repr(point.lower), repr(point.upper), point.defined,
                ])
        (out / f"{name}.json").write_text(
            json.dumps(
                [
                    {
                        "series": point.series, "bin_label": point.bin_label,
                        "center": point.center, "lower": point.lower,
                        "upper": point.upper, "defined": point.defined,
                    }
                    for point in points
                ],
                indent=2,
            ) + "\n",
            encoding="utf-8",
        )
        print(f"wrote {out / name}.csv")
    (out / "manifest.json").write_text(
        json.dumps(_manifest(args, config_path, provenance), indent=2) + "\n",
        encoding="utf-8",
    )
    return EXIT_OK


_HANDLERS = {
    "validate": cmd_validate,
    "distribution": cmd_distribution,
    "bins": cmd_bins,
    "gof": cmd_gof,
    "independence": cmd_independence,
    "power": cmd_power,
    "ci": cmd_ci,
    "bootstrap-ci": cmd_bootstrap_ci,
    "rare": cmd_rare,
    "suite": cmd_suite,
    "figures": cmd_figures,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except DataError as exc:
        print(f"namefit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"namefit: i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"namefit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
