"""Command-line interface.

Subcommands wire the library to the file formats; no behavior lives here
beyond parsing, dispatch, and formatting.  Exit codes: 0 success, 1 data or
validation error (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    BenchPlan,
    analyze_scaling,
    emit_bench_csv,
    emit_plot_svg,
    run_benchmark,
)
from .datagen import DatasetSpec, TreeSpec, generate_records, generate_tree
from .defuzz import Skipped, defuzzify_batch, resemblance_trace
from .errors import SimvoteError
from .matrix import (
    check_max_min_transitivity,
    distinct_levels,
    parse_similarity_matrix,
)
from .records import format_batch_csv, format_records_file, parse_records_file
from .records import render_trace_table
from .tree import build_partition_tree, parse_tree, render_tree, serialize_tree


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SimvoteError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated decimal list: {text!r}")


def _cmd_validate(args: argparse.Namespace) -> int:
    matrix = parse_similarity_matrix(_read(args.matrix))
    report = check_max_min_transitivity(matrix)
    if report.ok:
        print("OK")
        print("levels: " + " ".join(repr(a) for a in distinct_levels(matrix)))
        return 0
    print(f"not max-min transitive: {len(report.violations)} violating triple(s)")
    for violation in report.violations:
        print("violation " + violation.describe())
    return 1


def _load_tree(args: argparse.Namespace):
    if getattr(args, "matrix", None):
        return build_partition_tree(parse_similarity_matrix(_read(args.matrix)))
    return parse_tree(_read(args.tree))


def _cmd_tree(args: argparse.Namespace) -> int:
    tree = build_partition_tree(parse_similarity_matrix(_read(args.matrix)))
    if args.out:
        _write(args.out, serialize_tree(tree))
    else:
        sys.stdout.write(render_tree(tree))
    return 0


def _cmd_apply(args: argparse.Namespace) -> int:
    tree = _load_tree(args)
    records = parse_records_file(_read(args.records))
    results = defuzzify_batch(tree, records, on_unknown=args.on_unknown)
    if args.show_table:
        for record, (record_id, outcome) in zip(records, results):
            print(f"record {record_id}")
            if isinstance(outcome, Skipped):
                print(f"SKIPPED (unknown label {outcome.unknown_label})")
            else:
                trace = resemblance_trace(tree, record)
                sys.stdout.write(render_trace_table(trace, tree.labels))
            print()
    _write(args.out, format_batch_csv(results))
    return 0


def _cmd_gen_tree(args: argparse.Namespace) -> int:
    spec = TreeSpec(
        domain_size=args.domain_size,
        level_alphas=tuple(args.alphas),
        branching=tuple(args.branching),
    )
    _write(args.out, serialize_tree(generate_tree(spec, args.seed)))
    return 0


def _cmd_gen_records(args: argparse.Namespace) -> int:
    tree = parse_tree(_read(args.tree))
    spec = DatasetSpec(args.count, args.values, args.seed)
    records = generate_records(tree, spec)
    _write(args.out, format_records_file(records, tree.labels))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    trees = []
    for path in args.trees.split(","):
        path = path.strip()
        trees.append((Path(path).stem, parse_tree(_read(path))))
    plan = BenchPlan(
        trees=tuple(trees),
        record_counts=tuple(args.counts),
        values_per_record=args.values,
        seed=args.seed,
        repetitions=args.reps,
        workers=args.workers,
    )
    result = run_benchmark(plan)
    for row in result.rows:
        print(
            f"tree={row.tree} levels={row.levels} records={row.records} "
            f"values={row.values_per_record} total_ms={row.total_ms:.3f} "
            f"avg_us={row.avg_us_per_record:.3f}"
        )
    if len(plan.record_counts) >= 3:
        for scaling in analyze_scaling(result).per_tree:
            print(
                f"scaling {scaling.tree}: "
                f"slope={scaling.slope_ms_per_record:.6f} ms/record "
                f"intercept={scaling.intercept_ms:.3f} ms "
                f"R2={scaling.r_squared:.4f} "
                f"plateau={scaling.plateau_ratio:.3f}"
            )
    if args.csv:
        _write(args.csv, emit_bench_csv(result))
    if args.svg:
        _write(args.svg, emit_plot_svg(result, mode="total"))
    if args.per_record_svg:
        _write(args.per_record_svg, emit_plot_svg(result, mode="per-record"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simvote",
        description="Validate similarity matrices, build partition trees, "
        "and defuzzify multi-valued categorical records.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a similarity matrix")
    p.add_argument("--matrix", required=True, help="similarity CSV file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("tree", help="build a partition tree from a matrix")
    p.add_argument("--matrix", required=True, help="similarity CSV file")
    p.add_argument("--out", help="write tree JSON here (default: render to stdout)")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("apply", help="defuzzify a records file")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", help="similarity CSV file")
    source.add_argument("--tree", help="partition tree JSON file")
    p.add_argument("--records", required=True, help="records file")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument(
        "--on-unknown", choices=("error", "skip"), default="error",
        help="policy for labels outside the domain",
    )
    p.add_argument(
        "--show-table", action="store_true",
        help="print each record's resemblance table to stdout",
    )
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("gen-tree", help="generate a synthetic partition tree")
    p.add_argument("--domain-size", type=int, required=True)
    p.add_argument("--alphas", type=_float_list, required=True,
                   help="comma-separated level alphas, ascending to 1.0")
    p.add_argument("--branching", type=_int_list, required=True,
                   help="comma-separated class count per level")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_gen_tree)

    p = sub.add_parser("gen-records", help="generate a random records file")
    p.add_argument("--tree", required=True, help="partition tree JSON file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--values", type=int, required=True,
                   help="distinct values per record")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_gen_records)

    p = sub.add_parser("bench", help="time batch defuzzification")
    p.add_argument("--trees", required=True,
                   help="comma-separated tree JSON files")
    p.add_argument("--counts", type=_int_list, required=True,
                   help="comma-separated record counts, ascending")
    p.add_argument("--values", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--workers", type=int, default=None,
                   help="thread count for the batch (default: single-threaded)")
    p.add_argument("--csv", help="write per-row results here")
    p.add_argument("--svg", help="write the total-time chart here")
    p.add_argument("--per-record-svg", help="write the per-record chart here")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SimvoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
