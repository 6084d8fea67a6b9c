"""Scalability harness for batch defuzzification.

Times defuzzify_batch (and nothing else: record generation and I/O stay
outside the clocked region) across tree shapes and record counts, then fits
total time against record count to verify linear scaling.  Absolute numbers
are hardware-bound; the analysis reports the fit quality (R-squared), the
per-record plateau between the two largest counts, and leaves judgement to
the caller.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence
from xml.sax.saxutils import escape

from .datagen import DatasetSpec, generate_records
from .defuzz import defuzzify_batch
from .errors import InfeasibleSpec, InsufficientPoints
from .tree import PartitionTree


@dataclass(frozen=True)
class BenchPlan:
    """What to measure: trees, record counts, imprecision, seed, repetitions."""

    trees: tuple[tuple[str, PartitionTree], ...]
    record_counts: tuple[int, ...]
    values_per_record: int
    seed: int
    repetitions: int = 5
    workers: int | None = None

    def __post_init__(self) -> None:
        if not self.trees:
            raise InfeasibleSpec("benchmark plan has no trees")
        if not self.record_counts:
            raise InfeasibleSpec("benchmark plan has no record counts")
        for a, b in zip(self.record_counts, self.record_counts[1:]):
            if b <= a:
                raise InfeasibleSpec(
                    f"record counts must be strictly ascending: {a} -> {b}"
                )
        if self.repetitions < 1:
            raise InfeasibleSpec("repetitions must be >= 1")


@dataclass(frozen=True)
class BenchRow:
    tree: str
    levels: int
    records: int
    values_per_record: int
    total_ms: float
    avg_us_per_record: float


@dataclass(frozen=True)
class BenchResult:
    rows: tuple[BenchRow, ...]


def run_benchmark(
    plan: BenchPlan,
    batch_fn: Callable = defuzzify_batch,
    records_fn: Callable = generate_records,
    clock: Callable[[], float] = time.perf_counter,
) -> BenchResult:
    """Median wall-clock time of batch defuzzification per (tree, count).

    One warm-up run per combination is discarded (data-structure and cache
    initialization otherwise inflates the smallest counts), then the median
    over `plan.repetitions` timed runs is kept.  `batch_fn`, `records_fn`
    and `clock` are injection points for the test suite.
    """
    rows = []
    for name, tree in plan.trees:
        levels = len(tree.level_alphas)
        for count in plan.record_counts:
            spec = DatasetSpec(count, plan.values_per_record, plan.seed)
            records = records_fn(tree, spec)
            batch_fn(tree, records, on_unknown="error", workers=plan.workers)
            elapsed = []
            for _ in range(plan.repetitions):
                start = clock()
                batch_fn(
                    tree, records, on_unknown="error", workers=plan.workers
                )
                elapsed.append(clock() - start)
            total_ms = statistics.median(elapsed) * 1000.0
            rows.append(
                BenchRow(
                    tree=name,
                    levels=levels,
                    records=count,
                    values_per_record=plan.values_per_record,
                    total_ms=total_ms,
                    avg_us_per_record=total_ms * 1000.0 / count,
                )
            )
    return BenchResult(tuple(rows))


@dataclass(frozen=True)
class TreeScaling:
    tree: str
    slope_ms_per_record: float
    intercept_ms: float
    r_squared: float
    plateau_ratio: float


@dataclass(frozen=True)
class ScalingReport:
    per_tree: tuple[TreeScaling, ...]


def _tree_order(result: BenchResult) -> list[str]:
    names: list[str] = []
    for row in result.rows:
        if row.tree not in names:
            names.append(row.tree)
    return names


def analyze_scaling(result: BenchResult) -> ScalingReport:
    """Least-squares fit of total time against record count, per tree.

    R-squared is 1 - SSres/SStot (1.0 when the points carry no variance at
    all); the plateau ratio divides the per-record average at the largest
    count by the one at the second-largest.
    """
    reports = []
    for name in _tree_order(result):
        rows = sorted(
            (r for r in result.rows if r.tree == name),
            key=lambda r: r.records,
        )
        counts = [r.records for r in rows]
        if len(set(counts)) < 3:
            raise InsufficientPoints(
                f"tree {name!r} has {len(set(counts))} distinct record "
                f"counts, need at least 3"
            )
        times = [r.total_ms for r in rows]
        fit = statistics.linear_regression(counts, times)
        mean = statistics.fmean(times)
        ss_tot = sum((y - mean) ** 2 for y in times)
        ss_res = sum(
            (y - (fit.slope * x + fit.intercept)) ** 2
            for x, y in zip(counts, times)
        )
        if ss_tot == 0.0:
            r_squared = 1.0
        else:
            r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
        reports.append(
            TreeScaling(
                tree=name,
                slope_ms_per_record=fit.slope,
                intercept_ms=fit.intercept,
                r_squared=r_squared,
                plateau_ratio=rows[-1].avg_us_per_record
                / rows[-2].avg_us_per_record,
            )
        )
    return ScalingReport(tuple(reports))


def emit_bench_csv(result: BenchResult) -> str:
    lines = ["tree,levels,records,values_per_record,total_ms,avg_us_per_record"]
    for r in result.rows:
        lines.append(
            f"{r.tree},{r.levels},{r.records},{r.values_per_record},"
            f"{r.total_ms!r},{r.avg_us_per_record!r}"
        )
    return "\n".join(lines) + "\n"


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
)

_WIDTH, _HEIGHT = 800, 500
_MARGIN_LEFT, _MARGIN_RIGHT = 80, 170
_MARGIN_TOP, _MARGIN_BOTTOM = 50, 60


def _nice_ticks(upper: float, want: int = 5) -> list[float]:
    if upper <= 0:
        upper = 1.0
    raw = upper / want
    magnitude = 10.0 ** int(f"{raw:e}".split("e")[1])
    for factor in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = factor * magnitude
        if step * want >= upper:
            break
    ticks = []
    value = 0.0
    while value <= upper + step * 1e-9:
        ticks.append(value)
        value += step
    return ticks


def _format_tick(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return f"{value:g}"


def emit_plot_svg(result: BenchResult, mode: str = "total") -> str:
    """Line chart of the benchmark: one series per tree.

    mode "total" plots total milliseconds, "per-record" the per-record
    average in microseconds.  Output is plain standalone SVG.
    """
    if mode == "total":
        y_of = lambda r: r.total_ms
        y_label = "total time (ms)"
        title = "batch defuzzification: total time"
    elif mode == "per-record":
        y_of = lambda r: r.avg_us_per_record
        y_label = "avg time per record (us)"
        title = "batch defuzzification: per-record average"
    else:
        raise ValueError(f"mode must be 'total' or 'per-record', got {mode!r}")

    series = []
    for name in _tree_order(result):
        rows = sorted(
            (r for r in result.rows if r.tree == name),
            key=lambda r: r.records,
        )
        series.append((name, [(r.records, y_of(r)) for r in rows]))

    x_max = max((x for _, pts in series for x, _ in pts), default=1.0)
    y_max = max((y for _, pts in series for _, y in pts), default=1.0)
    x_ticks = _nice_ticks(float(x_max))
    y_ticks = _nice_ticks(float(y_max))
    x_span = x_ticks[-1]
    y_span = y_ticks[-1]
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x / x_span) * plot_w

    def py(y: float) -> float:
        return _HEIGHT - _MARGIN_BOTTOM - (y / y_span) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_MARGIN_LEFT}" y="{_MARGIN_TOP - 20}" font-size="15">'
        f"{escape(title)}</text>",
    ]
    for tick in x_ticks:
        x = px(tick)
        parts.append(
            f'<line x1="{x:.1f}" y1="{py(0):.1f}" x2="{x:.1f}" '
            f'y2="{py(0) + 5:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{py(0) + 20:.1f}" text-anchor="middle">'
            f"{_format_tick(tick)}</text>"
        )
    for tick in y_ticks:
        y = py(tick)
        parts.append(
            f'<line x1="{px(0) - 5:.1f}" y1="{y:.1f}" x2="{px(0):.1f}" '
            f'y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<line x1="{px(0):.1f}" y1="{y:.1f}" x2="{px(x_span):.1f}" '
            f'y2="{y:.1f}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{px(0) - 10:.1f}" y="{y + 4:.1f}" text-anchor="end">'
            f"{_format_tick(tick)}</text>"
        )
    parts.append(
        f'<line x1="{px(0):.1f}" y1="{py(0):.1f}" x2="{px(x_span):.1f}" '
        f'y2="{py(0):.1f}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{px(0):.1f}" y1="{py(0):.1f}" x2="{px(0):.1f}" '
        f'y2="{py(y_span):.1f}" stroke="black"/>'
    )
    parts.append(
        f'<text x="{px(x_span / 2):.1f}" y="{_HEIGHT - 15}" '
        f'text-anchor="middle">fuzzy records</text>'
    )
    parts.append(
        f'<text x="20" y="{py(y_span / 2):.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {py(y_span / 2):.1f})">'
        f"{escape(y_label)}</text>"
    )
    legend_x = _WIDTH - _MARGIN_RIGHT + 20
    for i, (name, points) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in points)
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'points="{coords}"/>'
        )
        for x, y in points:
            parts.append(
                f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" '
                f'fill="{color}"/>'
            )
        ly = _MARGIN_TOP + 20 * i
        parts.append(
            f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 25}" '
            f'y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 32}" y="{ly + 4}">{escape(name)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
