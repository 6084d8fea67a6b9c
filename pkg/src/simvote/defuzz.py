"""Turn a multi-valued categorical record into a weighted vote distribution.

The pipeline: intersect the record with the partition tree's classes to find
the subsets of values that co-occur, keep the highest alpha at which each
subset co-occurs (the resemblance table), sum alphas per value (grades), and
normalize.  Values that sit close together in the hierarchy reinforce each
other and end up with more than the flat 1/k share.

The pruned depth-first traversal is the production path; two slower
reference implementations (`extract_resemblances_oracle`, a full-tree sweep,
and `extract_resemblances_literal`, a subset-list search) exist so the test
suite can cross-check it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import (
    EmptyQuery,
    InvariantViolation,
    QueryTooLarge,
    UnknownLabel,
)
from .tree import PartitionTree, TreeNode

MAX_ENUMERABLE_QUERY = 20


@dataclass(frozen=True)
class FuzzyRecord:
    """One imprecise observation: a set of candidate labels."""

    values: frozenset[str]
    id: str | None = None

    def __post_init__(self) -> None:
        if not self.values:
            raise EmptyQuery(
                f"record {self.id!r} has no values" if self.id
                else "record has no values"
            )

    @classmethod
    def from_labels(cls, labels: Iterable[str], id: str | None = None
                    ) -> "FuzzyRecord":
        """Build a record from possibly repeated labels (duplicates collapse)."""
        return cls(frozenset(labels), id)


@dataclass(frozen=True)
class TraceEntry:
    """One extraction step: a matched subset, its alpha, and whether it
    replaced an earlier alpha for the same subset."""

    subset: frozenset[str]
    alpha: float
    updated: bool


@dataclass(frozen=True)
class ResemblanceTable:
    """Max alpha of common occurrence for each co-occurring query subset.

    `entries` is keyed by subset and ordered canonically: larger subsets
    first, ties by the members' domain positions.
    """

    domain: tuple[str, ...]
    query: frozenset[str]
    entries: dict[frozenset[str], float]

    def alpha(self, subset: Iterable[str]) -> float:
        return self.entries[frozenset(subset)]


def _checked_query(tree: PartitionTree, record: FuzzyRecord) -> frozenset[str]:
    unknown = record.values - frozenset(tree.labels)
    if unknown:
        offender = sorted(unknown)[0]
        raise UnknownLabel(
            f"query label {offender!r} is not in the tree domain"
        )
    return record.values


def _canonical_table(tree: PartitionTree, query: frozenset[str],
                     best: dict[frozenset[str], float]) -> ResemblanceTable:
    idx = tree.index

    def key(item: tuple[frozenset[str], float]):
        subset = item[0]
        return (-len(subset), tuple(sorted(idx[l] for l in subset)))

    return ResemblanceTable(tree.labels, query, dict(sorted(best.items(), key=key)))


def extract_resemblances(tree: PartitionTree,
                         record: FuzzyRecord) -> ResemblanceTable:
    """Pruned preorder DFS collecting max-alpha per co-occurring subset.

    At each node the longest query subset contained in the class is exactly
    the intersection query & class; subtrees with an empty intersection are
    skipped, and sibling iteration stops once every element of the current
    subset has been located (children partition the parent, so nothing new
    can appear further right).
    """
    query = _checked_query(tree, record)
    alphas = tree.level_alphas
    best: dict[frozenset[str], float] = {}

    def visit(node: TreeNode, search: frozenset[str]) -> frozenset[str]:
        matched = search & node.members
        if not matched:
            return matched
        alpha = alphas[node.level_index]
        prev = best.get(matched)
        if prev is None or alpha > prev:
            best[matched] = alpha
        remaining = len(matched)
        for child in node.children:
            found = visit(child, matched)
            if found:
                remaining -= len(found)
                if not remaining:
                    break
        return matched

    visit(tree.root, query)
    return _canonical_table(tree, query, best)


def resemblance_trace(tree: PartitionTree,
                      record: FuzzyRecord) -> list[TraceEntry]:
    """Same traversal as extract_resemblances, but returns the ordered list
    of store/update events (the auditable view of the extraction)."""
    query = _checked_query(tree, record)
    alphas = tree.level_alphas
    trace: list[TraceEntry] = []
    seen: set[frozenset[str]] = set()

    def visit(node: TreeNode, search: frozenset[str]) -> frozenset[str]:
        matched = search & node.members
        if not matched:
            return matched
        trace.append(
            TraceEntry(matched, alphas[node.level_index], matched in seen)
        )
        seen.add(matched)
        remaining = len(matched)
        for child in node.children:
            found = visit(child, matched)
            if found:
                remaining -= len(found)
                if not remaining:
                    break
        return matched

    visit(tree.root, query)
    return trace


def table_from_trace(tree: PartitionTree, record: FuzzyRecord,
                     trace: Sequence[TraceEntry]) -> ResemblanceTable:
    best: dict[frozenset[str], float] = {}
    for entry in trace:
        prev = best.get(entry.subset)
        if prev is None or entry.alpha > prev:
            best[entry.subset] = entry.alpha
    return _canonical_table(tree, record.values, best)


def extract_resemblances_oracle(tree: PartitionTree,
                                record: FuzzyRecord) -> ResemblanceTable:
    """Reference extraction: visit every node unconditionally, no pruning."""
    query = _checked_query(tree, record)
    best: dict[frozenset[str], float] = {}
    for node in tree.iter_nodes():
        matched = query & node.members
        if not matched:
            continue
        alpha = tree.level_alphas[node.level_index]
        prev = best.get(matched)
        if prev is None or alpha > prev:
            best[matched] = alpha
    return _canonical_table(tree, query, best)


def enumerate_query_subsets(record: FuzzyRecord,
                            order: Sequence[str] | None = None
                            ) -> list[frozenset[str]]:
    """All non-empty subsets of the record, largest first.

    Ties are broken by the members' positions in `order` (defaults to sorted
    label text).  Guarded at 20 values: the list holds 2^k - 1 subsets.
    """
    if len(record.values) > MAX_ENUMERABLE_QUERY:
        raise QueryTooLarge(
            f"cannot enumerate subsets of a {len(record.values)}-value "
            f"query (limit {MAX_ENUMERABLE_QUERY})"
        )
    if order is None:
        ordered = sorted(record.values)
    else:
        pos = {label: i for i, label in enumerate(order)}
        ordered = sorted(record.values, key=pos.__getitem__)
    subsets: list[frozenset[str]] = []
    for size in range(len(ordered), 0, -1):
        for combo in combinations(ordered, size):
            subsets.append(frozenset(combo))
    return subsets


def extract_resemblances_literal(tree: PartitionTree,
                                 record: FuzzyRecord) -> ResemblanceTable:
    """Subset-list variant of the extraction, kept as a secondary oracle.

    Instead of intersecting, each node scans a descending-size list of all
    query subsets for the longest one contained in its class, and prunes the
    list as sibling branches account for values.  Exponential in the query
    size; only usable for small queries.
    """
    query = _checked_query(tree, record)
    alphas = tree.level_alphas
    best: dict[frozenset[str], float] = {}

    def visit(subset_list: list[frozenset[str]], node: TreeNode,
              search: frozenset[str], level: int) -> frozenset[str]:
        found = frozenset()
        for candidate in subset_list:
            if candidate <= node.members:
                found = candidate
                break
        if not found:
            return found
        alpha = alphas[level]
        prev = best.get(found)
        if prev is None or alpha > prev:
            best[found] = alpha
        remaining = set(search)
        pruned = subset_list
        for child in node.children:
            located = visit(pruned, child, found, level + 1)
            if located:
                pruned = [s for s in pruned if s.isdisjoint(located)]
                remaining -= located
                if not remaining:
                    break
        return found

    visit(enumerate_query_subsets(record, tree.labels), tree.root, query, 0)
    return _canonical_table(tree, query, best)


@dataclass(frozen=True)
class GradeVector:
    """Per-label alpha sums; iteration follows domain order."""

    grades: dict[str, float]
    total: float


@dataclass(frozen=True)
class VoteDistribution:
    """Normalized weights; iteration is by descending weight, then domain
    order."""

    weights: dict[str, float]


def grade(table: ResemblanceTable, record: FuzzyRecord) -> GradeVector:
    """Sum each label's alphas over the table entries containing it.

    Accumulation follows the table's canonical entry order so sums are
    bit-reproducible.
    """
    if record.values != table.query:
        raise InvariantViolation(
            "grade: the table was extracted for a different query"
        )
    idx = {label: i for i, label in enumerate(table.domain)}
    grades = {
        label: 0.0 for label in sorted(table.query, key=idx.__getitem__)
    }
    for subset, alpha in table.entries.items():
        for label in subset:
            grades[label] += alpha
    total = 0.0
    for value in grades.values():
        total += value
    return GradeVector(grades, total)


def normalize(g: GradeVector) -> VoteDistribution:
    """Divide grades by their total; ordering puts heavier labels first."""
    positions = {label: i for i, label in enumerate(g.grades)}
    weights = {label: value / g.total for label, value in g.grades.items()}
    ordered = sorted(weights.items(), key=lambda kv: (-kv[1], positions[kv[0]]))
    return VoteDistribution(dict(ordered))


def defuzzify_record(tree: PartitionTree,
                     record: FuzzyRecord) -> VoteDistribution:
    """Full pipeline for one record: extract, grade, normalize."""
    return normalize(grade(extract_resemblances(tree, record), record))


@dataclass(frozen=True)
class Skipped:
    """Marker for a record left out of a batch due to an unknown label."""

    unknown_label: str


BatchItem = tuple[str, Union[VoteDistribution, Skipped]]


def defuzzify_batch(tree: PartitionTree, records: Sequence[FuzzyRecord],
                    on_unknown: str = "error",
                    workers: int | None = None) -> list[BatchItem]:
    """Defuzzify records in order, returning (record id, result) pairs.

    Records without an id get their 1-based position.  With
    on_unknown="skip", a record referencing a label outside the domain
    yields a Skipped marker naming the label; with "error", the first such
    record aborts the whole batch.  `workers` > 1 processes records in a
    thread pool; output order still matches input order.
    """
    if on_unknown not in ("error", "skip"):
        raise ValueError(f"on_unknown must be 'error' or 'skip', got {on_unknown!r}")
    records = list(records)
    ids = [
        record.id if record.id is not None else str(i)
        for i, record in enumerate(records, 1)
    ]
    domain = frozenset(tree.labels)

    def process(position: int, record: FuzzyRecord) -> VoteDistribution | Skipped:
        unknown = record.values - domain
        if unknown:
            offender = sorted(unknown)[0]
            if on_unknown == "error":
                raise UnknownLabel(
                    f"record {position} (id {ids[position - 1]}): unknown "
                    f"label {offender!r}"
                )
            return Skipped(offender)
        return defuzzify_record(tree, record)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(process, range(1, len(records) + 1), records)
            )
    else:
        results = [
            process(i, record) for i, record in enumerate(records, 1)
        ]
    return list(zip(ids, results))
