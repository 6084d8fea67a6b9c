"""Synthetic partition trees and fuzzy-record datasets.

Trees are described by a per-level class count; each level is produced by
splitting the previous level's classes, largest first, into balanced parts
(sizes differ by at most one).  Which member lands in which part is the only
random choice, so a (spec, seed) pair fully determines the output.  Record
values are uniform k-subsets of the domain drawn from per-record SplitMix64
streams, making record i independent of how many records are requested.
"""

from __future__ import annotations

from dataclasses import dataclass

from .defuzz import FuzzyRecord
from .errors import InfeasibleSpec
from .matrix import ALPHA_TOLERANCE
from .rng import SplitMix64, record_stream
from .tree import PartitionTree, TreeNode


@dataclass(frozen=True)
class TreeSpec:
    """Shape of a generated tree: domain size, level alphas, class counts."""

    domain_size: int
    level_alphas: tuple[float, ...]
    branching: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise InfeasibleSpec(f"domain_size must be >= 1, got {self.domain_size}")
        if not self.level_alphas:
            raise InfeasibleSpec("level_alphas is empty")
        for a, b in zip(self.level_alphas, self.level_alphas[1:]):
            if not b > a + ALPHA_TOLERANCE:
                raise InfeasibleSpec(
                    f"level alphas must be strictly ascending: {a!r} -> {b!r}"
                )
        if self.level_alphas[-1] != 1.0:
            raise InfeasibleSpec(
                f"deepest alpha must be 1.0, got {self.level_alphas[-1]!r}"
            )
        if len(self.branching) != len(self.level_alphas):
            raise InfeasibleSpec(
                f"{len(self.branching)} class counts for "
                f"{len(self.level_alphas)} levels"
            )
        if self.branching[0] != 1:
            raise InfeasibleSpec(
                f"the root level has one class, got {self.branching[0]}"
            )
        for prev, nxt in zip(self.branching, self.branching[1:]):
            if nxt < prev:
                raise InfeasibleSpec(
                    f"class counts must be non-decreasing: {prev} -> {nxt}"
                )
        if self.branching[-1] > self.domain_size:
            raise InfeasibleSpec(
                f"{self.branching[-1]} deepest classes exceed the "
                f"{self.domain_size}-label domain"
            )

    @property
    def levels(self) -> int:
        return len(self.level_alphas)


@dataclass(frozen=True)
class DatasetSpec:
    """Size, imprecision (values per record) and seed of a record file."""

    record_count: int
    values_per_record: int
    seed: int

    def __post_init__(self) -> None:
        if self.record_count < 1:
            raise InfeasibleSpec(f"record_count must be >= 1, got {self.record_count}")
        if self.values_per_record < 1:
            raise InfeasibleSpec(
                f"values_per_record must be >= 1, got {self.values_per_record}"
            )
        if not 0 <= self.seed < 1 << 64:
            raise InfeasibleSpec("seed must fit in 64 unsigned bits")


def domain_labels(n: int) -> tuple[str, ...]:
    """Zero-padded synthetic labels v00, v01, ..."""
    width = max(2, len(str(n - 1)))
    return tuple(f"v{i:0{width}d}" for i in range(n))


def _plan_splits(sizes: list[int], target: int) -> list[int]:
    """Child-class count per class so the level totals `target` classes.

    Extra splits go to the class with the largest average part size first
    (ties to the earlier class), keeping the tree as balanced as the counts
    allow.
    """
    counts = [1] * len(sizes)
    extra = target - len(sizes)
    for _ in range(extra):
        best = -1
        best_avg = 0.0
        for i, (size, count) in enumerate(zip(sizes, counts)):
            if count >= size:
                continue
            avg = size / count
            if avg > best_avg:
                best, best_avg = i, avg
        if best < 0:
            raise InfeasibleSpec(
                f"cannot split {len(sizes)} classes of {sum(sizes)} members "
                f"into {target} classes"
            )
        counts[best] += 1
    return counts


def _split_class(members: list[int], parts: int, rng: SplitMix64
                 ) -> list[list[int]]:
    """Split one class into balanced parts; membership is the random choice."""
    if parts == 1:
        return [members]
    shuffled = list(members)
    rng.shuffle(shuffled)
    quotient, remainder = divmod(len(members), parts)
    out = []
    start = 0
    for p in range(parts):
        size = quotient + (1 if p < remainder else 0)
        out.append(sorted(shuffled[start:start + size]))
        start += size
    out.sort(key=lambda part: part[0])
    return out


def generate_tree(spec: TreeSpec, seed: int) -> PartitionTree:
    """Deterministically generate a valid partition tree for the spec."""
    labels = domain_labels(spec.domain_size)
    rng = SplitMix64(seed)
    level_classes: list[list[list[int]]] = [[list(range(spec.domain_size))]]
    child_positions: list[list[list[int]]] = []
    for target in spec.branching[1:]:
        current = level_classes[-1]
        counts = _plan_splits([len(c) for c in current], target)
        nxt: list[list[int]] = []
        positions: list[list[int]] = []
        for cls, count in zip(current, counts):
            parts = _split_class(cls, count, rng)
            positions.append(list(range(len(nxt), len(nxt) + len(parts))))
            nxt.extend(parts)
        level_classes.append(nxt)
        child_positions.append(positions)

    def make(level: int, position: int) -> TreeNode:
        members = frozenset(labels[i] for i in level_classes[level][position])
        if level == spec.levels - 1:
            return TreeNode(members, level, ())
        children = tuple(
            make(level + 1, child) for child in child_positions[level][position]
        )
        return TreeNode(members, level, children)

    return PartitionTree(labels, tuple(spec.level_alphas), make(0, 0))


def generate_records(tree: PartitionTree, spec: DatasetSpec
                     ) -> list[FuzzyRecord]:
    """Uniform k-subset records over the tree's domain, ids r000001-style."""
    n = len(tree.labels)
    if spec.values_per_record > n:
        raise InfeasibleSpec(
            f"cannot draw {spec.values_per_record} distinct values from a "
            f"{n}-label domain"
        )
    width = max(6, len(str(spec.record_count)))
    records = []
    for i in range(spec.record_count):
        rng = record_stream(spec.seed, i)
        picked = rng.sample_indices(n, spec.values_per_record)
        records.append(
            FuzzyRecord(
                frozenset(tree.labels[j] for j in picked),
                f"r{i + 1:0{width}d}",
            )
        )
    return records
