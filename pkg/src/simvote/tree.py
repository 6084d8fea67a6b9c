"""Partition trees: nested alpha-cut hierarchies over a categorical domain.

Every level of the tree is the partition induced by one distinct similarity
degree, ascending from the root (global minimum, a single class) to the
deepest level at 1.0.  Classes that do not split between adjacent levels are
materialized as pass-through nodes so the tree has uniform depth and the
alpha of a node is always a function of its recursion depth.

All types are immutable value objects; operations are pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import InvariantViolation, MalformedInput
from .matrix import (
    ALPHA_TOLERANCE,
    SimilarityMatrix,
    alpha_cut,
    check_label,
    distinct_levels,
)


@dataclass(frozen=True)
class TreeNode:
    """One equivalence class at one level; children refine it."""

    members: frozenset[str]
    level_index: int
    children: tuple[TreeNode, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise InvariantViolation("tree node has an empty class")
        if self.children:
            combined: set[str] = set()
            for child in self.children:
                if child.level_index != self.level_index + 1:
                    raise InvariantViolation(
                        f"child level {child.level_index} under level "
                        f"{self.level_index} node"
                    )
                if combined & child.members:
                    overlap = sorted(combined & child.members)
                    raise InvariantViolation(
                        f"sibling classes overlap on {overlap}"
                    )
                combined |= child.members
            if combined != self.members:
                raise InvariantViolation(
                    f"children of class {sorted(self.members)} partition "
                    f"{sorted(combined)} instead"
                )

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class PartitionTree:
    """Uniform-depth hierarchy of nested alpha-cut classes."""

    labels: tuple[str, ...]
    level_alphas: tuple[float, ...]
    root: TreeNode

    def __post_init__(self) -> None:
        if not self.labels:
            raise InvariantViolation("tree domain is empty")
        if not self.level_alphas:
            raise InvariantViolation("tree has no levels")
        for a, b in zip(self.level_alphas, self.level_alphas[1:]):
            if not b > a + ALPHA_TOLERANCE:
                raise InvariantViolation(
                    f"level alphas not strictly increasing: {a!r} -> {b!r}"
                )
        if self.level_alphas[-1] != 1.0:
            raise InvariantViolation(
                f"deepest level alpha is {self.level_alphas[-1]!r}, not 1.0"
            )
        if self.root.level_index != 0:
            raise InvariantViolation("root node must sit at level 0")
        if self.root.members != frozenset(self.labels):
            raise InvariantViolation("root class must equal the full domain")
        deepest = len(self.level_alphas) - 1
        for node in self.iter_nodes():
            if node.is_leaf and node.level_index != deepest:
                raise InvariantViolation(
                    f"leaf class {sorted(node.members)} at level "
                    f"{node.level_index}, expected uniform depth {deepest}"
                )

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def depth(self) -> int:
        return len(self.level_alphas)

    def iter_nodes(self) -> Iterator[TreeNode]:
        """Preorder traversal of every node."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def level_classes(self, level_index: int) -> list[frozenset[str]]:
        nodes = [n for n in self.iter_nodes() if n.level_index == level_index]
        return [n.members for n in nodes]


def sort_members(members: frozenset[str], index: dict[str, int]) -> list[str]:
    return sorted(members, key=index.__getitem__)


def build_partition_tree(m: SimilarityMatrix) -> PartitionTree:
    """Derive the tree of nested alpha-cut partitions from a matrix.

    One level per distinct similarity degree, ascending.  Raises
    NotTransitive (via alpha_cut) when some cut is not an equivalence
    relation.
    """
    levels = distinct_levels(m)
    partitions = [alpha_cut(m, a) for a in levels]

    def make(cls: frozenset[str], level: int) -> TreeNode:
        if level == len(levels) - 1:
            return TreeNode(cls, level, ())
        children = tuple(
            make(sub, level + 1)
            for sub in partitions[level + 1]
            if sub <= cls
        )
        return TreeNode(cls, level, children)

    return PartitionTree(m.labels, tuple(levels), make(partitions[0][0], 0))


def induced_similarity(t: PartitionTree) -> SimilarityMatrix:
    """Recover the matrix whose cuts produce this tree.

    s(x, y) is the alpha of the deepest level at which x and y still share
    a class; the diagonal lands on the deepest level, i.e. 1.0.
    """
    n = len(t.labels)
    idx = t.index
    values = [[None] * n for _ in range(n)]
    by_depth = sorted(t.iter_nodes(), key=lambda nd: -nd.level_index)
    for node in by_depth:
        alpha = t.level_alphas[node.level_index]
        members = [idx[label] for label in node.members]
        for i in members:
            for j in members:
                if values[i][j] is None:
                    values[i][j] = alpha
    return SimilarityMatrix(
        t.labels, tuple(tuple(row) for row in values)
    )


def _node_to_dict(node: TreeNode, index: dict[str, int]) -> dict:
    d: dict = {"members": sort_members(node.members, index)}
    if node.children:
        children = sorted(
            node.children, key=lambda c: min(index[l] for l in c.members)
        )
        d["children"] = [_node_to_dict(c, index) for c in children]
    return d


def serialize_tree(t: PartitionTree) -> str:
    """Emit the canonical JSON form (domain-ordered, two-space indent)."""
    doc = {
        "labels": list(t.labels),
        "level_alphas": list(t.level_alphas),
        "root": _node_to_dict(t.root, t.index),
    }
    return json.dumps(doc, indent=2) + "\n"


def _node_from_dict(raw: object, level: int, index: dict[str, int]) -> TreeNode:
    if not isinstance(raw, dict):
        raise MalformedInput(f"tree node at level {level} is not an object")
    members_raw = raw.get("members")
    if not isinstance(members_raw, list) or not members_raw:
        raise MalformedInput(
            f"tree node at level {level} needs a non-empty 'members' list"
        )
    members = set()
    for item in members_raw:
        label = check_label(item, f"node at level {level}")
        if label not in index:
            raise InvariantViolation(
                f"class member {label!r} is not in the domain"
            )
        if label in members:
            raise InvariantViolation(
                f"member {label!r} repeated within one class"
            )
        members.add(label)
    children_raw = raw.get("children", [])
    if not isinstance(children_raw, list):
        raise MalformedInput(f"'children' at level {level} is not a list")
    children = tuple(
        _node_from_dict(c, level + 1, index) for c in children_raw
    )
    children = tuple(
        sorted(children, key=lambda c: min(index[l] for l in c.members))
    )
    return TreeNode(frozenset(members), level, children)


def parse_tree(text: str) -> PartitionTree:
    """Parse the JSON tree format, validating every structural invariant."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"tree file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("tree file must hold a JSON object")
    labels_raw = doc.get("labels")
    if not isinstance(labels_raw, list) or not labels_raw:
        raise MalformedInput("'labels' must be a non-empty list")
    labels = tuple(check_label(l, "labels") for l in labels_raw)
    alphas_raw = doc.get("level_alphas")
    if not isinstance(alphas_raw, list) or not alphas_raw:
        raise MalformedInput("'level_alphas' must be a non-empty list")
    alphas = []
    for a in alphas_raw:
        if isinstance(a, bool) or not isinstance(a, (int, float)):
            raise MalformedInput(f"level alpha {a!r} is not a number")
        alphas.append(float(a))
    if "root" not in doc:
        raise MalformedInput("tree file is missing 'root'")
    index = {label: i for i, label in enumerate(labels)}
    root = _node_from_dict(doc["root"], 0, index)
    return PartitionTree(labels, tuple(alphas), root)


def render_tree(t: PartitionTree) -> str:
    """Human-readable indented rendering, one class per line."""
    lines: list[str] = []

    def walk(node: TreeNode) -> None:
        alpha = t.level_alphas[node.level_index]
        members = ", ".join(sort_members(node.members, t.index))
        lines.append("  " * node.level_index + f"[{alpha!r}] {members}")
        for child in sorted(
            node.children, key=lambda c: min(t.index[l] for l in c.members)
        ):
            walk(child)

    walk(t.root)
    return "\n".join(lines) + "\n"
