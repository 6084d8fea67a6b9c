"""Shared builders for randomized test instances."""

from __future__ import annotations

from typing import Iterator

from simvote import FuzzyRecord, PartitionTree, TreeNode, TreeSpec, generate_tree
from simvote.rng import SplitMix64


def build_tree(labels, alphas, shape) -> PartitionTree:
    """Construct a tree from a nested (members, [children]) structure."""

    def node_of(spec, level):
        members, kids = spec
        return TreeNode(
            frozenset(members), level,
            tuple(node_of(k, level + 1) for k in kids),
        )

    return PartitionTree(tuple(labels), tuple(alphas), node_of(shape, 0))


def random_tree_spec(rng: SplitMix64, min_domain: int = 2,
                     max_domain: int = 64) -> TreeSpec:
    n = min_domain + rng.below(max_domain - min_domain + 1)
    levels = 2 + rng.below(4)
    shallow = rng.sample_indices(100, levels - 1)
    alphas = tuple(i / 100 for i in shallow) + (1.0,)
    branching = [1]
    for _ in range(levels - 1):
        prev = branching[-1]
        branching.append(prev + rng.below(n - prev + 1))
    if rng.below(10) < 7:
        branching[-1] = n  # mostly singleton leaves, sometimes multi-member
    return TreeSpec(n, alphas, tuple(branching))


def random_tree(rng: SplitMix64, min_domain: int = 2,
                max_domain: int = 64) -> PartitionTree:
    spec = random_tree_spec(rng, min_domain, max_domain)
    return generate_tree(spec, rng.next_u64())


def random_query(rng: SplitMix64, tree: PartitionTree,
                 max_size: int | None = None) -> FuzzyRecord:
    n = len(tree.labels)
    upper = n if max_size is None else min(max_size, n)
    k = 1 + rng.below(upper)
    picked = rng.sample_indices(n, k)
    return FuzzyRecord(frozenset(tree.labels[i] for i in picked))


def random_instances(seed: int, count: int, min_domain: int = 2,
                     max_domain: int = 64, max_query: int | None = None
                     ) -> Iterator[tuple[PartitionTree, FuzzyRecord]]:
    rng = SplitMix64(seed)
    for _ in range(count):
        tree = random_tree(rng, min_domain, max_domain)
        yield tree, random_query(rng, tree, max_query)


def relabel_tree(tree: PartitionTree, mapping: dict[str, str]) -> PartitionTree:
    """Rename every label; positions in the domain tuple are preserved."""

    def node_of(node: TreeNode) -> TreeNode:
        return TreeNode(
            frozenset(mapping[l] for l in node.members),
            node.level_index,
            tuple(node_of(c) for c in node.children),
        )

    labels = tuple(mapping[l] for l in tree.labels)
    return PartitionTree(labels, tree.level_alphas, node_of(tree.root))


def reorder_domain(tree: PartitionTree, order: list[int]) -> PartitionTree:
    """Permute the domain tuple (classes unchanged); changes canonical order."""
    labels = tuple(tree.labels[i] for i in order)
    return PartitionTree(labels, tree.level_alphas, tree.root)
