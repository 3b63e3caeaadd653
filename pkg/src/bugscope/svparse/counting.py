"""Node-kind histograms over parsed trees."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping

from .nodes import AstTree, NodeKind

__all__ = ["NodeHistogram", "count_nodes"]


class NodeHistogram(dict):
    """Mapping of node kind name to non-negative count.

    Plain dict with str keys so it serializes to JSON as-is. Missing kinds
    read as zero.
    """

    def __missing__(self, key: str) -> int:
        return 0

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "NodeHistogram":
        return cls({k: int(v) for k, v in sorted(counts.items()) if v})

    def total(self) -> int:
        return sum(self.values())

    def merged(self, other: "NodeHistogram") -> "NodeHistogram":
        acc = Counter(self)
        acc.update(other)
        return NodeHistogram.from_counts(acc)


def count_nodes(trees: AstTree | Iterable[AstTree]) -> NodeHistogram:
    """Count nodes of every kind across one or more trees."""
    if isinstance(trees, AstTree):
        trees = [trees]
    counts: Counter[str] = Counter()
    for tree in trees:
        for node in tree.walk():
            counts[node.kind.value] += 1
    return NodeHistogram.from_counts(counts)


# Reporting categories for fix characterization. ContinuousAssign is kept
# separate from the assignment bucket unless merge_continuous_assign is set.
CATEGORY_ORDER = ("m", "i", "a_ff", "a_c", "gen", "ca", "co", "t", "as")

_BASE_CATEGORY_MAP: dict[str, str] = {
    NodeKind.MODULE_DECLARATION.value: "m",
    NodeKind.HIERARCHY_INSTANTIATION.value: "i",
    NodeKind.ALWAYS_FF_BLOCK.value: "a_ff",
    NodeKind.ALWAYS_COMB_BLOCK.value: "a_c",
    NodeKind.GENERATE_CONSTRUCT.value: "gen",
    NodeKind.CASE_STATEMENT.value: "ca",
    NodeKind.CONDITIONAL_STATEMENT.value: "co",
    NodeKind.CONDITIONAL_EXPRESSION.value: "t",
    NodeKind.BLOCKING_ASSIGNMENT.value: "as",
    NodeKind.NON_BLOCKING_ASSIGNMENT.value: "as",
}


def category_map(merge_continuous_assign: bool = False) -> dict[str, str]:
    """Node-kind name to report category. Unmapped kinds are unreported."""
    mapping = dict(_BASE_CATEGORY_MAP)
    if merge_continuous_assign:
        mapping[NodeKind.CONTINUOUS_ASSIGN.value] = "as"
    return mapping
