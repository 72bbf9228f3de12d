"""Decision-tree learner over twelve window features.

The middle morphemes contribute major POS, minor POS, semantic code and
word; the outer morphemes contribute major and minor POS only (2 + 4 + 4 + 2).
Values seen fewer than ``tree_threshold`` times in training are replaced by
the shared OTHERS value before induction.  Splits are multiway and chosen by
gain ratio among attributes with at least average gain; subtrees are
replaced by leaves when that does not raise the pessimistic error estimate.
"""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Any, ClassVar

import numpy as np

from bunsetsukit.config import LearnerParams
from bunsetsukit.corpus import OTHERS, Instance
from bunsetsukit.errors import ArgumentError
from bunsetsukit.registry import learner

logger = logging.getLogger(__name__)

FEATURE_NAMES = (
    "far_left.major_pos",
    "far_left.minor_pos",
    "left.major_pos",
    "left.minor_pos",
    "left.semantic",
    "left.word",
    "right.major_pos",
    "right.minor_pos",
    "right.semantic",
    "right.word",
    "far_right.major_pos",
    "far_right.minor_pos",
)


def tree_features(instance: Instance) -> tuple[str, ...]:
    """The twelve raw feature values of an instance, in FEATURE_NAMES order."""
    fl, left, right, fr = instance.window
    return (
        fl.major_pos,
        fl.minor_pos,
        left.major_pos,
        left.minor_pos,
        left.semantic_token,
        left.word,
        right.major_pos,
        right.minor_pos,
        right.semantic_token,
        right.word,
        fr.major_pos,
        fr.minor_pos,
    )


def entropy(counts: np.ndarray) -> float:
    """Entropy in bits of a vector of class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _contingency(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Rows: distinct values; columns: (non-partition, partition) counts."""
    _, inverse = np.unique(values, return_inverse=True)
    table = np.zeros((int(inverse.max(initial=-1)) + 1, 2), dtype=np.int64)
    np.add.at(table, (inverse, labels.astype(np.int64)), 1)
    return table


def information_gain(values: np.ndarray, labels: np.ndarray) -> float:
    """Drop in label entropy from splitting on ``values``."""
    table = _contingency(values, labels)
    n = table.sum()
    if n == 0:
        return 0.0
    remainder = sum(row.sum() / n * entropy(row) for row in table)
    return entropy(table.sum(axis=0)) - remainder


def split_information(values: np.ndarray) -> float:
    """Entropy of the partition of the cases by value."""
    _, counts = np.unique(values, return_counts=True)
    return entropy(counts)


def gain_ratio(values: np.ndarray, labels: np.ndarray) -> float:
    """Information gain divided by split information (0 for a single value)."""
    split = split_information(values)
    if split == 0:
        return 0.0
    return information_gain(values, labels) / split


def _added_errors(n: float, errors: float, confidence: float) -> float:
    """Extra errors of a leaf's upper confidence bound, as C4.5 computes it."""
    if errors < 1e-6:
        return n * (1 - confidence ** (1 / n))
    if errors < 0.9999:
        base = n * (1 - confidence ** (1 / n))
        return base + errors * (_added_errors(n, 1.0, confidence) - base)
    if errors + 0.5 >= n:
        return 0.67 * (n - errors)
    z2 = NormalDist().inv_cdf(1 - confidence) ** 2
    upper = (
        errors
        + 0.5
        + z2 / 2
        + math.sqrt(z2 * ((errors + 0.5) * (1 - (errors + 0.5) / n) + z2 / 4))
    ) / (n + z2)
    return n * upper - errors


@dataclass
class TreeNode:
    """A leaf (``feature is None``) or a multiway test on one feature."""

    counts: tuple[int, int]
    category: bool
    feature: int | None = None
    children: dict[str, "TreeNode"] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        """Whether the node has no test."""
        return self.feature is None

    @property
    def n_nodes(self) -> int:
        """Size of the subtree."""
        return 1 + sum(child.n_nodes for child in self.children.values())

    def to_dict(self) -> dict[str, Any]:
        """Serializable form."""
        data: dict[str, Any] = {
            "counts": list(self.counts),
            "category": self.category,
        }
        if self.feature is not None:
            data["feature"] = self.feature
            data["children"] = {v: c.to_dict() for v, c in self.children.items()}
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TreeNode":
        """Restore from ``to_dict`` output."""
        return cls(
            counts=(int(data["counts"][0]), int(data["counts"][1])),
            category=bool(data["category"]),
            feature=data.get("feature"),
            children={
                v: cls.from_dict(c) for v, c in data.get("children", {}).items()
            },
        )


class _Builder:
    """Recursive C4.5-style induction over integer-coded features."""

    def __init__(
        self,
        codes: np.ndarray,
        labels: np.ndarray,
        names: list[list[str]],
        params: LearnerParams,
        default: bool,
    ) -> None:
        self.codes = codes
        self.labels = labels
        self.names = names
        self.params = params
        self.default = default

    def _leaf_category(self, counts: tuple[int, int]) -> bool:
        if counts[0] == counts[1]:
            return self.default
        return counts[1] > counts[0]

    def build(self, rows: np.ndarray) -> TreeNode:
        """Grow the subtree over the cases at ``rows``."""
        labels = self.labels[rows]
        n_part = int(labels.sum())
        counts = (len(rows) - n_part, n_part)
        node = TreeNode(counts, self._leaf_category(counts))
        if 0 in counts or len(rows) < 2 * self.params.tree_min_leaf:
            return node

        candidates: list[tuple[int, float, float]] = []
        for j in range(self.codes.shape[1]):
            values = self.codes[rows, j]
            branch_sizes = np.unique(values, return_counts=True)[1]
            if (branch_sizes >= self.params.tree_min_leaf).sum() < 2:
                continue
            gain = information_gain(values, labels)
            if gain <= 1e-12:
                continue
            candidates.append((j, gain, gain / split_information(values)))
        if not candidates:
            return node

        average = sum(gain for _, gain, _ in candidates) / len(candidates)
        best, _, best_ratio = max(
            (c for c in candidates if c[1] >= average - 1e-12),
            key=lambda c: (c[2], -c[0]),
        )
        logger.debug(
            "split on %s (gain ratio %.4f) over %d cases",
            FEATURE_NAMES[best],
            best_ratio,
            len(rows),
        )
        node.feature = best
        column = self.codes[rows, best]
        for code in np.unique(column):
            value = self.names[best][int(code)]
            node.children[value] = self.build(rows[column == code])
        return node

    def prune(self, node: TreeNode) -> float:
        """Prune bottom-up; return the subtree's estimated errors."""
        n = sum(node.counts)
        leaf_errors = n - max(node.counts)
        as_leaf = leaf_errors + _added_errors(
            n, leaf_errors, self.params.tree_confidence
        )
        if node.is_leaf:
            return as_leaf
        as_subtree = sum(self.prune(child) for child in node.children.values())
        if as_leaf <= as_subtree + 0.1:
            node.feature = None
            node.children = {}
            return as_leaf
        return as_subtree


@learner(
    "decision_tree",
    "Decision Tree",
    "Gain-ratio decision tree over twelve window features",
)
@dataclass(frozen=True, eq=False)
class DecisionTreeModel:
    """An induced tree plus the per-feature values kept apart from OTHERS."""

    kind: ClassVar[str]

    root: TreeNode
    vocabularies: tuple[frozenset[str], ...]
    threshold: int
    default_category: bool

    @classmethod
    def train(
        cls,
        instances: Sequence[Instance],
        params: LearnerParams,
    ) -> "DecisionTreeModel":
        """Bucket rare values, grow the tree and optionally prune it.

        Raises:
            ArgumentError: on an empty or unlabeled training set.

        """
        if not instances:
            msg = "cannot train a decision tree on an empty training set"
            raise ArgumentError(msg)
        if any(instance.label is None for instance in instances):
            msg = "every training instance needs a label"
            raise ArgumentError(msg)

        raw = [tree_features(instance) for instance in instances]
        vocabularies = tuple(
            frozenset(
                value
                for value, count in Counter(row[j] for row in raw).items()
                if count >= params.tree_threshold
            )
            for j in range(len(FEATURE_NAMES))
        )
        names: list[list[str]] = []
        columns = []
        for j, vocabulary in enumerate(vocabularies):
            bucketed = [row[j] if row[j] in vocabulary else OTHERS for row in raw]
            ordered = sorted(set(bucketed))
            lookup = {value: i for i, value in enumerate(ordered)}
            names.append(ordered)
            columns.append([lookup[value] for value in bucketed])
        codes = np.array(columns, dtype=np.int64).T
        labels = np.array([bool(instance.label) for instance in instances])
        default = int(labels.sum()) >= len(labels) - int(labels.sum())

        builder = _Builder(codes, labels, names, params, default)
        root = builder.build(np.arange(len(instances)))
        grown = root.n_nodes
        if params.tree_prune:
            builder.prune(root)
        logger.info(
            "decision tree: %d instances, %d nodes grown, %d after pruning",
            len(instances),
            grown,
            root.n_nodes,
        )
        return cls(root, vocabularies, params.tree_threshold, default)

    def bucketed_features(
        self, instance: Instance
    ) -> tuple[str, ...]:
        """Feature values with rare or unseen ones replaced by OTHERS."""
        return tuple(
            value if value in vocabulary else OTHERS
            for value, vocabulary in zip(
                tree_features(instance), self.vocabularies, strict=True
            )
        )

    @property
    def n_nodes(self) -> int:
        """Number of nodes in the tree."""
        return self.root.n_nodes

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_decision_tree(self, instance)

    def format_tree(self) -> str:
        """Indented rendering of the tree."""
        lines: list[str] = []

        def walk(node: TreeNode, depth: int) -> None:
            for value, child in node.children.items():
                assert node.feature is not None
                test = f"{FEATURE_NAMES[node.feature]} = {value}"
                if child.is_leaf:
                    category = "partition" if child.category else "non-partition"
                    lines.append(f"{'|   ' * depth}{test}: {category} {child.counts}")
                else:
                    lines.append(f"{'|   ' * depth}{test}:")
                    walk(child, depth + 1)

        if self.root.is_leaf:
            category = "partition" if self.root.category else "non-partition"
            lines.append(f"{category} {self.root.counts}")
        else:
            walk(self.root, 0)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        """Serializable form."""
        return {
            "threshold": self.threshold,
            "default_category": self.default_category,
            "vocabularies": [sorted(v) for v in self.vocabularies],
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(
        cls,
        data: dict[str, Any],
        instances: Sequence[Instance],
    ) -> "DecisionTreeModel":
        """Restore from ``to_dict`` output."""
        return cls(
            root=TreeNode.from_dict(data["root"]),
            vocabularies=tuple(frozenset(v) for v in data["vocabularies"]),
            threshold=int(data["threshold"]),
            default_category=bool(data["default_category"]),
        )


def predict_decision_tree(model: DecisionTreeModel, instance: Instance) -> bool:
    """Descend the tree to a leaf and return its category.

    A value with no branch follows the OTHERS branch, and failing that the
    node's own majority category is the answer.
    """
    values = model.bucketed_features(instance)
    node = model.root
    while node.feature is not None:
        value = values[node.feature]
        child = node.children.get(value) or node.children.get(OTHERS)
        if child is None:
            return node.category
        node = child
    return node.category
