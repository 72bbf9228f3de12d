"""Per-pattern statistics shared by the rule-family learners.

For every instantiated pattern key the table stores how many training
instances carrying that key were partitions and non-partitions, and which
instances they were.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from bunsetsukit.corpus import Instance
from bunsetsukit.errors import ArgumentError
from bunsetsukit.patterns import (
    N_TEMPLATES,
    PatternKey,
    PatternTemplate,
    Values,
    templates,
    window_values,
)

logger = logging.getLogger(__name__)


def majority(partitions: int, non_partitions: int, default: bool) -> bool:
    """Majority label of the counts; ``default`` on a tie."""
    if partitions == non_partitions:
        return default
    return partitions > non_partitions


class RuleStats(NamedTuple):
    """Counts and covered examples of one pattern key.

    ``category`` is the majority label; on a count tie it is the table's
    default category.  ``share`` is the majority share as a float; it orders
    and ties rules exactly like ``probability`` below 2**26 training instances.
    """

    count_partition: int
    count_non_partition: int
    example_ids: frozenset[int]
    category: bool
    frequency: int
    share: float
    is_exclusive: bool

    @classmethod
    def from_counts(
        cls,
        count_partition: int,
        count_non_partition: int,
        example_ids: Iterable[int],
        default: bool,
    ) -> "RuleStats":
        """Derive the category, frequency, share and exclusivity."""
        frequency = count_partition + count_non_partition
        return cls(
            count_partition,
            count_non_partition,
            frozenset(example_ids),
            majority(count_partition, count_non_partition, default),
            frequency,
            max(count_partition, count_non_partition) / frequency,
            count_partition == 0 or count_non_partition == 0,
        )

    @property
    def probability(self) -> Fraction:
        """Share of the majority label, in (0.5, 1] or exactly 1/2 on a tie."""
        return Fraction(
            max(self.count_partition, self.count_non_partition), self.frequency
        )


@dataclass(frozen=True)
class MatchedRule:
    """A rule whose key matches a query instance."""

    template_id: int
    similarity: int
    key: PatternKey
    stats: RuleStats


@dataclass(frozen=True, eq=False)
class RuleTable:
    """Statistics for every key of every template over a training set."""

    maps: tuple[dict[Values, RuleStats], ...]
    training_instances: tuple[Instance, ...]
    default_category: bool
    partition_ids: frozenset[int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Index the partition examples for label votes."""
        object.__setattr__(
            self,
            "partition_ids",
            frozenset(
                i for i, inst in enumerate(self.training_instances) if inst.label
            ),
        )

    @property
    def n_rules(self) -> int:
        """Number of distinct instantiated keys over all templates."""
        return sum(len(m) for m in self.maps)

    def rules(self, template_id: int) -> dict[Values, RuleStats]:
        """Projected slot values to statistics, for one template."""
        return self.maps[template_id]

    def label_of(self, example_id: int) -> bool:
        """Gold label of a training instance."""
        label = self.training_instances[example_id].label
        assert label is not None
        return label

    def get(self, key: PatternKey) -> RuleStats | None:
        """Statistics of a key, or ``None`` if it never occurred."""
        return self.maps[key.template_id].get(key.values)

    def union_vote(self, stats: Iterable[RuleStats]) -> bool:
        """Majority gold label over the deduplicated examples of ``stats``.

        A tie or an empty union gives the default category.
        """
        example_ids = frozenset().union(*(s.example_ids for s in stats))
        partitions = len(example_ids & self.partition_ids)
        return majority(
            partitions, len(example_ids) - partitions, self.default_category
        )


def build_rule_table(instances: Sequence[Instance]) -> RuleTable:
    """Count every key of every template over the labeled instances.

    Raises:
        ArgumentError: if ``instances`` is empty or an instance has no label.

    """
    if not instances:
        msg = "cannot build a rule table from an empty training set"
        raise ArgumentError(msg)

    covered: list[dict[Values, list[int]]] = [{} for _ in range(N_TEMPLATES)]
    labels: list[bool] = []
    for example_id, instance in enumerate(instances):
        if instance.label is None:
            msg = f"training instance {example_id} has no label"
            raise ArgumentError(msg)
        labels.append(instance.label)
        for template_covered, values in zip(
            covered, window_values(instance), strict=True
        ):
            ids = template_covered.get(values)
            if ids is None:
                template_covered[values] = [example_id]
            else:
                ids.append(example_id)

    n_partitions = sum(labels)
    default = n_partitions >= len(instances) - n_partitions
    maps = []
    for template_covered in covered:
        rules: dict[Values, RuleStats] = {}
        for values, ids in template_covered.items():
            partitions = sum(labels[i] for i in ids)
            rules[values] = RuleStats.from_counts(
                partitions, len(ids) - partitions, ids, default
            )
        maps.append(rules)
    table = RuleTable(tuple(maps), tuple(instances), default)
    logger.info(
        "rule table: %d instances, %d distinct rules, default %s",
        len(instances),
        table.n_rules,
        "partition" if default else "non-partition",
    )
    return table


def matching_stats(
    table: RuleTable, instance: Instance
) -> list[tuple[PatternTemplate, RuleStats]]:
    """Template and statistics of every rule matching ``instance``."""
    matched = []
    for template, rules, values in zip(
        templates(), table.maps, window_values(instance), strict=True
    ):
        stats = rules.get(values)
        if stats is not None:
            matched.append((template, stats))
    return matched


def applicable_rules(table: RuleTable, instance: Instance) -> list[MatchedRule]:
    """Rules whose key matches ``instance``, ordered by template id."""
    values = window_values(instance)
    return [
        MatchedRule(
            template.template_id,
            template.similarity,
            PatternKey(template.template_id, values[template.template_id]),
            stats,
        )
        for template, stats in matching_stats(table, instance)
    ]


def exclusive_coverage(table: RuleTable, instances: Sequence[Instance]) -> Fraction:
    """Fraction of instances matched by at least one category-exclusive rule."""
    if not instances:
        return Fraction(0)
    covered = sum(
        any(stats.is_exclusive for _, stats in matching_stats(table, instance))
        for instance in instances
    )
    return Fraction(covered, len(instances))


def table_records(table: RuleTable) -> list[list[object]]:
    """Per-key count records ``[template_id, values, partitions, non-partitions]``."""
    return [
        [
            template_id,
            [list(v) for v in values],
            stats.count_partition,
            stats.count_non_partition,
        ]
        for template_id, rules in enumerate(table.maps)
        for values, stats in rules.items()
    ]


def restore_rule_table(
    instances: Sequence[Instance], records: Sequence[Sequence[object]]
) -> RuleTable:
    """Rebuild a table from its training instances and check stored counts.

    Example ids are re-derived by instantiating the instances; ``records``
    must agree with the rebuilt counts.

    Raises:
        ValueError: if a record disagrees with the rebuilt table.

    """
    table = build_rule_table(instances)
    if len(records) != table.n_rules:
        msg = f"model stores {len(records)} rules, instances give {table.n_rules}"
        raise ValueError(msg)
    for template_id, values, partitions, non_partitions in records:
        key = PatternKey(int(template_id), tuple(tuple(v) for v in values))
        stats = table.get(key)
        if stats is None or (stats.count_partition, stats.count_non_partition) != (
            partitions,
            non_partitions,
        ):
            msg = f"stored rule {key} does not match the embedded instances"
            raise ValueError(msg)
    return table
