"""Rule-family learners over the 152 patterns.

All four share one RuleTable and differ only in how they pick among the
rules that match a query:

- example_based: the rules of highest similarity, majority over their examples
- decision_list: the first rule in probability-then-frequency order
- method1: every rule of highest probability, majority over their examples
- method2: as method1, narrowed to the highest similarity, after dropping
  frequency-1 category-exclusive rules when sturdier exclusive rules exist
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, ClassVar

from bunsetsukit.config import LearnerParams
from bunsetsukit.corpus import Instance
from bunsetsukit.patterns import (
    PatternKey,
    Values,
    describe_key,
    similarity_tiers,
    window_values,
)
from bunsetsukit.registry import learner
from bunsetsukit.rulebase import (
    RuleTable,
    build_rule_table,
    matching_stats,
    restore_rule_table,
    table_records,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RuleModel:
    """Shared state of the rule-family learners: one RuleTable."""

    kind: ClassVar[str]

    table: RuleTable

    @classmethod
    def train(
        cls, instances: Sequence[Instance], params: LearnerParams
    ) -> "RuleModel":
        """Build the rule table over the labeled instances."""
        return cls(build_rule_table(instances))

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        """Serializable form; the instances themselves live in the container."""
        return {
            "default_category": self.table.default_category,
            "rules": table_records(self.table),
        }

    @classmethod
    def from_dict(
        cls, data: dict[str, Any], instances: Sequence[Instance]
    ) -> "RuleModel":
        """Restore from ``to_dict`` output and the embedded instances."""
        table = restore_rule_table(instances, data["rules"])
        if table.default_category != data["default_category"]:
            msg = "stored default category does not match the embedded instances"
            raise ValueError(msg)
        return cls(table)


@learner(
    "example_based",
    "Example-Based",
    "Majority over the training examples matched at the highest similarity",
    rule_family=True,
)
class ExampleBasedModel(RuleModel):
    """Use the most similar examples."""

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_example_based(self, instance)


def predict_example_based(model: RuleModel, instance: Instance) -> bool:
    """Vote among every example matched by a rule of maximum similarity.

    Templates are tried from the highest similarity down, stopping at the
    first similarity with a match.  No applicable rule gives the table's
    default category.
    """
    table = model.table
    values = window_values(instance)
    for _, template_ids in similarity_tiers():
        matched = [
            stats
            for stats in (table.maps[t].get(values[t]) for t in template_ids)
            if stats is not None
        ]
        if matched:
            return table.union_vote(matched)
    return table.default_category


@dataclass(frozen=True)
class DecisionListEntry:
    """One ranked rule of a decision list."""

    key: PatternKey
    category: bool
    probability: Fraction
    frequency: int


def _rank_entries(table: RuleTable) -> tuple[DecisionListEntry, ...]:
    ranked: list[tuple[float, int, int, Values]] = sorted(
        (-stats.share, -stats.frequency, template_id, values)
        for template_id, rules in enumerate(table.maps)
        for values, stats in rules.items()
    )
    entries = []
    for _, _, template_id, values in ranked:
        stats = table.maps[template_id][values]
        entries.append(
            DecisionListEntry(
                PatternKey(template_id, values),
                stats.category,
                stats.probability,
                stats.frequency,
            )
        )
    return tuple(entries)


@learner(
    "decision_list",
    "Decision List",
    "First applicable rule in probability-then-frequency order",
    rule_family=True,
)
class DecisionListModel(RuleModel):
    """Rules ranked by probability, then frequency, then template id and values."""

    @cached_property
    def entries(self) -> tuple[DecisionListEntry, ...]:
        """The ranked list, best rule first."""
        return _rank_entries(self.table)

    @cached_property
    def ranks(self) -> dict[PatternKey, int]:
        """Zero-based rank of every key."""
        return {entry.key: i for i, entry in enumerate(self.entries)}

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_decision_list(self, instance)


def predict_decision_list(model: RuleModel, instance: Instance) -> bool:
    """Category of the first list entry whose key matches the instance.

    At most one key per template matches, so the first entry a scan from the
    top would reach is the match of least (-probability, -frequency,
    template id).
    """
    first = min(
        (
            (-stats.share, -stats.frequency, template.template_id, stats.category)
            for template, stats in matching_stats(model.table, instance)
        ),
        default=None,
    )
    if first is None:
        return model.table.default_category
    return first[3]


def format_decision_list(model: DecisionListModel, limit: int | None = None) -> str:
    """Ranked rules as ``Pattern => Partition 76.9% (10/13), Freq. 13`` lines."""
    entries = model.entries if limit is None else model.entries[:limit]
    lines = []
    for rank, entry in enumerate(entries, start=1):
        category = "Partition" if entry.category else "Non-partition"
        majority = entry.probability * entry.frequency
        lines.append(
            f"{rank}\t{describe_key(entry.key)} => {category} "
            f"{float(entry.probability) * 100:.1f}% "
            f"({majority}/{entry.frequency}), Freq. {entry.frequency}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


@learner(
    "method1",
    "Method 1",
    "Majority over the examples of every highest-probability rule",
    rule_family=True,
)
class Method1Model(RuleModel):
    """Use all category-exclusive (or otherwise highest-probability) rules."""

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_method1(self, instance)


def predict_method1(model: RuleModel, instance: Instance) -> bool:
    """Vote among every example covered by a rule of maximum probability.

    Examples covered by several rules count once; the vote counts their gold
    labels.
    """
    matched = [stats for _, stats in matching_stats(model.table, instance)]
    if not matched:
        return model.table.default_category
    best = max(stats.share for stats in matched)
    return model.table.union_vote(s for s in matched if s.share == best)


@learner(
    "method2",
    "Method 2",
    "Highest-probability rules narrowed by similarity, frequency-1 "
    "exclusive rules dropped first",
    rule_family=True,
)
class Method2Model(RuleModel):
    """Use category-exclusive rules with the highest similarity."""

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_method2(self, instance)


def predict_method2(model: RuleModel, instance: Instance) -> bool:
    """Highest probability, then highest similarity, then an example vote.

    When an exclusive rule of frequency above one applies, every exclusive
    rule of frequency one is removed first.
    """
    matched = matching_stats(model.table, instance)
    if not matched:
        return model.table.default_category
    if any(s.is_exclusive and s.frequency > 1 for _, s in matched):
        matched = [
            (t, s) for t, s in matched if not (s.is_exclusive and s.frequency == 1)
        ]
    assert matched, "a sturdier exclusive rule always survives the elimination"

    best_share = max(s.share for _, s in matched)
    top = [(t, s) for t, s in matched if s.share == best_share]
    best_similarity = max(t.similarity for t, _ in top)
    narrowed = [s for t, s in top if t.similarity == best_similarity]
    if len(narrowed) == 1:
        return narrowed[0].category
    return model.table.union_vote(narrowed)
