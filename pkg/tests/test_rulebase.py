"""Tests for the shared rule table."""

from fractions import Fraction

import pytest

from bunsetsukit.corpus import Corpus, Instance, Morpheme, corpus_instances
from bunsetsukit.errors import ArgumentError
from bunsetsukit.patterns import enumerate_templates, instantiate_all
from bunsetsukit.rulebase import (
    RuleStats,
    applicable_rules,
    build_rule_table,
    exclusive_coverage,
    majority,
    restore_rule_table,
    table_records,
)
from bunsetsukit.synthetic import SyntheticConfig, generate_synthetic

PAD = Morpheme("pad", "Pad", "Pad")


def _instance(left_word: str, label: bool | None) -> Instance:
    left = Morpheme(left_word, "Noun", "NormalNoun")
    return Instance(PAD, left, Morpheme("wo", "Particle", "CaseParticle"), PAD, label)


def test_rule_stats_properties() -> None:
    """Frequency, probability and exclusivity follow from the counts."""
    stats = RuleStats.from_counts(10, 3, range(13), False)
    assert stats.category is True
    assert stats.frequency == 13
    assert stats.probability == Fraction(10, 13)
    assert stats.share == 10 / 13
    assert not stats.is_exclusive
    assert RuleStats.from_counts(0, 4, range(4), True).is_exclusive
    assert RuleStats.from_counts(2, 2, range(4), False).category is False


def test_share_orders_like_probability() -> None:
    """Float shares tie and order exactly as the fractions do."""
    pairs = [(p, n) for p in range(1, 40) for n in range(40) if p >= n]
    stats = [RuleStats.from_counts(p, n, (), True) for p, n in pairs]
    by_share = sorted(stats, key=lambda s: (s.share, s.count_partition))
    by_fraction = sorted(stats, key=lambda s: (s.probability, s.count_partition))
    assert by_share == by_fraction
    exact = [(s.share, s.probability) for s in stats]
    for share_a, fraction_a in exact[::5]:
        for share_b, fraction_b in exact:
            assert (share_a == share_b) is (fraction_a == fraction_b)


def test_counts_match_brute_force(small_corpus: Corpus) -> None:
    """Every stored count equals a direct rescan of the training instances."""
    instances = corpus_instances(small_corpus)
    table = build_rule_table(instances)
    keys = [instantiate_all(instance) for instance in instances]
    for template in enumerate_templates()[::7]:
        tid = template.template_id
        for values, stats in table.rules(tid).items():
            covered = [i for i, k in enumerate(keys) if k[tid].values == values]
            assert stats.example_ids == frozenset(covered)
            assert stats.count_partition == sum(
                bool(instances[i].label) for i in covered
            )
            assert stats.frequency == len(covered)


def test_every_instance_is_covered_by_every_template(small_corpus: Corpus) -> None:
    """Each training instance contributes one key to each template."""
    instances = corpus_instances(small_corpus)
    table = build_rule_table(instances)
    for tid in range(152):
        assert sum(s.frequency for s in table.rules(tid).values()) == len(instances)


def test_training_instance_matches_all_templates(small_corpus: Corpus) -> None:
    """A training instance finds an applicable rule in all 152 templates."""
    instances = corpus_instances(small_corpus)
    table = build_rule_table(instances)
    rules = applicable_rules(table, instances[0])
    assert [r.template_id for r in rules] == list(range(152))
    assert all(0 in r.stats.example_ids for r in rules)


def test_unseen_query_matches_no_rule(small_corpus: Corpus) -> None:
    """A query sharing no tag with the training set matches nothing."""
    table = build_rule_table(corpus_instances(small_corpus))
    stranger = Morpheme("zzz", "Unknown", "Unknown")
    query = Instance(stranger, stranger, stranger, stranger)
    assert applicable_rules(table, query) == []


def test_tie_category_is_default() -> None:
    """A key seen once with each label takes the table's default category."""
    instances = [_instance("a", True), _instance("a", False), _instance("b", True)]
    table = build_rule_table(instances)
    assert table.default_category is True
    stats = applicable_rules(table, instances[0])
    tied = [r for r in stats if r.stats.frequency == 2 and not r.stats.is_exclusive]
    assert tied
    assert all(r.stats.category is True for r in tied)
    assert all(r.stats.probability == Fraction(1, 2) for r in tied)


def test_default_category_on_exact_tie() -> None:
    """An evenly split training set defaults to partition."""
    table = build_rule_table([_instance("a", True), _instance("b", False)])
    assert table.default_category is True


def test_majority() -> None:
    """Majority with a default on ties and on no counts."""
    assert majority(2, 1, False) is True
    assert majority(1, 1, False) is False
    assert majority(0, 0, True) is True


def test_union_vote_counts_shared_examples_once() -> None:
    """Examples covered by several rules vote once."""
    instances = [_instance("a", True), _instance("b", False), _instance("c", False)]
    table = build_rule_table(instances)
    assert table.default_category is False
    shared = RuleStats.from_counts(1, 0, [0], False)
    overlapping = RuleStats.from_counts(1, 1, [0, 1], False)
    assert table.union_vote([shared, shared, shared, overlapping]) is False
    assert table.union_vote([shared, RuleStats.from_counts(1, 0, [0], False)])
    assert table.union_vote([]) is False


def test_empty_training_set() -> None:
    """No instances is an argument error."""
    with pytest.raises(ArgumentError, match="empty"):
        build_rule_table([])


def test_unlabeled_training_instance() -> None:
    """An instance without a label is an argument error."""
    with pytest.raises(ArgumentError, match="no label"):
        build_rule_table([_instance("a", True), _instance("b", None)])


def test_exclusive_coverage_matches_recount() -> None:
    """Coverage equals a direct count of instances hit by an exclusive rule."""
    corpus = generate_synthetic(SyntheticConfig(n_sentences=40, noise=0.2), 3)
    test = generate_synthetic(SyntheticConfig(n_sentences=20, noise=0.2), 4)
    table = build_rule_table(corpus_instances(corpus))
    queries = corpus_instances(test)
    expected = 0
    for query in queries:
        for key in instantiate_all(query):
            stats = table.get(key)
            if stats is not None and (
                stats.count_partition == 0 or stats.count_non_partition == 0
            ):
                expected += 1
                break
    assert exclusive_coverage(table, queries) == Fraction(expected, len(queries))
    assert exclusive_coverage(table, []) == 0


def test_restore_round_trip(small_corpus: Corpus) -> None:
    """A table rebuilt from its records has the same rules."""
    instances = corpus_instances(small_corpus)
    table = build_rule_table(instances)
    restored = restore_rule_table(instances, table_records(table))
    assert restored.maps == table.maps
    assert restored.default_category == table.default_category


def test_restore_detects_tampering(small_corpus: Corpus) -> None:
    """Records that disagree with the instances are rejected."""
    instances = corpus_instances(small_corpus)
    records = table_records(build_rule_table(instances))
    records[0][2] = 10**6
    with pytest.raises(ValueError, match="does not match"):
        restore_rule_table(instances, records)
