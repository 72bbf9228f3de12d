"""Tests for scoring and result tables."""

import itertools
import random
from fractions import Fraction

import pytest

from bunsetsukit.core import ExperimentRow
from bunsetsukit.corpus import Sentence
from bunsetsukit.errors import ArgumentError
from bunsetsukit.evaluation import (
    TSV_HEADER,
    EvalReport,
    combine_oracle,
    format_report,
    format_table,
    format_tsv,
    mark_errors,
    percent,
    score,
    table_rows,
)


def _comparison_fixture() -> tuple[list[bool], list[bool]]:
    """2502 correct, 62 missed and 205 spurious partitions."""
    gold = [True] * 2502 + [True] * 62 + [False] * 205 + [False] * 1000
    predicted = [True] * 2502 + [False] * 62 + [True] * 205 + [False] * 1000
    return predicted, gold


def test_reference_comparison_figures() -> None:
    """Recall 2502/2564 and precision 2502/2707, F by the harmonic mean."""
    report = score(*_comparison_fixture())
    assert report.recall == Fraction(2502, 2564)
    assert report.precision == Fraction(2502, 2707)
    assert percent(report.recall) == "97.58%"
    assert percent(report.precision) == "92.43%"
    assert f"{float(report.recall) * 100:.1f}" == "97.6"
    assert f"{float(report.precision) * 100:.1f}" == "92.4"
    assert report.f_measure == Fraction(5004, 5271)
    assert percent(report.f_measure) == "94.93%"


def test_perfect_predictions() -> None:
    """Predictions equal to gold score 100% everywhere."""
    gold = [True, False, True, False, False]
    report = score(gold, gold)
    assert report.recall == report.precision == report.f_measure == 1


def test_counts() -> None:
    """Counts are over partition decisions only."""
    report = score([True, True, False, False], [True, False, True, False])
    assert (
        report.n_spaces,
        report.n_gold_partitions,
        report.n_predicted_partitions,
        report.n_correct_partitions,
    ) == (4, 2, 2, 1)


@pytest.mark.parametrize(
    ("predicted", "gold", "recall", "precision", "f_measure"),
    [
        ([False, False], [False, False], 1, 1, 1),
        ([True, False], [False, False], 0, 0, 0),
        ([False, False], [True, False], 0, 0, 0),
    ],
)
def test_zero_denominators(
    predicted: list[bool],
    gold: list[bool],
    recall: int,
    precision: int,
    f_measure: int,
) -> None:
    """Degenerate inputs still give defined ratios."""
    report = score(predicted, gold)
    assert (report.recall, report.precision, report.f_measure) == (
        recall,
        precision,
        f_measure,
    )


def test_length_mismatch() -> None:
    """Predictions and gold must line up."""
    with pytest.raises(ArgumentError, match="3 predictions for 2 gold labels"):
        score([True, True, False], [True, False])


def test_ratio_properties() -> None:
    """Ratios stay in [0, 1]; F lies between the harmonic bounds."""
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 30)
        gold = [rng.random() < 0.4 for _ in range(n)]
        predicted = [rng.random() < 0.4 for _ in range(n)]
        report = score(predicted, gold)
        r, p, f = report.recall, report.precision, report.f_measure
        assert 0 <= r <= 1 and 0 <= p <= 1 and 0 <= f <= 1
        assert report.n_correct_partitions <= min(
            report.n_gold_partitions, report.n_predicted_partitions
        )
        if r > 0 and p > 0:
            assert min(r, p) <= f <= (r + p) / 2
            assert f * f <= r * p


def test_score_is_permutation_invariant() -> None:
    """Jointly shuffling predictions and gold leaves the report unchanged."""
    predicted, gold = _comparison_fixture()
    pairs = list(zip(predicted, gold, strict=True))
    random.Random(1).shuffle(pairs)
    shuffled_predicted, shuffled_gold = zip(*pairs, strict=True)
    assert score(list(shuffled_predicted), list(shuffled_gold)) == score(
        predicted, gold
    )


def test_combine_oracle() -> None:
    """The oracle is right wherever either system is right."""
    gold = [True, True, False, False]
    a = [True, False, True, False]
    b = [False, False, False, True]
    combined = combine_oracle(a, b, gold)
    assert combined == [True, False, False, False]
    for pa, pb, g in itertools.product([True, False], repeat=3):
        (c,) = combine_oracle([pa], [pb], [g])
        assert (c == g) == (pa == g or pb == g)


def test_mark_errors(tagged_sentence: Sentence) -> None:
    """Correct, missed and spurious marks render differently."""
    assert mark_errors(tagged_sentence, [False, True, False]) == "bun wo | kugiru ."
    assert mark_errors(tagged_sentence, [True, False, False]) == (
        "bun |WRONG wo |NEED kugiru ."
    )
    with pytest.raises(ArgumentError):
        mark_errors(tagged_sentence, [True])


def test_format_report() -> None:
    """The report lists counts and two-decimal percentages."""
    report = score(*_comparison_fixture()).with_coverage(Fraction(16864, 16983))
    text = format_report(report)
    assert "recall:    97.58% (2502/2564)" in text
    assert "precision: 92.43% (2502/2707)" in text
    assert "F-measure: 94.93%" in text
    assert "exclusive-rule coverage: 99.30%" in text


def _rows() -> list[ExperimentRow]:
    report = EvalReport(25814, 9000, 9100, 8900)
    return [
        ExperimentRow("decision_tree", "learning", report),
        ExperimentRow("decision_tree", "test", report),
        ExperimentRow(
            "method1", "learning", report.with_coverage(Fraction(993, 1000))
        ),
        ExperimentRow("max_entropy", "test", error="ArgumentError: boom"),
    ]


def test_format_table() -> None:
    """The text table has one line per row and the counts lines."""
    text = format_table(_rows())
    assert "Decision Tree" in text
    assert "Method 1" in text
    assert "99.30%" in text
    assert "failed: ArgumentError: boom" in text
    assert (
        "Learning set: The number of spaces between two morphemes is 25,814. "
        "The number of partitions is 9,000."
    ) in text


def test_table_rows() -> None:
    """Machine-readable rows carry two-decimal percentages and NA."""
    rows = table_rows(_rows())
    assert rows[0] == TSV_HEADER
    assert rows[1][:2] == ("decision_tree", "learning")
    assert rows[1][5] == "NA"
    assert rows[3][5] == "99.30"
    assert rows[4] == ("max_entropy", "test", "NA", "NA", "NA", "NA")
    assert format_tsv(_rows()).splitlines()[0].split("\t") == list(rows[0])
