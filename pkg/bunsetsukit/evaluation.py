"""Scoring partition decisions and rendering comparison tables.

Only partition-positive decisions enter the scores: recall is the share of
gold partitions predicted, precision the share of predicted partitions that
are gold, and the F-measure their harmonic mean.  Ratios are exact
``Fraction`` values; they are rounded only for display.
"""

import dataclasses
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from bunsetsukit.corpus import Sentence
from bunsetsukit.errors import ArgumentError, UnknownLearnerError
from bunsetsukit.registry import get_learner

if TYPE_CHECKING:
    from bunsetsukit.core import ExperimentRow

SPLITS = ("learning", "test")
SPLIT_TITLES = {"learning": "Learning set", "test": "Test set"}
TSV_HEADER = ("method", "split", "f_measure", "recall", "precision", "coverage")


@dataclass(frozen=True)
class EvalReport:
    """Partition counts of one scoring run and the ratios derived from them.

    With no gold partitions recall is 1 when nothing was predicted and 0
    otherwise; precision with no predicted partitions is handled the same
    way.  The F-measure is 0 when recall and precision are both 0.
    """

    n_spaces: int
    n_gold_partitions: int
    n_predicted_partitions: int
    n_correct_partitions: int
    exclusive_coverage: Fraction | None = None

    @property
    def recall(self) -> Fraction:
        """Correct partitions over gold partitions."""
        if self.n_gold_partitions == 0:
            return Fraction(1 if self.n_predicted_partitions == 0 else 0)
        return Fraction(self.n_correct_partitions, self.n_gold_partitions)

    @property
    def precision(self) -> Fraction:
        """Correct partitions over predicted partitions."""
        if self.n_predicted_partitions == 0:
            return Fraction(1 if self.n_gold_partitions == 0 else 0)
        return Fraction(self.n_correct_partitions, self.n_predicted_partitions)

    @property
    def f_measure(self) -> Fraction:
        """Harmonic mean of recall and precision."""
        recall, precision = self.recall, self.precision
        if recall + precision == 0:
            return Fraction(0)
        return 2 * recall * precision / (recall + precision)

    def with_coverage(self, coverage: Fraction) -> "EvalReport":
        """Copy carrying an exclusive-rule coverage ratio."""
        return dataclasses.replace(self, exclusive_coverage=coverage)


def score(predictions: Sequence[bool], gold: Sequence[bool]) -> EvalReport:
    """Count partition decisions against gold labels.

    Raises:
        ArgumentError: if the two sequences differ in length.

    """
    if len(predictions) != len(gold):
        msg = f"{len(predictions)} predictions for {len(gold)} gold labels"
        raise ArgumentError(msg)
    n_gold = n_predicted = n_correct = 0
    for predicted, expected in zip(predictions, gold, strict=True):
        n_gold += bool(expected)
        n_predicted += bool(predicted)
        n_correct += bool(predicted) and bool(expected)
    return EvalReport(len(gold), n_gold, n_predicted, n_correct)


def combine_oracle(
    pred_a: Sequence[bool], pred_b: Sequence[bool], gold: Sequence[bool]
) -> list[bool]:
    """Decisions of an oracle that is right wherever either system is right."""
    if not len(pred_a) == len(pred_b) == len(gold):
        msg = "prediction and gold sequences differ in length"
        raise ArgumentError(msg)
    return [
        expected if expected in (a, b) else a
        for a, b, expected in zip(pred_a, pred_b, gold, strict=True)
    ]


def mark_errors(sentence: Sentence, predicted: Sequence[bool]) -> str:
    """Render a gold sentence against predicted flags.

    Correct partitions show as ``|``, missed ones as ``|NEED`` and spurious
    ones as ``|WRONG``.
    """
    if len(predicted) != sentence.n_spaces:
        msg = f"{len(predicted)} flags for a sentence with {sentence.n_spaces} spaces"
        raise ArgumentError(msg)
    parts = [sentence.morphemes[0].word]
    for expected, guess, morpheme in zip(
        sentence.boundaries, predicted, sentence.morphemes[1:], strict=True
    ):
        if expected and guess:
            parts.append("|")
        elif expected:
            parts.append("|NEED")
        elif guess:
            parts.append("|WRONG")
        parts.append(morpheme.word)
    return " ".join(parts)


def percent(ratio: Fraction) -> str:
    """A ratio as a percentage with two decimals."""
    return f"{float(ratio) * 100:.2f}%"


def format_report(report: EvalReport) -> str:
    """Counts and ratios of one report, one item per line."""
    lines = [
        f"spaces:              {report.n_spaces}",
        f"gold partitions:     {report.n_gold_partitions}",
        f"predicted partitions: {report.n_predicted_partitions}",
        f"correct partitions:  {report.n_correct_partitions}",
        f"recall:    {percent(report.recall)} "
        f"({report.n_correct_partitions}/{report.n_gold_partitions})",
        f"precision: {percent(report.precision)} "
        f"({report.n_correct_partitions}/{report.n_predicted_partitions})",
        f"F-measure: {percent(report.f_measure)}",
    ]
    if report.exclusive_coverage is not None:
        lines.append(f"exclusive-rule coverage: {percent(report.exclusive_coverage)}")
    return "\n".join(lines) + "\n"


def _title(kind: str) -> str:
    try:
        return get_learner(kind).title
    except UnknownLearnerError:
        return kind


def format_table(rows: Sequence["ExperimentRow"]) -> str:
    """Aligned method-by-split table, followed by the counts of each split."""
    header = (
        f"{'Method':<16} {'Set':<13} {'F-measure':>9} {'Recall':>9} "
        f"{'Precision':>9} {'Coverage':>9}"
    )
    lines = [header, "-" * len(header)]
    counts: dict[str, EvalReport] = {}
    for row in rows:
        split = SPLIT_TITLES.get(row.split, row.split)
        if row.report is None:
            lines.append(f"{_title(row.kind):<16} {split:<13} failed: {row.error}")
            continue
        counts.setdefault(row.split, row.report)
        report = row.report
        coverage = (
            "-"
            if report.exclusive_coverage is None
            else percent(report.exclusive_coverage)
        )
        lines.append(
            f"{_title(row.kind):<16} {split:<13} {percent(report.f_measure):>9} "
            f"{percent(report.recall):>9} {percent(report.precision):>9} "
            f"{coverage:>9}"
        )
    lines.append("")
    for split in sorted(counts, key=lambda s: (s not in SPLITS, s)):
        report = counts[split]
        lines.append(
            f"{SPLIT_TITLES.get(split, split)}: The number of spaces between two "
            f"morphemes is {report.n_spaces:,}. The number of partitions is "
            f"{report.n_gold_partitions:,}."
        )
    return "\n".join(lines) + "\n"


def _tsv_percent(ratio: Fraction | None) -> str:
    return "NA" if ratio is None else f"{float(ratio) * 100:.2f}"


def table_rows(rows: Sequence["ExperimentRow"]) -> list[tuple[str, ...]]:
    """Machine-readable rows: method, split, F, recall, precision, coverage."""
    out: list[tuple[str, ...]] = [TSV_HEADER]
    for row in rows:
        report = row.report
        if report is None:
            out.append((row.kind, row.split, "NA", "NA", "NA", "NA"))
            continue
        out.append(
            (
                row.kind,
                row.split,
                _tsv_percent(report.f_measure),
                _tsv_percent(report.recall),
                _tsv_percent(report.precision),
                _tsv_percent(report.exclusive_coverage),
            )
        )
    return out


def format_tsv(rows: Sequence["ExperimentRow"]) -> str:
    """``table_rows`` as tab-separated lines."""
    return "".join("\t".join(row) + "\n" for row in table_rows(rows))
