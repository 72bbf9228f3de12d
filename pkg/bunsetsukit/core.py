"""Training, prediction and learning-set/test-set experiments.

Learner kinds are resolved through the registry.
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import bunsetsukit.learners  # noqa: F401  (registers the learners)
from bunsetsukit.config import DEFAULT_PARAMS, LearnerParams
from bunsetsukit.corpus import (
    Corpus,
    Instance,
    Sentence,
    corpus_instances,
    extract_instances,
)
from bunsetsukit.errors import ArgumentError
from bunsetsukit.evaluation import SPLITS, EvalReport, score
from bunsetsukit.learners.rules import RuleModel
from bunsetsukit.registry import Model, expand_kinds, get_learner
from bunsetsukit.rulebase import exclusive_coverage

logger = logging.getLogger(__name__)

# Kinds whose table rows carry the exclusive-rule coverage ratio.
COVERAGE_KINDS = frozenset({"method1", "method2"})


@dataclass(frozen=True)
class Learner:
    """A trained model of one kind, with the params and statistics of its run."""

    kind: str
    model: Model
    params: LearnerParams = DEFAULT_PARAMS
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentRow:
    """One (kind, split) cell of a comparison; ``report`` is None on failure."""

    kind: str
    split: str
    report: EvalReport | None = None
    error: str | None = None


def _instances(data: Corpus | Sequence[Instance]) -> list[Instance]:
    if isinstance(data, Corpus):
        return corpus_instances(data)
    return list(data)


def _metadata(model: Model, n_instances: int) -> dict[str, Any]:
    metadata: dict[str, Any] = {"n_training_instances": n_instances}
    table = getattr(model, "table", None)
    if table is not None:
        metadata["n_rules"] = table.n_rules
    for name in ("iterations", "converged", "n_nodes"):
        if hasattr(model, name):
            metadata[name] = getattr(model, name)
    features = getattr(model, "features", None)
    if features is not None:
        metadata["n_features"] = len(features)
    return metadata


def train(
    kind: str,
    data: Corpus | Sequence[Instance],
    params: LearnerParams | None = None,
) -> Learner:
    """Train a learner of ``kind`` on a labeled corpus or instance list.

    Raises:
        UnknownLearnerError: if ``kind`` is not registered.
        ArgumentError: if there is no labeled instance to learn from.

    """
    info = get_learner(kind)
    params = params or DEFAULT_PARAMS
    instances = _instances(data)
    if not instances:
        msg = f"cannot train {kind}: the training data has no spaces"
        raise ArgumentError(msg)
    logger.info("training %s on %d instances", kind, len(instances))
    model = info.cls.train(instances, params)
    metadata = _metadata(model, len(instances))
    logger.info(
        "trained %s: %s",
        kind,
        ", ".join(f"{k}={v}" for k, v in sorted(metadata.items())),
    )
    return Learner(kind, model, params, metadata)


def predict(learner: Learner, instance: Instance) -> bool:
    """Whether a partition mark goes into the space of ``instance``."""
    return learner.model.predict(instance)


def predict_sentence(learner: Learner, sentence: Sentence) -> Sentence:
    """The sentence with its partition flags replaced by predictions."""
    return sentence.with_boundaries(
        learner.model.predict(instance) for instance in extract_instances(sentence)
    )


def predict_corpus(
    learner: Learner, corpus: Corpus, max_workers: int | None = None
) -> Corpus:
    """Predict every sentence of ``corpus`` in a thread pool, keeping order."""
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        sentences = list(
            pool.map(lambda s: predict_sentence(learner, s), corpus.sentences)
        )
    return Corpus(tuple(sentences), corpus.provenance)


def _train_or_error(
    kind: str, instances: Sequence[Instance], params: LearnerParams
) -> Learner | str:
    try:
        return train(kind, instances, params)
    except Exception as e:
        logger.error("training %s failed: %s", kind, e)
        return f"{type(e).__name__}: {e}"


def _evaluate_split(learner: Learner, instances: Sequence[Instance]) -> EvalReport:
    predictions = [learner.model.predict(instance) for instance in instances]
    report = score(predictions, [bool(instance.label) for instance in instances])
    if learner.kind in COVERAGE_KINDS and isinstance(learner.model, RuleModel):
        report = report.with_coverage(
            exclusive_coverage(learner.model.table, instances)
        )
    return report


def run_experiment(
    learning: Corpus,
    test: Corpus,
    kinds: Iterable[str],
    params: LearnerParams | None = None,
    max_workers: int | None = None,
) -> list[ExperimentRow]:
    """Train each kind on ``learning`` and score it on both corpora.

    Kinds train in parallel.  A kind whose training fails yields rows with
    an error instead of a report; the other kinds are unaffected.  Rows come
    out in table order of kinds, learning split before test split.

    Raises:
        ArgumentError: if either corpus has no spaces.
        UnknownLearnerError: if a kind is not registered.

    """
    params = params or DEFAULT_PARAMS
    ordered = expand_kinds(list(kinds))
    splits = {"learning": corpus_instances(learning), "test": corpus_instances(test)}
    for name, instances in splits.items():
        if not instances:
            msg = f"the {name} corpus has no spaces"
            raise ArgumentError(msg)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        trained = list(
            pool.map(
                lambda kind: _train_or_error(kind, splits["learning"], params),
                ordered,
            )
        )

    rows: list[ExperimentRow] = []
    for kind, outcome in zip(ordered, trained, strict=True):
        for split in SPLITS:
            if isinstance(outcome, str):
                rows.append(ExperimentRow(kind, split, error=outcome))
            else:
                rows.append(
                    ExperimentRow(kind, split, _evaluate_split(outcome, splits[split]))
                )
    return rows
