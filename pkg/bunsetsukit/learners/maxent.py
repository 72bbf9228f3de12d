"""Maximum-entropy learner over the 152 instantiated pattern keys.

Features are (pattern key, category) pairs.  Pairs seen fewer than
``maxent_cutoff`` times in training are dropped.  Weights are fitted by
generalized iterative scaling; a slack feature fills every (instance,
category) up to the same active-feature total C.
"""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from bunsetsukit.config import LearnerParams
from bunsetsukit.corpus import Instance
from bunsetsukit.errors import ArgumentError
from bunsetsukit.patterns import PatternKey, instantiate_all
from bunsetsukit.registry import learner

logger = logging.getLogger(__name__)

CATEGORIES = (False, True)

Feature = tuple[PatternKey, bool]


@dataclass(frozen=True)
class _Design:
    """Active feature indices of every (instance, category), flattened."""

    index: tuple[np.ndarray, np.ndarray]
    owner: tuple[np.ndarray, np.ndarray]
    slack: tuple[np.ndarray, np.ndarray]
    n_instances: int


def _design(
    key_lists: Sequence[list[PatternKey]],
    feature_ids: dict[Feature, int],
) -> tuple[_Design, int]:
    index: list[np.ndarray] = []
    owner: list[np.ndarray] = []
    active: list[np.ndarray] = []
    for category in CATEGORIES:
        ids: list[int] = []
        owners: list[int] = []
        for x, keys in enumerate(key_lists):
            for key in keys:
                f = feature_ids.get((key, category))
                if f is not None:
                    ids.append(f)
                    owners.append(x)
        index.append(np.asarray(ids, dtype=np.int64))
        owner.append(np.asarray(owners, dtype=np.int64))
        active.append(np.bincount(owner[-1], minlength=len(key_lists)))
    correction = max(1, int(max(a.max(initial=0) for a in active)))
    slack = tuple(np.maximum(correction - a, 0).astype(np.float64) for a in active)
    design = _Design(
        index=(index[0], index[1]),
        owner=(owner[0], owner[1]),
        slack=(slack[0], slack[1]),
        n_instances=len(key_lists),
    )
    return design, correction


def _probabilities(
    design: _Design, weights: np.ndarray, slack_weight: float
) -> tuple[np.ndarray, np.ndarray]:
    """P(non-partition | x) and P(partition | x) for every instance."""
    scores = [
        np.bincount(
            design.owner[c],
            weights=weights[design.index[c]],
            minlength=design.n_instances,
        )
        + slack_weight * design.slack[c]
        for c in (0, 1)
    ]
    norm = np.logaddexp(scores[0], scores[1])
    return np.exp(scores[0] - norm), np.exp(scores[1] - norm)


@learner(
    "max_entropy",
    "Maximum Entropy",
    "Exponential model over the 152 pattern keys, fitted by iterative scaling",
)
@dataclass(frozen=True, eq=False)
class MaxEntModel:
    """Feature weights of a two-category maximum-entropy model."""

    kind: ClassVar[str]

    features: tuple[Feature, ...]
    weights: np.ndarray
    cutoff: int
    correction: int
    slack_weight: float
    default_category: bool
    iterations: int
    converged: bool
    feature_ids: dict[Feature, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        """Index the features."""
        object.__setattr__(
            self, "feature_ids", {f: i for i, f in enumerate(self.features)}
        )

    @classmethod
    def train(
        cls, instances: Sequence[Instance], params: LearnerParams
    ) -> "MaxEntModel":
        """Fit weights by generalized iterative scaling.

        Raises:
            ArgumentError: on an empty or unlabeled training set.

        """
        if not instances:
            msg = "cannot train a maximum-entropy model on an empty training set"
            raise ArgumentError(msg)
        labels = []
        for i, instance in enumerate(instances):
            if instance.label is None:
                msg = f"training instance {i} has no label"
                raise ArgumentError(msg)
            labels.append(instance.label)

        key_lists = [instantiate_all(instance) for instance in instances]
        pair_counts: Counter[Feature] = Counter(
            (key, label)
            for keys, label in zip(key_lists, labels, strict=True)
            for key in keys
        )
        features = tuple(
            f for f, count in pair_counts.items() if count >= params.maxent_cutoff
        )
        feature_ids = {f: i for i, f in enumerate(features)}
        design, correction = _design(key_lists, feature_ids)
        n = len(instances)
        n_partitions = sum(labels)
        default = n_partitions >= n - n_partitions

        empirical = np.array([pair_counts[f] for f in features], dtype=np.float64) / n
        gold = np.asarray(labels, dtype=bool)
        empirical_slack = float(
            np.where(gold, design.slack[1], design.slack[0]).sum() / n
        )

        weights = np.zeros(len(features), dtype=np.float64)
        slack_weight = 0.0
        converged = False
        iterations = 0
        logger.info(
            "maxent: %d instances, %d features (cutoff %d), C=%d",
            n,
            len(features),
            params.maxent_cutoff,
            correction,
        )
        for iterations in range(1, params.maxent_max_iter + 1):
            p0, p1 = _probabilities(design, weights, slack_weight)
            expected = (
                np.bincount(
                    design.index[0],
                    weights=p0[design.owner[0]],
                    minlength=len(features),
                )
                + np.bincount(
                    design.index[1],
                    weights=p1[design.owner[1]],
                    minlength=len(features),
                )
            ) / n
            log_ratio = np.log(empirical) - np.log(
                np.maximum(expected, np.finfo(np.float64).tiny)
            )
            weights += log_ratio / correction
            step = float(np.abs(log_ratio).max(initial=0.0))

            # The slack constraint is unsatisfiable when no gold pair needs it.
            if empirical_slack > 0:
                expected_slack = float(
                    (p0 * design.slack[0] + p1 * design.slack[1]).sum() / n
                )
                slack_ratio = math.log(empirical_slack / expected_slack)
                slack_weight += slack_ratio / correction
                step = max(step, abs(slack_ratio))

            logger.debug("maxent iteration %d: max log ratio %.3g", iterations, step)
            if step < params.maxent_tolerance:
                converged = True
                break

        if not converged:
            logger.warning(
                "maxent did not converge within %d iterations", params.maxent_max_iter
            )
        return cls(
            features=features,
            weights=weights,
            cutoff=params.maxent_cutoff,
            correction=correction,
            slack_weight=slack_weight,
            default_category=default,
            iterations=iterations,
            converged=converged,
        )

    def scores(self, instance: Instance) -> tuple[float, float]:
        """Unnormalized log scores of non-partition and partition."""
        keys = instantiate_all(instance)
        result = []
        for category in CATEGORIES:
            total = 0.0
            active = 0
            for key in keys:
                f = self.feature_ids.get((key, category))
                if f is not None:
                    total += float(self.weights[f])
                    active += 1
            total += self.slack_weight * max(self.correction - active, 0)
            result.append(total)
        return result[0], result[1]

    def probabilities(self, instance: Instance) -> tuple[float, float]:
        """P(non-partition | instance) and P(partition | instance)."""
        s0, s1 = self.scores(instance)
        norm = float(np.logaddexp(s0, s1))
        return math.exp(s0 - norm), math.exp(s1 - norm)

    def predict(self, instance: Instance) -> bool:
        """Predict whether the space is a partition."""
        return predict_max_entropy(self, instance)

    def expected_counts(
        self, instances: Sequence[Instance]
    ) -> dict[Feature, float]:
        """Model-expected count of every retained feature over ``instances``."""
        counts = dict.fromkeys(self.features, 0.0)
        for instance in instances:
            probs = self.probabilities(instance)
            for key in instantiate_all(instance):
                for category, p in zip(CATEGORIES, probs, strict=True):
                    if (key, category) in counts:
                        counts[key, category] += p
        return counts

    def empirical_counts(
        self, instances: Sequence[Instance]
    ) -> dict[Feature, int]:
        """Observed count of every retained feature over labeled ``instances``."""
        counts = dict.fromkeys(self.features, 0)
        for instance in instances:
            for key in instantiate_all(instance):
                if (key, instance.label) in counts:
                    counts[key, bool(instance.label)] += 1
        return counts

    def to_dict(self) -> dict[str, Any]:
        """Serializable form."""
        return {
            "cutoff": self.cutoff,
            "correction": self.correction,
            "slack_weight": self.slack_weight,
            "default_category": self.default_category,
            "iterations": self.iterations,
            "converged": self.converged,
            "features": [
                [key.template_id, [list(v) for v in key.values], category, float(w)]
                for (key, category), w in zip(self.features, self.weights, strict=True)
            ],
        }

    @classmethod
    def from_dict(
        cls, data: dict[str, Any], instances: Sequence[Instance]
    ) -> "MaxEntModel":
        """Restore from ``to_dict`` output."""
        features = tuple(
            (PatternKey(int(t), tuple(tuple(v) for v in values)), bool(category))
            for t, values, category, _ in data["features"]
        )
        weights = np.array([w for *_, w in data["features"]], dtype=np.float64)
        return cls(
            features=features,
            weights=weights,
            cutoff=int(data["cutoff"]),
            correction=int(data["correction"]),
            slack_weight=float(data["slack_weight"]),
            default_category=bool(data["default_category"]),
            iterations=int(data["iterations"]),
            converged=bool(data["converged"]),
        )


def predict_max_entropy(model: MaxEntModel, instance: Instance) -> bool:
    """The more probable category; an exact tie gives the default category."""
    s0, s1 = model.scores(instance)
    if s0 == s1:
        return model.default_category
    return s1 > s0
