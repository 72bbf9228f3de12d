"""Learner registry for bunsetsukit.

Decorators and helpers for registering and discovering learning methods.
Every model class registers under its kind name; training, prediction and
model loading all dispatch through this table.
"""

import difflib
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any, Protocol, TypeVar

from bunsetsukit.config import LearnerParams
from bunsetsukit.corpus import Instance
from bunsetsukit.errors import UnknownLearnerError


class Model(Protocol):
    """What a registered model class provides."""

    kind: str

    @classmethod
    def train(
        cls, instances: Sequence[Instance], params: LearnerParams
    ) -> "Model": ...

    def predict(self, instance: Instance) -> bool: ...

    def to_dict(self) -> dict[str, Any]: ...

    @classmethod
    def from_dict(
        cls, data: dict[str, Any], instances: Sequence[Instance]
    ) -> "Model": ...


@dataclass
class LearnerInfo:
    """Metadata about a registered learner."""

    cls: type[Model]
    kind: str
    title: str
    description: str
    rule_family: bool = False


# Display order of the comparison tables.
KIND_ORDER: tuple[str, ...] = (
    "decision_tree",
    "max_entropy",
    "example_based",
    "decision_list",
    "method1",
    "method2",
)

_REGISTRY: dict[str, LearnerInfo] = {}

_M = TypeVar("_M", bound=type)


def learner(
    kind: str,
    title: str,
    description: str,
    *,
    rule_family: bool = False,
) -> Callable[[_M], _M]:
    """Register a model class as a learner of the given kind."""

    def decorator(cls: _M) -> _M:
        cls.kind = kind
        _REGISTRY[kind] = LearnerInfo(
            cls=cls,
            kind=kind,
            title=title,
            description=description,
            rule_family=rule_family,
        )
        return cls

    return decorator


def get_registry() -> dict[str, LearnerInfo]:
    """Return all registered learners."""
    return _REGISTRY


def get_learner(kind: str) -> LearnerInfo:
    """Look up a learner by kind.

    Raises:
        UnknownLearnerError: with close matches when ``kind`` is unknown.

    """
    info = _REGISTRY.get(kind)
    if info is None:
        close = difflib.get_close_matches(kind, list(_REGISTRY), n=3, cutoff=0.4)
        raise UnknownLearnerError(kind, close)
    return info


def learners_in_order() -> list[LearnerInfo]:
    """Return all learners in table order, unlisted ones last."""
    ordered = [_REGISTRY[k] for k in KIND_ORDER if k in _REGISTRY]
    ordered.extend(info for k, info in _REGISTRY.items() if k not in KIND_ORDER)
    return ordered


def expand_kinds(names: Sequence[str]) -> list[str]:
    """Resolve ``all`` and validate names, keeping table order."""
    if "all" in names:
        return [info.kind for info in learners_in_order()]
    for name in names:
        get_learner(name)
    wanted = set(names)
    return [info.kind for info in learners_in_order() if info.kind in wanted]
