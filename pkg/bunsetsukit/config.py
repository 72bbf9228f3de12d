"""Training parameters and the parsed command line.

Parameters cascade: explicit overrides (command-line flags or a model file's
stored params) sit on top of the defaults in a ``ChainMap``.
"""

from collections import ChainMap
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from bunsetsukit.errors import ArgumentError
from bunsetsukit.synthetic import SyntheticConfig


@dataclass(frozen=True)
class LearnerParams:
    """Knobs of every learner.

    ``maxent_cutoff`` drops (feature, category) pairs seen fewer times than
    the cutoff; 12 mirrors the setting a limited maxent toolkit once needed.
    ``tree_threshold`` maps feature values seen fewer times than it to the
    shared OTHERS value.
    """

    maxent_cutoff: int = 1
    maxent_max_iter: int = 1000
    maxent_tolerance: float = 1e-6
    tree_threshold: int = 10
    tree_prune: bool = True
    tree_confidence: float = 0.25
    tree_min_leaf: int = 2

    def to_dict(self) -> dict[str, Any]:
        """Plain dict for model files."""
        return asdict(self)


DEFAULT_PARAMS = LearnerParams()


def resolve_params(overrides: Mapping[str, Any] | None = None) -> LearnerParams:
    """Layer ``overrides`` over the defaults and validate the result.

    ``None`` values in ``overrides`` mean "not given".  Unknown names raise.
    """
    given = {k: v for k, v in (overrides or {}).items() if v is not None}
    known = {f.name for f in fields(LearnerParams)}
    unknown = sorted(set(given) - known)
    if unknown:
        msg = f"unknown parameters: {', '.join(unknown)}"
        raise ArgumentError(msg)

    merged = ChainMap(given, asdict(DEFAULT_PARAMS))
    params = LearnerParams(**dict(merged))

    for name in ("maxent_cutoff", "maxent_max_iter", "tree_threshold"):
        if getattr(params, name) < 1:
            msg = f"{name} must be a positive integer, got {getattr(params, name)}"
            raise ArgumentError(msg)
    if params.tree_min_leaf < 1:
        msg = f"tree_min_leaf must be a positive integer, got {params.tree_min_leaf}"
        raise ArgumentError(msg)
    if params.maxent_tolerance <= 0:
        msg = f"maxent_tolerance must be positive, got {params.maxent_tolerance}"
        raise ArgumentError(msg)
    if not 0 < params.tree_confidence < 1:
        msg = f"tree_confidence must lie in (0, 1), got {params.tree_confidence}"
        raise ArgumentError(msg)
    return params


@dataclass(frozen=True)
class CliConfig:
    """Everything one command-line invocation needs."""

    subcommand: str
    corpus: Path | None = None
    learn: Path | None = None
    test: Path | None = None
    model: Path | None = None
    output: Path | None = None
    predicted: Path | None = None
    kinds: tuple[str, ...] = ()
    params: LearnerParams = field(default_factory=LearnerParams)
    synthetic: SyntheticConfig | None = None
    output_format: str = "text"
    show_errors: bool = False
    limit: int | None = None
    combine: Path | None = None
    render: bool = False
    seed: int = 0
