"""Seeded synthetic tagged corpora for tests and benchmarks.

The generator draws a lexicon (each word fixes its POS, minor POS and
semantic code), samples sentences from it and labels every space with a
latent rule over the adjacent POS tags.  The rule is written into the corpus
provenance as JSON so a test can see what it is learning.
"""

import json
import logging
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from bunsetsukit.corpus import Corpus, Morpheme, Sentence
from bunsetsukit.errors import ArgumentError

logger = logging.getLogger(__name__)


class BoundaryRule(str, Enum):
    """How spaces are labeled."""

    POS_TABLE = "pos-table"
    ALWAYS = "always"
    NEVER = "never"


@dataclass(frozen=True)
class SyntheticConfig:
    """Shape of a synthetic corpus.

    With ``rule=pos-table`` each (left major POS, left minor POS, right major
    POS) triple is drawn once as partition with probability
    ``partition_rate``.  ``noise`` then flips each label independently; with
    ``noise == 0`` the corpus has no conflicting duplicate windows.
    """

    n_sentences: int = 50
    min_length: int = 3
    max_length: int = 12
    n_major_pos: int = 6
    n_minor_pos: int = 3
    n_semantic: int = 20
    n_words: int = 200
    semantic_none_rate: float = 0.3
    rule: BoundaryRule = BoundaryRule.POS_TABLE
    partition_rate: float = 0.4
    noise: float = 0.0

    def __post_init__(self) -> None:
        """Reject zero-size and out-of-range settings."""
        object.__setattr__(self, "rule", BoundaryRule(self.rule))
        for name in (
            "n_sentences",
            "min_length",
            "n_major_pos",
            "n_minor_pos",
            "n_semantic",
            "n_words",
        ):
            if getattr(self, name) < 1:
                msg = f"{name} must be at least 1, got {getattr(self, name)}"
                raise ArgumentError(msg)
        if self.max_length < self.min_length:
            msg = (
                f"max_length {self.max_length} is below min_length {self.min_length}"
            )
            raise ArgumentError(msg)
        for name in ("semantic_none_rate", "partition_rate", "noise"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                msg = f"{name} must lie in [0, 1], got {getattr(self, name)}"
                raise ArgumentError(msg)


def _lexicon(config: SyntheticConfig, rng: np.random.Generator) -> list[Morpheme]:
    lexicon = []
    for index in range(config.n_words):
        major = int(rng.integers(config.n_major_pos))
        minor = int(rng.integers(config.n_minor_pos))
        code = int(rng.integers(config.n_semantic))
        no_entry = bool(rng.random() < config.semantic_none_rate)
        lexicon.append(
            Morpheme(
                word=f"w{index}",
                major_pos=f"P{major}",
                minor_pos=f"P{major}-{minor}",
                semantic=None if no_entry else f"{100 + code:03d}",
            )
        )
    return lexicon


def _pos_table(
    config: SyntheticConfig, rng: np.random.Generator
) -> dict[tuple[str, str, str], bool]:
    table = {}
    for left in range(config.n_major_pos):
        for minor in range(config.n_minor_pos):
            for right in range(config.n_major_pos):
                key = (f"P{left}", f"P{left}-{minor}", f"P{right}")
                table[key] = bool(rng.random() < config.partition_rate)
    return table


def generate_synthetic(config: SyntheticConfig, seed: int) -> Corpus:
    """Generate a labeled corpus; identical (config, seed) give identical output."""
    rng = np.random.default_rng(seed)
    lexicon = _lexicon(config, rng)
    table = _pos_table(config, rng) if config.rule is BoundaryRule.POS_TABLE else {}

    def latent(left: Morpheme, right: Morpheme) -> bool:
        if config.rule is BoundaryRule.ALWAYS:
            return True
        if config.rule is BoundaryRule.NEVER:
            return False
        return table[(left.major_pos, left.minor_pos, right.major_pos)]

    sentences = []
    for _ in range(config.n_sentences):
        length = int(rng.integers(config.min_length, config.max_length + 1))
        morphemes = [lexicon[int(i)] for i in rng.integers(config.n_words, size=length)]
        flips = rng.random(length - 1) < config.noise
        boundaries = tuple(
            latent(left, right) != bool(flip)
            for left, right, flip in zip(
                morphemes[:-1], morphemes[1:], flips, strict=True
            )
        )
        sentences.append(Sentence(tuple(morphemes), boundaries))

    settings = asdict(config)
    settings["rule"] = config.rule.value
    provenance = json.dumps(
        {
            "generator": "bunsetsukit.synthetic",
            "seed": seed,
            "config": settings,
            "table": {"/".join(k): v for k, v in table.items()},
        },
        sort_keys=True,
    )
    corpus = Corpus(tuple(sentences), provenance)
    logger.debug(
        "synthetic corpus: %d sentences, %d spaces, %d partitions",
        len(corpus),
        corpus.n_spaces,
        corpus.n_partitions,
    )
    return corpus


def latent_rule(corpus: Corpus) -> dict[str, object]:
    """Decode the generator settings recorded in a corpus's provenance."""
    try:
        data = json.loads(corpus.provenance)
    except json.JSONDecodeError as e:
        msg = "corpus provenance is not a synthetic-generator record"
        raise ArgumentError(msg) from e
    if not isinstance(data, dict) or data.get("generator") != "bunsetsukit.synthetic":
        msg = "corpus provenance is not a synthetic-generator record"
        raise ArgumentError(msg)
    return data
