"""The 152 pattern templates over the four-morpheme window.

Each slot of the window (far left, left, right, far right) is either unused
or projected at one of four nested information levels:

    A: major POS
    B: major POS + minor POS
    C: B + semantic code
    D: C + word

The outer slots only ever take A or B.  Six occupancy schemes combined with
the per-slot level choices give 64 + 32 + 32 + 16 + 4 + 4 = 152 templates.
"""

import hashlib
import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import lru_cache
from operator import itemgetter
from typing import NamedTuple

from bunsetsukit.corpus import Instance, Morpheme

# Weight of the two middle morphemes in the similarity score; the outer
# product is at most 3 * 3 = 9, so it never reaches this.
MIDDLE_WEIGHT = 10_000
N_TEMPLATES = 152

SLOTS = ("far_left", "left", "right", "far_right")


class InfoLevel(IntEnum):
    """Information level of a slot.  The value is the similarity s(x)."""

    A = 2
    B = 3
    C = 4
    D = 5

    @property
    def depth(self) -> int:
        """Number of morpheme fields projected at this level."""
        return self.value - 1


# s(x) of a slot the template does not use.
UNUSED_SIMILARITY = 1

OUTER_LEVELS = (InfoLevel.A, InfoLevel.B)
MIDDLE_LEVELS = (InfoLevel.A, InfoLevel.B, InfoLevel.C, InfoLevel.D)


class Scheme(Enum):
    """Which slots a template uses."""

    ALL = ("far_left", "left", "right", "far_right")
    NO_FAR_LEFT = ("left", "right", "far_right")
    NO_FAR_RIGHT = ("far_left", "left", "right")
    MIDDLE = ("left", "right")
    LEFT_ONLY = ("left",)
    RIGHT_ONLY = ("right",)


SlotLevels = tuple[
    InfoLevel | None, InfoLevel | None, InfoLevel | None, InfoLevel | None
]
Values = tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class PatternTemplate:
    """One specificity assignment over the window."""

    template_id: int
    scheme: Scheme
    far_left: InfoLevel | None
    left: InfoLevel | None
    right: InfoLevel | None
    far_right: InfoLevel | None
    similarity: int

    @property
    def levels(self) -> SlotLevels:
        """Levels in window order; ``None`` marks an unused slot."""
        return (self.far_left, self.left, self.right, self.far_right)

    @property
    def occupied(self) -> tuple[tuple[int, InfoLevel], ...]:
        """(slot index, level) for every used slot, in window order."""
        return tuple(
            (index, level)
            for index, level in enumerate(self.levels)
            if level is not None
        )

    def label(self) -> str:
        """Compact level string such as ``B,D,C,A`` or ``-,D,-,-``."""
        return ",".join("-" if lv is None else lv.name for lv in self.levels)


class PatternKey(NamedTuple):
    """An instantiated template: the projected values of every used slot.

    ``values`` holds one tuple per used slot, so equal strings in different
    slots or at different depths never collide.
    """

    template_id: int
    values: Values


def project(morpheme: Morpheme, level: InfoLevel) -> tuple[str, ...]:
    """Return the first ``level.depth`` fields of a morpheme.

    Projections form a prefix chain: ``project(m, A)`` is a prefix of
    ``project(m, B)`` and so on up to D.
    """
    fields = (
        morpheme.major_pos,
        morpheme.minor_pos,
        morpheme.semantic_token,
        morpheme.word,
    )
    return fields[: level.depth]


def _similarity(levels: tuple[InfoLevel | None, ...]) -> int:
    far_left, left, right, far_right = (
        UNUSED_SIMILARITY if lv is None else int(lv) for lv in levels
    )
    return left * right * MIDDLE_WEIGHT + far_left * far_right


def template_similarity(template: PatternTemplate) -> int:
    """Similarity score ``s(left)*s(right)*10000 + s(far_left)*s(far_right)``."""
    return _similarity(template.levels)


def _slot_choices(scheme: Scheme) -> list[tuple[InfoLevel | None, ...]]:
    choices: list[tuple[InfoLevel | None, ...]] = []
    for slot in SLOTS:
        if slot not in scheme.value:
            choices.append((None,))
        elif slot in ("far_left", "far_right"):
            choices.append(OUTER_LEVELS)
        else:
            choices.append(MIDDLE_LEVELS)
    return choices


@lru_cache(maxsize=1)
def templates() -> tuple[PatternTemplate, ...]:
    """The 152 templates as a shared tuple, indexed by template id."""
    built: list[PatternTemplate] = []
    for scheme in Scheme:
        for levels in itertools.product(*_slot_choices(scheme)):
            built.append(
                PatternTemplate(
                    template_id=len(built),
                    scheme=scheme,
                    far_left=levels[0],
                    left=levels[1],
                    right=levels[2],
                    far_right=levels[3],
                    similarity=_similarity(levels),
                )
            )
    assert len(built) == N_TEMPLATES
    return tuple(built)


def enumerate_templates() -> list[PatternTemplate]:
    """Return the 152 templates in scheme-major, level-lexicographic order.

    The position in the list is the ``template_id``.
    """
    return list(templates())


def get_template(template_id: int) -> PatternTemplate:
    """Look up a template by id."""
    return templates()[template_id]


@lru_cache(maxsize=1)
def similarity_tiers() -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Template ids grouped by similarity, highest similarity first."""
    tiers: dict[int, list[int]] = {}
    for template in templates():
        tiers.setdefault(template.similarity, []).append(template.template_id)
    return tuple(
        (similarity, tuple(ids)) for similarity, ids in sorted(tiers.items())[::-1]
    )


# Offset of each slot's first prefix in the flat prefix list of a window:
# far left and far right contribute depths 1-2, the middle slots 1-4.
_PREFIX_OFFSETS = (0, 2, 6, 10)
_SLOT_DEPTHS = (2, 4, 4, 2)

ValueGetter = Callable[[Sequence[tuple[str, ...]]], Values]


@lru_cache(maxsize=1)
def _value_getters() -> tuple[ValueGetter, ...]:
    getters: list[ValueGetter] = []
    for template in templates():
        positions = [
            _PREFIX_OFFSETS[index] + level.depth - 1
            for index, level in template.occupied
        ]
        if len(positions) == 1:
            getters.append(lambda prefixes, at=positions[0]: (prefixes[at],))
        else:
            getters.append(itemgetter(*positions))
    return tuple(getters)


def window_values(instance: Instance) -> list[Values]:
    """Projected slot values under every template, indexed by template id.

    ``window_values(x)[t]`` equals ``instantiate(get_template(t), x).values``.
    Each morpheme is projected once.
    """
    prefixes: list[tuple[str, ...]] = []
    for morpheme, depth in zip(instance.window, _SLOT_DEPTHS, strict=True):
        fields = project(morpheme, InfoLevel.D)
        prefixes.extend(fields[:d] for d in range(1, depth + 1))
    return [getter(prefixes) for getter in _value_getters()]


def instantiate(template: PatternTemplate, instance: Instance) -> PatternKey:
    """Project the instance's window through one template."""
    window = instance.window
    return PatternKey(
        template.template_id,
        tuple(project(window[index], level) for index, level in template.occupied),
    )


def instantiate_all(instance: Instance) -> list[PatternKey]:
    """Return the keys of all 152 templates, indexed by template id."""
    return [
        PatternKey(template_id, values)
        for template_id, values in enumerate(window_values(instance))
    ]


def format_template_table() -> str:
    """Tab-separated listing: template_id, scheme, levels, similarity."""
    lines = ["template_id\tscheme\tlevels\tsimilarity"]
    lines.extend(
        f"{t.template_id}\t{t.scheme.name}\t{t.label()}\t{t.similarity}"
        for t in templates()
    )
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def template_table_hash() -> str:
    """SHA-256 of the template listing; model files record it."""
    return hashlib.sha256(format_template_table().encode("utf-8")).hexdigest()


def describe_key(key: PatternKey) -> str:
    """Render a key as ``Noun: NormalNoun; Particle: ...; ---`` over all slots."""
    template = get_template(key.template_id)
    values = iter(key.values)
    parts = [
        "---" if level is None else ": ".join(next(values))
        for level in template.levels
    ]
    return "; ".join(parts)
