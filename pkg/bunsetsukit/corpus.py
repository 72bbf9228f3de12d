"""Tagged corpora: morphemes, sentences with partition marks, and instances.

A corpus file holds one morpheme per line as four tab-separated fields
(``word``, ``major_pos``, ``minor_pos``, ``semantic``), where ``semantic`` is a
code or the literal ``NONE``.  A line holding only ``*`` inserts a partition
mark into the space after the preceding morpheme, and a blank line ends a
sentence.  Lines starting with ``# `` before the first sentence carry the
corpus provenance.
"""

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from bunsetsukit.errors import CorpusFormatError

logger = logging.getLogger(__name__)

NONE = "NONE"
PARTITION_LINE = "*"
HEADER_PREFIX = "# "

# Sentinel field values.  They only ever appear on BOS/EOS.
BOS_FIELDS = ("<BOS-WORD>", "<BOS>", "<BOS-MINOR>", "<BOS-SEM>")
EOS_FIELDS = ("<EOS-WORD>", "<EOS>", "<EOS-MINOR>", "<EOS-SEM>")
# Bucket of the decision tree's rare feature values.
OTHERS = "<OTHERS>"
# No corpus field may take these values; NONE is reserved for semantic only.
RESERVED_TOKENS = frozenset({*BOS_FIELDS, *EOS_FIELDS, OTHERS})

_FIELDS = ("word", "major_pos", "minor_pos", "semantic")
_FORBIDDEN_CHARS = ("\t", "\n", "\r")


@dataclass(frozen=True)
class Morpheme:
    """One tagged token: surface word, major POS, minor POS and semantic code.

    ``semantic`` is ``None`` when the morpheme has no dictionary entry; it is
    projected as the reserved token ``NONE``.
    """

    word: str
    major_pos: str
    minor_pos: str
    semantic: str | None = None

    def __post_init__(self) -> None:
        """Validate the field invariants."""
        for name in _FIELDS:
            value = getattr(self, name)
            if value is None and name == "semantic":
                continue
            if not value:
                msg = f"morpheme {name} must be non-empty"
                raise ValueError(msg)
            if value in RESERVED_TOKENS or (name == "semantic" and value == NONE):
                msg = f"morpheme {name} {value!r} is reserved"
                raise ValueError(msg)
            if any(ch in value for ch in _FORBIDDEN_CHARS):
                msg = f"morpheme {name} contains a tab or newline: {value!r}"
                raise ValueError(msg)

    @property
    def semantic_token(self) -> str:
        """Semantic code, or ``NONE`` for a morpheme without one."""
        return NONE if self.semantic is None else self.semantic

    @property
    def is_sentinel(self) -> bool:
        """Whether this is the BOS or EOS padding morpheme."""
        return self in (BOS, EOS)

    def to_line(self) -> str:
        """Render as one corpus file line (without the newline)."""
        return "\t".join(
            (self.word, self.major_pos, self.minor_pos, self.semantic_token)
        )


def _sentinel(fields: tuple[str, str, str, str]) -> Morpheme:
    # Built around __post_init__: sentinel fields are reserved values.
    morpheme = object.__new__(Morpheme)
    for name, value in zip(_FIELDS, fields, strict=True):
        object.__setattr__(morpheme, name, value)
    return morpheme


BOS = _sentinel(BOS_FIELDS)
EOS = _sentinel(EOS_FIELDS)


@dataclass(frozen=True)
class Sentence:
    """Morphemes of one sentence and the partition flag of every space."""

    morphemes: tuple[Morpheme, ...]
    boundaries: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        """Check that there is exactly one flag per space."""
        object.__setattr__(self, "morphemes", tuple(self.morphemes))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if not self.morphemes:
            msg = "a sentence needs at least one morpheme"
            raise ValueError(msg)
        if len(self.boundaries) != len(self.morphemes) - 1:
            msg = (
                f"{len(self.morphemes)} morphemes need "
                f"{len(self.morphemes) - 1} boundary flags, "
                f"got {len(self.boundaries)}"
            )
            raise ValueError(msg)

    @property
    def n_spaces(self) -> int:
        """Number of inter-morpheme spaces."""
        return len(self.morphemes) - 1

    def with_boundaries(self, flags: Iterable[bool]) -> "Sentence":
        """Return the same morphemes carrying new partition flags."""
        return Sentence(self.morphemes, tuple(bool(flag) for flag in flags))

    def unlabeled(self) -> "Sentence":
        """Return the same morphemes with every partition mark removed."""
        return self.with_boundaries([False] * self.n_spaces)


@dataclass(frozen=True)
class Instance:
    """One inter-morpheme space: the four-morpheme window and its gold label."""

    far_left: Morpheme
    left: Morpheme
    right: Morpheme
    far_right: Morpheme
    label: bool | None = None

    @property
    def window(self) -> tuple[Morpheme, Morpheme, Morpheme, Morpheme]:
        """The window in left-to-right order."""
        return (self.far_left, self.left, self.right, self.far_right)


@dataclass(frozen=True)
class Corpus:
    """A list of sentences plus free-form provenance metadata.

    Provenance may span several lines; it holds no tab or carriage return.
    """

    sentences: tuple[Sentence, ...] = ()
    provenance: str = field(default="")

    def __post_init__(self) -> None:
        """Freeze the sentence list and check the provenance."""
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if "\t" in self.provenance or "\r" in self.provenance:
            msg = f"provenance contains a tab or carriage return: {self.provenance!r}"
            raise ValueError(msg)

    def __iter__(self) -> Iterator[Sentence]:
        """Iterate over the sentences."""
        return iter(self.sentences)

    def __len__(self) -> int:
        """Number of sentences."""
        return len(self.sentences)

    @property
    def n_morphemes(self) -> int:
        """Total number of morphemes."""
        return sum(len(s.morphemes) for s in self.sentences)

    @property
    def n_spaces(self) -> int:
        """Total number of spaces, i.e. of classification instances."""
        return sum(s.n_spaces for s in self.sentences)

    @property
    def n_partitions(self) -> int:
        """Total number of partition marks."""
        return sum(sum(s.boundaries) for s in self.sentences)

    def unlabeled(self) -> "Corpus":
        """Return the corpus with every partition mark removed."""
        return Corpus(tuple(s.unlabeled() for s in self.sentences), self.provenance)


def _split_lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def parse_corpus(text: str | TextIO) -> Corpus:
    """Parse a corpus from a string or a text stream.

    Raises:
        CorpusFormatError: on a line with the wrong number of fields, a
            partition mark at a sentence edge, a repeated mark, an invalid
            field, or an empty sentence.

    """
    if not isinstance(text, str):
        text = text.read()

    header: list[str] = []
    sentences: list[Sentence] = []
    morphemes: list[Morpheme] = []
    boundaries: list[bool] = []
    pending_mark = False
    lines = _split_lines(text)

    for line_number, line in enumerate(lines, start=1):
        if line == "":
            if not morphemes:
                raise CorpusFormatError(line_number, "empty sentence")
            if pending_mark:
                raise CorpusFormatError(
                    line_number, "partition mark at the end of a sentence"
                )
            sentences.append(Sentence(tuple(morphemes), tuple(boundaries)))
            morphemes, boundaries = [], []
            continue

        if line == PARTITION_LINE:
            if not morphemes:
                raise CorpusFormatError(
                    line_number, "partition mark at the start of a sentence"
                )
            if pending_mark:
                raise CorpusFormatError(line_number, "repeated partition mark")
            pending_mark = True
            continue

        if (
            line.startswith(HEADER_PREFIX)
            and "\t" not in line
            and not sentences
            and not morphemes
        ):
            if "\r" in line:
                raise CorpusFormatError(line_number, "carriage return in provenance")
            header.append(line[len(HEADER_PREFIX) :])
            continue

        fields = line.split("\t")
        if len(fields) != 4:
            raise CorpusFormatError(
                line_number, f"expected 4 tab-separated fields, found {len(fields)}"
            )
        word, major_pos, minor_pos, semantic = fields
        try:
            morpheme = Morpheme(
                word, major_pos, minor_pos, None if semantic == NONE else semantic
            )
        except ValueError as e:
            raise CorpusFormatError(line_number, str(e)) from e
        if morphemes:
            boundaries.append(pending_mark)
        pending_mark = False
        morphemes.append(morpheme)

    if pending_mark:
        raise CorpusFormatError(len(lines), "partition mark at the end of a sentence")
    if morphemes:
        sentences.append(Sentence(tuple(morphemes), tuple(boundaries)))

    corpus = Corpus(tuple(sentences), "\n".join(header))
    logger.debug(
        "parsed %d sentences, %d spaces", len(corpus.sentences), corpus.n_spaces
    )
    return corpus


def write_corpus(corpus: Corpus) -> str:
    """Render a corpus in the canonical file format."""
    out: list[str] = []
    if corpus.provenance:
        out.extend(HEADER_PREFIX + line for line in corpus.provenance.split("\n"))
    for sentence in corpus.sentences:
        out.append(sentence.morphemes[0].to_line())
        for mark, morpheme in zip(
            sentence.boundaries, sentence.morphemes[1:], strict=True
        ):
            if mark:
                out.append(PARTITION_LINE)
            out.append(morpheme.to_line())
        out.append("")
    return "".join(line + "\n" for line in out)


def read_corpus(path: str | Path) -> Corpus:
    """Read a UTF-8 corpus file; CRLF and CR line ends read as LF.

    Raises:
        CorpusFormatError: on a byte sequence that is not UTF-8, naming its
            line, and on every error ``parse_corpus`` raises.

    """
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = data.count(b"\n", 0, e.start) + 1
        reason = f"invalid UTF-8 byte 0x{data[e.start]:02x} in {path}"
        raise CorpusFormatError(line_number, reason) from e
    return parse_corpus(text.replace("\r\n", "\n").replace("\r", "\n"))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus to a UTF-8 file in the canonical format."""
    with open(path, "w", encoding="utf-8", newline="\n") as file:
        file.write(write_corpus(corpus))


def extract_instances(sentence: Sentence) -> list[Instance]:
    """Return one instance per space, padding the window with BOS and EOS."""
    padded = (BOS, *sentence.morphemes, EOS)
    return [
        Instance(
            far_left=padded[k],
            left=padded[k + 1],
            right=padded[k + 2],
            far_right=padded[k + 3],
            label=sentence.boundaries[k],
        )
        for k in range(sentence.n_spaces)
    ]


def corpus_instances(corpus: Corpus) -> list[Instance]:
    """Flatten a corpus into its instance list, sentence by sentence."""
    return [inst for sentence in corpus for inst in extract_instances(sentence)]


def render_sentence(sentence: Sentence) -> str:
    """Render words separated by spaces with ``|`` at every partition mark."""
    parts = [sentence.morphemes[0].word]
    for mark, morpheme in zip(sentence.boundaries, sentence.morphemes[1:], strict=True):
        if mark:
            parts.append("|")
        parts.append(morpheme.word)
    return " ".join(parts)
