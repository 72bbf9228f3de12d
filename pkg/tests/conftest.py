"""Shared test fixtures and configuration."""

import os
import tempfile
from collections.abc import Callable, Generator
from typing import Any

import pytest
from pytest import CaptureFixture

import bunsetsukit.learners  # noqa: F401
from bunsetsukit.corpus import Corpus, Morpheme, Sentence, parse_corpus
from bunsetsukit.synthetic import SyntheticConfig, generate_synthetic

TAGGED_TEXT = (
    "bun\tNoun\tNormalNoun\tNONE\n"
    "wo\tParticle\tCaseParticle\tNONE\n"
    "*\n"
    "kugiru\tVerb\tNormalForm\t217\n"
    ".\tSymbol\tPunctuation\tNONE\n"
    "\n"
)


@pytest.fixture
def temp_dir() -> Generator[str, None, None]:
    """Provide a temporary directory for test outputs."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        original_dir = os.getcwd()
        os.chdir(tmp_dir)
        yield tmp_dir
        os.chdir(original_dir)


@pytest.fixture
def output_dir(temp_dir: str) -> str:
    """Provide a temporary output directory for written corpora and models."""
    path = os.path.join(temp_dir, "output")
    os.makedirs(path)
    return path


@pytest.fixture
def capture_output(
    capsys: CaptureFixture[str],
) -> Callable[..., str]:
    """Capture stdout from a function call."""

    def _capture(func: Callable[..., Any], *args: Any, **kwargs: Any) -> str:
        func(*args, **kwargs)
        return str(capsys.readouterr().out)

    return _capture


@pytest.fixture
def tagged_text() -> str:
    """The tagged sentence "bun wo | kugiru ." in corpus-file form."""
    return TAGGED_TEXT


@pytest.fixture
def tagged_sentence() -> Sentence:
    """The tagged sentence "bun wo | kugiru ." built directly."""
    return Sentence(
        (
            Morpheme("bun", "Noun", "NormalNoun"),
            Morpheme("wo", "Particle", "CaseParticle"),
            Morpheme("kugiru", "Verb", "NormalForm", "217"),
            Morpheme(".", "Symbol", "Punctuation"),
        ),
        (False, True, False),
    )


@pytest.fixture
def tagged_corpus(tagged_text: str) -> Corpus:
    """A one-sentence corpus."""
    return parse_corpus(tagged_text)


@pytest.fixture
def small_corpus() -> Corpus:
    """A conflict-free synthetic corpus of a few hundred spaces."""
    return generate_synthetic(SyntheticConfig(n_sentences=30), seed=7)


@pytest.fixture
def split_corpora() -> tuple[Corpus, Corpus]:
    """Learning and test corpora drawn from one lexicon and one latent rule."""
    corpus = generate_synthetic(
        SyntheticConfig(n_sentences=80, n_words=80, noise=0.02), seed=11
    )
    return (
        Corpus(corpus.sentences[:60], corpus.provenance),
        Corpus(corpus.sentences[60:], corpus.provenance),
    )
