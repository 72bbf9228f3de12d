"""Tests for model files."""

import json
import os

import pytest

from bunsetsukit.config import resolve_params
from bunsetsukit.core import Learner, predict, train
from bunsetsukit.corpus import Corpus, corpus_instances
from bunsetsukit.errors import ModelFormatError
from bunsetsukit.models import (
    FORMAT_VERSION,
    dump_model,
    load_model,
    parse_model,
    save_model,
)
from bunsetsukit.registry import KIND_ORDER
from bunsetsukit.synthetic import SyntheticConfig, generate_synthetic

FAST = resolve_params({"maxent_max_iter": 50})


@pytest.fixture(scope="module")
def learning_and_test() -> tuple[Corpus, Corpus]:
    """Small corpora shared by every kind."""
    corpus = generate_synthetic(SyntheticConfig(n_sentences=40, noise=0.05), 5)
    return Corpus(corpus.sentences[:30]), Corpus(corpus.sentences[30:])


@pytest.mark.parametrize("kind", KIND_ORDER)
def test_save_load_round_trip(
    kind: str, learning_and_test: tuple[Corpus, Corpus], output_dir: str
) -> None:
    """A reloaded model predicts exactly like the one that was saved."""
    learning, test = learning_and_test
    learner = train(kind, learning, FAST)
    path = os.path.join(output_dir, f"{kind}.json")
    save_model(learner, path)
    restored = load_model(path)
    assert restored.kind == kind
    assert restored.params == learner.params
    assert restored.metadata == learner.metadata
    queries = corpus_instances(test) + corpus_instances(learning)
    assert [predict(restored, q) for q in queries] == [
        predict(learner, q) for q in queries
    ]


@pytest.mark.parametrize("kind", KIND_ORDER)
def test_dump_is_canonical(kind: str, learning_and_test: tuple[Corpus, Corpus]) -> None:
    """Training twice, or reloading, gives the same bytes."""
    learning, _ = learning_and_test
    first = dump_model(train(kind, learning, FAST))
    assert dump_model(train(kind, learning, FAST)) == first
    assert dump_model(parse_model(first)) == first


def test_rule_models_embed_instances(
    learning_and_test: tuple[Corpus, Corpus],
) -> None:
    """Rule-family files carry their training instances; others do not."""
    learning, _ = learning_and_test
    rules = json.loads(dump_model(train("method1", learning)))
    tree = json.loads(dump_model(train("decision_tree", learning)))
    assert len(rules["instances"]) == learning.n_spaces
    assert rules["morphemes"]
    assert tree["instances"] == tree["morphemes"] == []
    assert rules["version"] == FORMAT_VERSION


@pytest.fixture
def method2_document(learning_and_test: tuple[Corpus, Corpus]) -> dict:
    """The JSON document of a trained Method 2 learner."""
    learning, _ = learning_and_test
    return json.loads(dump_model(train("method2", learning)))


def test_not_json() -> None:
    """Garbage text is rejected."""
    with pytest.raises(ModelFormatError, match="not a JSON model file"):
        parse_model("{not json")


def test_model_file_not_utf8(output_dir: str) -> None:
    """A model file with undecodable bytes is a format error."""
    path = os.path.join(output_dir, "model.json")
    with open(path, "wb") as file:
        file.write(b"\xff\xfe{}")
    with pytest.raises(ModelFormatError, match="not UTF-8"):
        load_model(path)


def test_wrong_format(method2_document: dict) -> None:
    """Another JSON document is rejected."""
    method2_document["format"] = "something-else"
    with pytest.raises(ModelFormatError, match="not a bunsetsukit-model file"):
        parse_model(json.dumps(method2_document))


def test_wrong_version(method2_document: dict) -> None:
    """A newer format version is rejected."""
    method2_document["version"] = FORMAT_VERSION + 1
    with pytest.raises(ModelFormatError, match="unsupported model version"):
        parse_model(json.dumps(method2_document))


def test_template_hash_mismatch(method2_document: dict) -> None:
    """A model built against another template table is rejected."""
    method2_document["template_hash"] = "0" * 64
    with pytest.raises(ModelFormatError, match="different pattern template table"):
        parse_model(json.dumps(method2_document))


def test_unknown_kind(method2_document: dict) -> None:
    """A kind missing from the registry is rejected."""
    method2_document["kind"] = "method9"
    with pytest.raises(ModelFormatError, match="unknown learner kind"):
        parse_model(json.dumps(method2_document))


def test_truncated_instances(method2_document: dict) -> None:
    """Instances that no longer reproduce the stored table are rejected."""
    method2_document["instances"] = method2_document["instances"][:-1]
    with pytest.raises(ModelFormatError, match="inconsistent model file"):
        parse_model(json.dumps(method2_document))


def test_missing_field(method2_document: dict) -> None:
    """A document without its model payload is rejected."""
    del method2_document["model"]
    with pytest.raises(ModelFormatError, match="inconsistent model file"):
        parse_model(json.dumps(method2_document))


def test_loaded_learner_type(learning_and_test: tuple[Corpus, Corpus]) -> None:
    """Parsing returns a Learner with validated params."""
    learning, _ = learning_and_test
    learner = parse_model(dump_model(train("decision_list", learning, FAST)))
    assert isinstance(learner, Learner)
    assert learner.params.maxent_max_iter == 50
