"""Tests for the learner registry."""

import pytest

from bunsetsukit.errors import UnknownLearnerError
from bunsetsukit.registry import (
    KIND_ORDER,
    expand_kinds,
    get_learner,
    get_registry,
    learners_in_order,
)


def test_registry_populated() -> None:
    """All six learners are registered."""
    assert set(get_registry()) == set(KIND_ORDER)


def test_learners_in_table_order() -> None:
    """Learners list in comparison-table order."""
    assert [info.kind for info in learners_in_order()] == list(KIND_ORDER)


def test_registered_class_knows_its_kind() -> None:
    """The decorator stamps the kind onto the class."""
    for kind, info in get_registry().items():
        assert info.cls.kind == kind
        assert info.title
        assert info.description


def test_rule_family() -> None:
    """The four table-based learners form the rule family."""
    family = {info.kind for info in learners_in_order() if info.rule_family}
    assert family == {"example_based", "decision_list", "method1", "method2"}


def test_get_learner_found() -> None:
    """Lookup returns the registration of a known kind."""
    assert get_learner("decision_tree").title == "Decision Tree"


def test_get_learner_suggests() -> None:
    """An unknown kind names close matches."""
    with pytest.raises(UnknownLearnerError) as excinfo:
        get_learner("methd2")
    assert "method2" in excinfo.value.suggestions
    assert "did you mean" in str(excinfo.value)


def test_get_learner_no_suggestion() -> None:
    """A kind unlike any other has no suggestions."""
    with pytest.raises(UnknownLearnerError) as excinfo:
        get_learner("xyzzy")
    assert excinfo.value.suggestions == []


def test_expand_all() -> None:
    """``all`` expands to every kind."""
    assert expand_kinds(["all"]) == list(KIND_ORDER)


def test_expand_keeps_table_order() -> None:
    """Named kinds come back in table order without duplicates."""
    assert expand_kinds(["method2", "decision_tree", "method2"]) == [
        "decision_tree",
        "method2",
    ]


def test_expand_rejects_unknown() -> None:
    """Every name is validated."""
    with pytest.raises(UnknownLearnerError):
        expand_kinds(["method1", "nope"])
