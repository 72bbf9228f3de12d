"""Versioned JSON model files.

A model file is one JSON object::

    {
      "format": "bunsetsukit-model",
      "version": 1,
      "kind": "method2",
      "template_hash": "<sha256 of the template table>",
      "params": {...},
      "metadata": {...},
      "morphemes": [[word, major_pos, minor_pos, semantic or null], ...],
      "instances": [[far_left, left, right, far_right, label], ...],
      "model": {...}
    }

Rule-family models embed their training instances, written as indices into
``morphemes`` with ``"BOS"``/``"EOS"`` for the sentinels; other kinds leave
both lists empty.  Keys are sorted and separators fixed, so the same learner
always serializes to the same bytes.
"""

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from bunsetsukit.config import resolve_params
from bunsetsukit.core import Learner
from bunsetsukit.corpus import BOS, EOS, Instance, Morpheme
from bunsetsukit.errors import BunsetsukitError, ModelFormatError
from bunsetsukit.learners.rules import RuleModel
from bunsetsukit.patterns import template_table_hash
from bunsetsukit.registry import get_learner

logger = logging.getLogger(__name__)

FORMAT_NAME = "bunsetsukit-model"
FORMAT_VERSION = 1

_SENTINELS = {"BOS": BOS, "EOS": EOS}


def _encode_instances(
    instances: Sequence[Instance],
) -> tuple[list[list[str | None]], list[list[Any]]]:
    index: dict[Morpheme, int] = {}
    morphemes: list[list[str | None]] = []
    rows: list[list[Any]] = []
    for instance in instances:
        row: list[Any] = []
        for morpheme in instance.window:
            if morpheme == BOS:
                row.append("BOS")
            elif morpheme == EOS:
                row.append("EOS")
            else:
                if morpheme not in index:
                    index[morpheme] = len(morphemes)
                    morphemes.append(
                        [
                            morpheme.word,
                            morpheme.major_pos,
                            morpheme.minor_pos,
                            morpheme.semantic,
                        ]
                    )
                row.append(index[morpheme])
        row.append(instance.label)
        rows.append(row)
    return morphemes, rows


def _decode_instances(
    morphemes: Sequence[Sequence[str | None]], rows: Sequence[Sequence[Any]]
) -> list[Instance]:
    table = [Morpheme(w, major, minor, sem) for w, major, minor, sem in morphemes]
    instances = []
    for *slots, label in rows:
        window = [
            _SENTINELS[slot] if isinstance(slot, str) else table[slot]
            for slot in slots
        ]
        far_left, left, right, far_right = window
        instances.append(Instance(far_left, left, right, far_right, label))
    return instances


def model_document(learner: Learner) -> dict[str, Any]:
    """The JSON-ready container of a trained learner."""
    if isinstance(learner.model, RuleModel):
        morphemes, rows = _encode_instances(learner.model.table.training_instances)
    else:
        morphemes, rows = [], []
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": learner.kind,
        "template_hash": template_table_hash(),
        "params": learner.params.to_dict(),
        "metadata": learner.metadata,
        "morphemes": morphemes,
        "instances": rows,
        "model": learner.model.to_dict(),
    }


def dump_model(learner: Learner) -> str:
    """Serialize a learner to its canonical JSON text."""
    return (
        json.dumps(
            model_document(learner),
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
        )
        + "\n"
    )


def save_model(learner: Learner, path: str | Path) -> None:
    """Write a learner to a UTF-8 model file."""
    with open(path, "w", encoding="utf-8", newline="\n") as file:
        file.write(dump_model(learner))
    logger.info("saved %s model to %s", learner.kind, path)


def parse_model(text: str) -> Learner:
    """Rebuild a learner from model-file text.

    Raises:
        ModelFormatError: if the text is not a model of this format version,
            was built against a different template table, names an unknown
            kind, or its parts disagree with each other.

    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"not a JSON model file: {e}"
        raise ModelFormatError(msg) from e
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        msg = f"not a {FORMAT_NAME} file"
        raise ModelFormatError(msg)
    if data.get("version") != FORMAT_VERSION:
        msg = (
            f"unsupported model version {data.get('version')!r}, "
            f"expected {FORMAT_VERSION}"
        )
        raise ModelFormatError(msg)
    if data.get("template_hash") != template_table_hash():
        msg = "model was built against a different pattern template table"
        raise ModelFormatError(msg)

    try:
        info = get_learner(data["kind"])
        params = resolve_params(data["params"])
        instances = _decode_instances(data["morphemes"], data["instances"])
        model = info.cls.from_dict(data["model"], instances)
        metadata = dict(data["metadata"])
    except (BunsetsukitError, KeyError, TypeError, ValueError, IndexError) as e:
        msg = f"inconsistent model file: {e}"
        raise ModelFormatError(msg) from e
    return Learner(info.kind, model, params, metadata)


def load_model(path: str | Path) -> Learner:
    """Read a model file written by ``save_model``."""
    try:
        with open(path, encoding="utf-8") as file:
            text = file.read()
    except UnicodeDecodeError as e:
        msg = f"{path}: model file is not UTF-8"
        raise ModelFormatError(msg) from e
    learner = parse_model(text)
    logger.info("loaded %s model from %s", learner.kind, path)
    return learner
