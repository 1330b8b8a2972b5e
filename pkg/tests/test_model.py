"""Constraint model: validation, canonical JSON, round trips."""

from __future__ import annotations

import json
import random

import pytest

from constraintsmith.errors import InvalidSpec, SpecFormatError
from constraintsmith.model import (
    BulletList,
    ConstraintSpec,
    ExactText,
    JsonField,
    JsonObject,
    MultipleChoice,
    OrderedList,
    SomeText,
    parse_spec,
    serialize_spec,
    validate_spec,
)

from generators import random_spec

SENTIMENT = ConstraintSpec(
    (ExactText("Sentiment : "), MultipleChoice(("positive", "negative", "neutral")))
)

CHARACTER_PROFILE = ConstraintSpec(
    (
        JsonObject(
            (
                JsonField("name", "string"),
                JsonField("age", "number"),
                JsonField("children", "array_of_string"),
                JsonField("playable", "boolean"),
            )
        ),
    )
)


def test_sentiment_spec_is_valid():
    assert validate_spec(SENTIMENT) == []


def test_empty_spec_rejected():
    violations = validate_spec(ConstraintSpec(()))
    assert len(violations) == 1
    assert violations[0].path == "primitives"


def test_adjacent_some_text_rejected():
    spec = ConstraintSpec((SomeText(), SomeText()))
    violations = validate_spec(spec)
    assert any("adjacent" in v.message for v in violations)
    assert any(v.path == "primitives[1]" for v in violations)


def test_validate_is_pure():
    spec = ConstraintSpec((SomeText(), SomeText(), MultipleChoice(("a",))))
    assert validate_spec(spec) == validate_spec(spec)


@pytest.mark.parametrize(
    "primitive,fragment",
    [
        (MultipleChoice(("a",)), "at least 2 choices"),
        (MultipleChoice(("a", "a")), "duplicate choice"),
        (MultipleChoice(("a", "")), "non-empty"),
        (BulletList(bullet=""), "bullet"),
        (BulletList(min_items=0), "min_items"),
        (BulletList(min_items=3, max_items=2), "max_items"),
        (OrderedList(max_items=51), "<= 50"),
        (SomeText(min_chars=0), "min_chars"),
        (SomeText(min_chars=5, max_chars=4), "max_chars"),
        (ExactText(""), "non-empty"),
        (JsonObject((JsonField("a"), JsonField("a"))), "duplicate key"),
        (JsonObject((JsonField(""),)), "non-empty"),
        (JsonObject((JsonField("k", "float"),)), "unknown field type"),
    ],
)
def test_invariant_violations(primitive, fragment):
    violations = validate_spec(ConstraintSpec((primitive,)))
    assert violations, f"expected a violation for {primitive!r}"
    assert any(fragment in v.message for v in violations)


def test_serialize_uses_variant_tags():
    doc = json.loads(serialize_spec(ConstraintSpec((MultipleChoice(("a", "b")),))))
    assert doc == {"primitives": [{"type": "multiple_choice", "choices": ["a", "b"]}]}


def test_unknown_variant_reported_with_path():
    text = json.dumps({"primitives": [{"type": "jsonn_object"}]})
    with pytest.raises(SpecFormatError) as err:
        parse_spec(text)
    assert "jsonn_object" in str(err.value)
    assert err.value.path == "primitives[0]"


def test_malformed_json_reported():
    with pytest.raises(SpecFormatError, match="malformed JSON"):
        parse_spec("{not json")


def test_parse_rejects_invariant_violations():
    text = json.dumps({"primitives": [{"type": "some_text"}, {"type": "some_text"}]})
    with pytest.raises(InvalidSpec):
        parse_spec(text)


def test_parse_accepts_bare_primitive_list():
    spec = parse_spec(json.dumps([{"type": "exact_text", "text": "x"}]))
    assert spec == ConstraintSpec((ExactText("x"),))


def test_character_profile_round_trip_preserves_field_order():
    text = serialize_spec(CHARACTER_PROFILE)
    back = parse_spec(text)
    assert back == CHARACTER_PROFILE
    keys = [f["key"] for f in json.loads(text)["primitives"][0]["fields"]]
    assert keys == ["name", "age", "children", "playable"]


def test_defaults_fill_in():
    spec = parse_spec(json.dumps({"primitives": [{"type": "list"}]}))
    assert spec.primitives[0] == BulletList(bullet="- ", min_items=1, max_items=10)


def test_unknown_keys_rejected():
    with pytest.raises(SpecFormatError, match="unknown keys"):
        parse_spec(json.dumps({"primitives": [{"type": "exact_text", "text": "x", "bold": True}]}))


def test_round_trip_1000_random_specs():
    rng = random.Random(20240917)
    for _ in range(1000):
        spec = random_spec(rng)
        assert parse_spec(serialize_spec(spec)) == spec


def test_named_spec_round_trips():
    spec = ConstraintSpec((ExactText("x"),), name="sentiment")
    assert parse_spec(serialize_spec(spec)) == spec
