"""Dialect parser, canonical renderer, and the primitive rule table."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from constraintsmith.errors import InvalidSpec, PatternSyntaxError, UnsupportedFeature
from constraintsmith.fsm import build_dfa, full_match
from constraintsmith.model import (
    BulletList,
    ConstraintSpec,
    ExactText,
    JsonField,
    JsonObject,
    MultipleChoice,
    OrderedList,
    SomeText,
)
from constraintsmith.regex.compile import compile_primitive, compile_spec, parse_manual_regex
from constraintsmith.regex.nodes import (
    Alternate,
    Concat,
    Group,
    Literal,
    Repeat,
    render_pattern,
)
from constraintsmith.regex.parser import parse_pattern

from generators import random_ast
from test_model import CHARACTER_PROFILE, SENTIMENT

JSON_STRING = '"(?:[^"\\\\\\x00-\\x1f]|\\\\["\\\\/bfnrt]|\\\\u[0-9a-fA-F]{4})*"'


# --- parser ---

def test_parse_alternation_under_repeat():
    ast = parse_pattern("(?:a|b)+")
    assert ast == Repeat(Group(Alternate((Literal(ord("a")), Literal(ord("b"))))), 1, None)


def test_parse_backreference_rejected():
    with pytest.raises(UnsupportedFeature) as err:
        parse_pattern(r"(a)\1")
    assert err.value.feature == "backreference"
    assert err.value.offset == 3


@pytest.mark.parametrize(
    "pattern,feature",
    [
        (r"a+?", "lazy quantifier"),
        (r"a*?", "lazy quantifier"),
        (r"a{1,2}?", "lazy quantifier"),
        (r"(?=a)", "lookaround"),
        (r"(?!a)", "lookaround"),
        (r"(?<=a)b", "lookaround"),
        (r"(?P<x>a)", "named group"),
        (r"(?i)a", "inline flags"),
        (r"^a", "anchor"),
        (r"a$", "anchor"),
        (r"\ba", "anchor"),
    ],
)
def test_unsupported_features(pattern, feature):
    with pytest.raises(UnsupportedFeature) as err:
        parse_pattern(pattern)
    assert err.value.feature == feature


@pytest.mark.parametrize(
    "pattern",
    ["(a", "a)", "[a", "[]", "a{2", "a{,3}", "a{3,1}", "*a", "a**", r"\q", "a{", "}", "]"],
)
def test_syntax_errors(pattern):
    with pytest.raises(PatternSyntaxError):
        parse_pattern(pattern)


def test_syntax_error_offset():
    with pytest.raises(PatternSyntaxError) as err:
        parse_pattern("ab[cd")
    assert err.value.offset == 2


def test_bullet_edit_example_parses():
    # The documented manual edit: default "- " bullet switched to "* ".
    compiled = parse_manual_regex(r"\* [^\n]+\n")
    assert compiled.pattern == "\\* [^\\n]+\\n"


def test_plain_group_parses_without_capture_semantics():
    assert parse_pattern("(a)") == Group(Literal(ord("a")))


# --- renderer ---

def test_render_group_canonical():
    assert render_pattern(parse_pattern("(?:a|b)")) == "(?:a|b)"


def test_render_concat():
    assert render_pattern(Concat((Literal(ord("a")), Literal(ord("b"))))) == "ab"


def test_render_parse_identity_1000_random_asts():
    rng = random.Random(424242)
    for _ in range(1000):
        ast = random_ast(rng)
        rendered = render_pattern(ast)
        assert parse_pattern(rendered) == ast, rendered


def test_render_is_idempotent_canonical_form():
    for raw in ["a{0,1}", "a{1,}", "(?:x)", r"[\--a]", "[+-]", r"\x41"]:
        once = render_pattern(parse_pattern(raw))
        twice = render_pattern(parse_pattern(once))
        assert once == twice


# --- rule table goldens ---

def test_multiple_choice_fragment():
    frag = compile_primitive(MultipleChoice(("positive", "negative", "neutral")))
    assert frag == "(?:positive|negative|neutral)"


def test_exact_text_escapes_metacharacters():
    assert compile_primitive(ExactText("a+b")) == r"a\+b"


def test_list_fragment():
    assert compile_primitive(BulletList("- ", 1, 3)) == r"(?:- [^\n]+\n){1,3}"
    assert compile_primitive(BulletList("* ", 1, 10)) == r"(?:\* [^\n]+\n){1,10}"


def test_some_text_fragments():
    assert compile_primitive(SomeText(1, None)) == r"[\s\S]+"
    assert compile_primitive(SomeText(2, 5)) == r"[\s\S]{2,5}"
    assert compile_primitive(SomeText(3, None)) == r"[\s\S]{3,}"
    assert compile_primitive(SomeText(1, 1)) == r"[\s\S]"


def test_ordered_list_nested_expansion():
    frag = compile_primitive(OrderedList(1, 3))
    assert frag == r"1\. [^\n]+\n(?:2\. [^\n]+\n(?:3\. [^\n]+\n)?)?"
    assert compile_primitive(OrderedList(2, 2)) == r"1\. [^\n]+\n2\. [^\n]+\n"


def test_json_object_fragment_single_string_field():
    frag = compile_primitive(JsonObject((JsonField("k", "string"),)))
    assert frag == '\\{\\n  "k": ' + JSON_STRING + "\\n\\}"


def test_json_value_subpatterns():
    number = compile_primitive(JsonObject((JsonField("n", "number"),)))
    assert '-?(?:0|[1-9][0-9]*)(?:\\.[0-9]+)?(?:[eE][+-]?[0-9]+)?' in number
    boolean = compile_primitive(JsonObject((JsonField("b", "boolean"),)))
    assert "(?:true|false)" in boolean
    array = compile_primitive(JsonObject((JsonField("a", "array_of_string"),)))
    assert f"(?:\\[\\]|\\[{JSON_STRING}(?:, {JSON_STRING})*\\])" in array


def test_fig_tool6_spec_compiles_to_expected_pattern():
    compiled = compile_spec(SENTIMENT)
    assert compiled.pattern == "Sentiment : (?:positive|negative|neutral)"
    automaton = build_dfa(compiled.ast)
    matches = {f"Sentiment : {w}" for w in ("positive", "negative", "neutral")}
    for text in matches:
        assert full_match(automaton, text)
    assert not full_match(automaton, "Sentiment : positive.")
    assert not full_match(automaton, "sentiment : positive")


def test_singleton_exact_text():
    compiled = compile_spec(ConstraintSpec((ExactText("x"),)))
    assert compiled.pattern == "x"
    automaton = build_dfa(compiled.ast)
    assert full_match(automaton, "x")
    assert not full_match(automaton, "xx")
    assert not full_match(automaton, "")


def test_compile_rejects_invalid_spec():
    with pytest.raises(InvalidSpec):
        compile_spec(ConstraintSpec(()))
    with pytest.raises(InvalidSpec):
        compile_primitive(MultipleChoice(("only",)))


def test_compiled_pattern_reparses_to_same_ast():
    for spec in (SENTIMENT, CHARACTER_PROFILE):
        compiled = compile_spec(spec)
        assert parse_pattern(compiled.pattern) == compiled.ast


def test_manual_regex_pattern_is_canonical():
    compiled = parse_manual_regex("a{1,}")
    assert compiled.pattern == "a+"
    assert compiled.source.text == "a{1,}"


# --- properties ---

@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=st.characters(min_codepoint=1, max_codepoint=0x2FF), min_size=1, max_size=12))
def test_exact_text_matches_exactly_itself(text):
    compiled = compile_spec(ConstraintSpec((ExactText(text),)))
    automaton = build_dfa(compiled.ast)
    assert full_match(automaton, text)
    assert not full_match(automaton, text + "x")
    assert not full_match(automaton, "x" + text)
    assert not full_match(automaton, text[:-1])


def test_dialect_closure_every_fragment_reparses():
    rng = random.Random(777)
    from generators import ALL_KINDS, random_primitive

    for _ in range(300):
        prim = random_primitive(rng, rng.choice(ALL_KINDS))
        frag = compile_primitive(prim)
        parse_pattern(frag)  # must not raise


def test_soundness_sampled_strings_decompose_per_primitive():
    """Every string of a compiled spec splits into consecutive segments
    admitted by the primitives in order (checked by DP over per-primitive
    automata, independent of the composed pattern)."""
    from constraintsmith.fsm import sample_string
    from constraintsmith.regex.compile import primitive_node
    from generators import random_spec

    rng = random.Random(31337)
    for _ in range(30):
        spec = random_spec(rng)
        composed = build_dfa(compile_spec(spec).ast)
        per_primitive = [build_dfa(primitive_node(p)) for p in spec.primitives]
        for _ in range(4):
            text = sample_string(composed, rng.randrange(1 << 30), max_len=120)
            positions = {0}
            for automaton in per_primitive:
                positions = {
                    j
                    for i in positions
                    for j in range(i, len(text) + 1)
                    if full_match(automaton, text[i:j])
                }
                if not positions:
                    break
            assert len(text) in positions, (spec, text)
