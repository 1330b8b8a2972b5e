"""Translate constraint primitives into dialect regex fragments.

Rule table (the contract golden tests pin down):

    ExactText(t)            -> t with every metacharacter escaped
    MultipleChoice(cs)      -> (?:c1|c2|...) escaped, longest first
    SomeText(min, max)      -> [\\s\\S] repeated {min,max} / {min,} / exactly
    List(bullet, m, n)      -> (?:B[^\\n]+\\n){m,n}   (B = escaped bullet;
                               every item ends with a newline, the last too)
    OrderedList(m, n)       -> 1. 2. ... unrolled; item k+1 nested inside
                               an optional group so it requires item k
    JsonObject(fields)      -> pretty-printed object: "{", newline, each
                               field on its own two-space-indented line,
                               comma after all but the last, "}", with the
                               JSON value grammar per declared field type

A whole spec compiles to the concatenation of its fragments; matching is
always full-string, so no anchors appear in the pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from ..errors import InvalidSpec
from ..model import (
    BulletList,
    ConstraintSpec,
    ExactText,
    JsonObject,
    MultipleChoice,
    OrderedList,
    Primitive,
    SomeText,
    validate_spec,
)
from .nodes import (
    Alternate,
    CharClass,
    CharRange,
    ClassShorthand,
    Group,
    Literal,
    Node,
    Repeat,
    concat,
    literals,
    render_pattern,
)
from .parser import parse_pattern

_NEWLINE = CharRange(0x0A, 0x0A)
_LINE_BODY = Repeat(CharClass((_NEWLINE,), negated=True), 1, None)  # [^\n]+
_ANY_SCALAR = CharClass((ClassShorthand("s"), ClassShorthand("S")))  # [\s\S]

_DIGIT = CharRange(0x30, 0x39)

# JSON string: "(?:[^"\\\x00-\x1f]|\\["\\/bfnrt]|\\u[0-9a-fA-F]{4})*"
_JSON_STRING: Node = concat(
    [
        Literal(0x22),
        Repeat(
            Group(
                Alternate(
                    (
                        CharClass(
                            (CharRange(0x22, 0x22), CharRange(0x5C, 0x5C), CharRange(0x00, 0x1F)),
                            negated=True,
                        ),
                        concat(
                            [
                                Literal(0x5C),
                                CharClass(
                                    tuple(CharRange(ord(c), ord(c)) for c in '"\\/bfnrt')
                                ),
                            ]
                        ),
                        concat(
                            [
                                Literal(0x5C),
                                Literal(ord("u")),
                                Repeat(
                                    CharClass(
                                        (_DIGIT, CharRange(0x61, 0x66), CharRange(0x41, 0x46))
                                    ),
                                    4,
                                    4,
                                ),
                            ]
                        ),
                    )
                )
            ),
            0,
            None,
        ),
        Literal(0x22),
    ]
)

# -?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?
_JSON_NUMBER: Node = concat(
    [
        Repeat(Literal(ord("-")), 0, 1),
        Group(
            Alternate(
                (
                    Literal(ord("0")),
                    concat([CharClass((CharRange(0x31, 0x39),)), Repeat(CharClass((_DIGIT,)), 0, None)]),
                )
            )
        ),
        Repeat(Group(concat([Literal(ord(".")), Repeat(CharClass((_DIGIT,)), 1, None)])), 0, 1),
        Repeat(
            Group(
                concat(
                    [
                        CharClass((CharRange(ord("e"), ord("e")), CharRange(ord("E"), ord("E")))),
                        Repeat(
                            CharClass((CharRange(ord("+"), ord("+")), CharRange(ord("-"), ord("-")))),
                            0,
                            1,
                        ),
                        Repeat(CharClass((_DIGIT,)), 1, None),
                    ]
                )
            ),
            0,
            1,
        ),
    ]
)

_JSON_BOOLEAN: Node = Group(Alternate((concat(literals("true")), concat(literals("false")))))

# (?:\[\]|\[S(?:, S)*\])
_JSON_STRING_ARRAY: Node = Group(
    Alternate(
        (
            concat([Literal(ord("[")), Literal(ord("]"))]),
            concat(
                [
                    Literal(ord("[")),
                    _JSON_STRING,
                    Repeat(Group(concat(literals(", ") + [_JSON_STRING])), 0, None),
                    Literal(ord("]")),
                ]
            ),
        )
    )
)

_VALUE_NODES = {
    "string": _JSON_STRING,
    "number": _JSON_NUMBER,
    "boolean": _JSON_BOOLEAN,
    "array_of_string": _JSON_STRING_ARRAY,
}


def _bounded(node: Node, lo: int, hi: int | None) -> Node:
    if lo == 1 and hi == 1:
        return node
    return Repeat(node, lo, hi)


def _json_object_node(p: JsonObject) -> Node:
    parts: list[Node] = [Literal(ord("{")), Literal(0x0A)]
    for i, f in enumerate(p.fields):
        # The key goes through JSON escaping first so the emitted object is
        # valid JSON even for keys containing quotes or backslashes.
        parts.extend(literals("  " + json.dumps(f.key, ensure_ascii=False) + ": "))
        parts.append(_VALUE_NODES[f.type])
        if i + 1 < len(p.fields):
            parts.append(Literal(ord(",")))
        parts.append(Literal(0x0A))
    parts.append(Literal(ord("}")))
    return concat(parts)


def _list_item(prefix: str) -> Node:
    return concat(literals(prefix) + [_LINE_BODY, Literal(0x0A)])


def _ordered_list_node(p: OrderedList) -> Node:
    required = [_list_item(f"{k}. ") for k in range(1, p.min_items + 1)]
    optional: Node | None = None
    for k in range(p.max_items, p.min_items, -1):
        inner = _list_item(f"{k}. ")
        optional = Repeat(Group(inner if optional is None else concat([inner, optional])), 0, 1)
    parts = required if optional is None else required + [optional]
    return concat(parts)


def primitive_node(p: Primitive) -> Node:
    """Fragment AST for one primitive; self-delimited, safe to concatenate."""
    if isinstance(p, ExactText):
        return concat(literals(p.text))
    if isinstance(p, MultipleChoice):
        ordered = sorted(p.choices, key=len, reverse=True)  # cosmetic; DFA is order-free
        return Group(Alternate(tuple(concat(literals(c)) for c in ordered)))
    if isinstance(p, SomeText):
        return _bounded(_ANY_SCALAR, p.min_chars, p.max_chars)
    if isinstance(p, BulletList):
        return Repeat(Group(_list_item(p.bullet)), p.min_items, p.max_items)
    if isinstance(p, OrderedList):
        return _ordered_list_node(p)
    if isinstance(p, JsonObject):
        return _json_object_node(p)
    raise TypeError(f"not a primitive: {p!r}")


def compile_primitive(p: Primitive) -> str:
    """Regex fragment denoting exactly the strings the primitive admits."""
    violations = validate_spec(ConstraintSpec((p,)))
    if violations:
        raise InvalidSpec(violations)
    return render_pattern(primitive_node(p))


@dataclass(frozen=True)
class SpecSource:
    spec: ConstraintSpec


@dataclass(frozen=True)
class ManualSource:
    text: str


@dataclass(frozen=True)
class CompiledConstraint:
    """Canonical pattern plus its AST; `pattern` reparses to `ast`."""

    pattern: str
    ast: Node
    source: Union[SpecSource, ManualSource]


def compile_spec(spec: ConstraintSpec) -> CompiledConstraint:
    """Compile a validated spec; a string matches the result iff it splits
    into consecutive segments admitted by the primitives in order."""
    violations = validate_spec(spec)
    if violations:
        raise InvalidSpec(violations)
    ast = concat([primitive_node(p) for p in spec.primitives])
    return CompiledConstraint(render_pattern(ast), ast, SpecSource(spec))


def parse_manual_regex(text: str) -> CompiledConstraint:
    """Accept a hand-edited pattern if it stays inside the dialect.

    The returned pattern is the canonical rendering; the user's original
    text is kept in the source.
    """
    ast = parse_pattern(text)
    return CompiledConstraint(render_pattern(ast), ast, ManualSource(text))
