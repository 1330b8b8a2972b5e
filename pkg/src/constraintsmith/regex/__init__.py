"""Restricted regex dialect: AST, parser, renderer, and the primitive
compiler. Everything here denotes regular languages only."""

from .compile import (
    CompiledConstraint,
    ManualSource,
    SpecSource,
    compile_primitive,
    compile_spec,
    parse_manual_regex,
    primitive_node,
)
from .nodes import (
    Alternate,
    AnyChar,
    CharClass,
    CharRange,
    ClassShorthand,
    Concat,
    Group,
    Literal,
    Node,
    Repeat,
    render_pattern,
)
from .parser import parse_pattern

__all__ = [
    "Alternate",
    "AnyChar",
    "CharClass",
    "CharRange",
    "ClassShorthand",
    "CompiledConstraint",
    "Concat",
    "Group",
    "Literal",
    "ManualSource",
    "Node",
    "Repeat",
    "SpecSource",
    "compile_primitive",
    "compile_spec",
    "parse_manual_regex",
    "parse_pattern",
    "primitive_node",
    "render_pattern",
]
