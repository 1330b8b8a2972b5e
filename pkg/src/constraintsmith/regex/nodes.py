"""Regex AST for the restricted dialect, plus the canonical renderer.

Every node denotes a regular language: no backreferences, no lookaround,
no capture semantics. Groups exist for precedence only and always render
as `(?:...)`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

MAX_SCALAR = 0x10FFFF
SURROGATE_LO = 0xD800
SURROGATE_HI = 0xDFFF


@dataclass(frozen=True)
class Literal:
    """A single Unicode scalar value."""

    scalar: int


@dataclass(frozen=True)
class AnyChar:
    """`.` — any scalar except newline."""


@dataclass(frozen=True)
class CharRange:
    """Inclusive scalar range inside a character class; lo == hi for a
    single character."""

    lo: int
    hi: int


@dataclass(frozen=True)
class ClassShorthand:
    """One of the `\\d \\D \\s \\S \\w \\W` shorthand classes."""

    kind: str


ClassItem = Union[CharRange, ClassShorthand]


@dataclass(frozen=True)
class CharClass:
    """`[...]` / `[^...]`. Item order is preserved (it is part of the
    canonical form), only the DFA builder normalizes."""

    items: tuple[ClassItem, ...]
    negated: bool = False


@dataclass(frozen=True)
class Concat:
    """Sequence of parts; `Concat(())` is the empty pattern."""

    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Alternate:
    options: tuple["Node", ...]


@dataclass(frozen=True)
class Repeat:
    """`{min,max}`; max=None means unbounded. The child must be atomic
    (literal, class, `.`, or group) — the parser and compiler guarantee it."""

    child: "Node"
    min: int
    max: int | None


@dataclass(frozen=True)
class Group:
    """Non-capturing group, rendered `(?:...)`."""

    child: "Node"


Node = Union[Literal, AnyChar, CharClass, Concat, Alternate, Repeat, Group]

_ATOMIC = (Literal, AnyChar, CharClass, Group)


def concat(parts) -> Node:
    """Flatten nested concatenations; a single part collapses to itself."""
    flat: list[Node] = []
    for p in parts:
        if isinstance(p, Concat):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def alternate(options) -> Node:
    options = tuple(options)
    if len(options) == 1:
        return options[0]
    return Alternate(options)


def literals(text: str) -> list[Node]:
    return [Literal(ord(ch)) for ch in text]


# Metacharacters escaped when a literal is rendered outside a class.
_META = set("\\.*+?()[]{}|^$")
# Characters escaped inside a class regardless of position.
_CLASS_META = set("\\]^[")


def _render_scalar(cp: int, in_class: bool) -> str:
    ch = chr(cp)
    if ch == "\n":
        return "\\n"
    if ch == "\t":
        return "\\t"
    if ch == "\r":
        return "\\r"
    if cp < 0x20 or cp == 0x7F:
        return f"\\x{cp:02x}"
    if in_class:
        return "\\" + ch if ch in _CLASS_META else ch
    return "\\" + ch if ch in _META else ch


def _render_class_item(item: ClassItem, first: bool, last: bool) -> str:
    if isinstance(item, ClassShorthand):
        return "\\" + item.kind
    if item.lo == item.hi:
        if item.lo == ord("-"):
            # A dash is unambiguous only at the edges of the class.
            return "-" if (first or last) else "\\-"
        return _render_scalar(item.lo, in_class=True)

    def endpoint(cp: int) -> str:
        return "\\-" if cp == ord("-") else _render_scalar(cp, in_class=True)

    return f"{endpoint(item.lo)}-{endpoint(item.hi)}"


def _render_class(node: CharClass) -> str:
    if len(node.items) == 1 and isinstance(node.items[0], ClassShorthand) and not node.negated:
        return "\\" + node.items[0].kind
    n = len(node.items)
    body = "".join(
        _render_class_item(item, i == 0, i == n - 1) for i, item in enumerate(node.items)
    )
    return "[" + ("^" if node.negated else "") + body + "]"


def _render_quant(lo: int, hi: int | None) -> str:
    if (lo, hi) == (0, 1):
        return "?"
    if (lo, hi) == (0, None):
        return "*"
    if (lo, hi) == (1, None):
        return "+"
    if hi is None:
        return f"{{{lo},}}"
    if lo == hi:
        return f"{{{lo}}}"
    return f"{{{lo},{hi}}}"


def render_pattern(node: Node) -> str:
    """Render an AST to canonical pattern text. parse(render(x)) == x for
    ASTs in parser shape (groups wherever precedence needs them)."""
    if isinstance(node, Literal):
        return _render_scalar(node.scalar, in_class=False)
    if isinstance(node, AnyChar):
        return "."
    if isinstance(node, CharClass):
        return _render_class(node)
    if isinstance(node, Group):
        return "(?:" + render_pattern(node.child) + ")"
    if isinstance(node, Repeat):
        child = render_pattern(node.child)
        if not isinstance(node.child, _ATOMIC):
            child = "(?:" + child + ")"
        return child + _render_quant(node.min, node.max)
    if isinstance(node, Concat):
        out = []
        for part in node.parts:
            text = render_pattern(part)
            if isinstance(part, Alternate):
                text = "(?:" + text + ")"
            out.append(text)
        return "".join(out)
    if isinstance(node, Alternate):
        return "|".join(render_pattern(o) for o in node.options)
    raise TypeError(f"not a regex node: {node!r}")
