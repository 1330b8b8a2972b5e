"""Recursive-descent parser for the restricted regex dialect.

Grammar (documented in docs/regex-dialect.md):

    pattern     = alternation
    alternation = concat ("|" concat)*
    concat      = repeatable*
    repeatable  = atom quantifier?
    quantifier  = "*" | "+" | "?" | "{" m ("," n?)? "}"
    atom        = literal | escape | "." | class | "(?:" alternation ")"
                | "(" alternation ")"
    class       = "[" "^"? item+ "]"

Anything outside the dialect raises UnsupportedFeature with the feature
name (backreference, lookaround, lazy quantifier, anchor, named group,
inline flags) so a UI can explain the rejection; plain malformed input
raises PatternSyntaxError. Both carry the character offset.
"""

from __future__ import annotations

from ..errors import PatternSyntaxError, UnsupportedFeature
from .nodes import (
    AnyChar,
    CharClass,
    CharRange,
    ClassShorthand,
    Concat,
    Group,
    Literal,
    Node,
    Repeat,
    SURROGATE_HI,
    SURROGATE_LO,
    alternate,
    concat,
)

_SHORTHANDS = "dDsSwW"
_QUANT_MAX = 100_000
_HEX = "0123456789abcdefABCDEF"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, offset: int | None = None):
        raise PatternSyntaxError(message, self.pos if offset is None else offset)

    def unsupported(self, feature: str, offset: int):
        raise UnsupportedFeature(feature, offset)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def take(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    # --- grammar ---

    def parse(self) -> Node:
        node = self.alternation()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.text[self.pos]!r}")
        return node

    def alternation(self) -> Node:
        options = [self.concatenation()]
        while self.peek() == "|":
            self.take()
            options.append(self.concatenation())
        return alternate(options)

    def concatenation(self) -> Node:
        parts: list[Node] = []
        while self.pos < len(self.text) and self.peek() not in "|)":
            parts.append(self.repeatable())
        if not parts:
            return Concat(())
        return concat(parts)

    def repeatable(self) -> Node:
        node = self.atom()
        quant = self.try_quantifier()
        if quant is None:
            return node
        lo, hi = quant
        node = Repeat(node, lo, hi)
        nxt = self.peek()
        if nxt == "?":
            self.unsupported("lazy quantifier", self.pos)
        if nxt in ("*", "+") or (nxt == "{" and self._looks_like_quantifier()):
            self.error("multiple repeat")
        return node

    def _looks_like_quantifier(self) -> bool:
        return self.peek(1).isdigit()

    def try_quantifier(self) -> tuple[int, int | None] | None:
        ch = self.peek()
        if ch == "*":
            self.take()
            return (0, None)
        if ch == "+":
            self.take()
            return (1, None)
        if ch == "?":
            self.take()
            return (0, 1)
        if ch == "{":
            start = self.pos
            self.take()
            lo = self._int(start)
            hi: int | None = lo
            if self.peek() == ",":
                self.take()
                hi = None if self.peek() == "}" else self._int(start)
            if self.peek() != "}":
                self.error("malformed quantifier", start)
            self.take()
            if hi is not None and hi < lo:
                self.error("quantifier minimum exceeds maximum", start)
            return (lo, hi)
        return None

    def _int(self, quant_start: int) -> int:
        digits = ""
        while self.peek().isdigit():
            digits += self.take()
        if not digits:
            self.error("malformed quantifier", quant_start)
        value = int(digits)
        if value > _QUANT_MAX:
            self.error(f"quantifier bound exceeds {_QUANT_MAX}", quant_start)
        return value

    def atom(self) -> Node:
        ch = self.peek()
        if ch == "(":
            return self.group()
        if ch == "[":
            return self.char_class()
        if ch == ".":
            self.take()
            return AnyChar()
        if ch == "\\":
            return self.escape_atom()
        if ch in "*+?":
            self.error("nothing to repeat")
        if ch == "{":
            self.error("unescaped { (quantifier without atom)")
        if ch == "}":
            self.error("unescaped }")
        if ch == "]":
            self.error("unescaped ]")
        if ch in "^$":
            self.unsupported("anchor", self.pos)
        cp = ord(self.take())
        if SURROGATE_LO <= cp <= SURROGATE_HI:
            self.error("surrogate code point", self.pos - 1)
        return Literal(cp)

    def group(self) -> Node:
        start = self.pos
        self.take()  # (
        if self.peek() == "?":
            marker = self.peek(1)
            if marker == ":":
                self.take()
                self.take()
            elif marker in "=!":
                self.unsupported("lookaround", start)
            elif marker == "<":
                if self.peek(2) in "=!":
                    self.unsupported("lookaround", start)
                self.unsupported("named group", start)
            elif marker == "P":
                self.unsupported("named group", start)
            else:
                self.unsupported("inline flags", start)
        inner = self.alternation()
        if self.peek() != ")":
            self.error("unterminated group", start)
        self.take()
        return Group(inner)

    def escape_atom(self) -> Node:
        start = self.pos
        self.take()  # backslash
        if self.pos >= len(self.text):
            self.error("trailing backslash", start)
        ch = self.take()
        if ch in "123456789":
            self.unsupported("backreference", start)
        if ch == "k":
            self.unsupported("backreference", start)
        if ch in "bBAZz":
            self.unsupported("anchor", start)
        if ch in _SHORTHANDS:
            return CharClass((ClassShorthand(ch),), negated=False)
        cp = self._escape_scalar(ch, start)
        return Literal(cp)

    def _escape_scalar(self, ch: str, start: int) -> int:
        """Scalar denoted by an escape valid both inside and outside classes."""
        if ch == "n":
            return 0x0A
        if ch == "t":
            return 0x09
        if ch == "r":
            return 0x0D
        if ch == "0":
            return 0x00
        if ch == "x":
            return self._hex(2, start)
        if ch == "u":
            return self._hex(4, start)
        if ch in "\\.*+?()[]{}|^$-/":
            return ord(ch)
        self.error(f"unrecognized escape \\{ch}", start)

    def _hex(self, width: int, start: int) -> int:
        digits = self.text[self.pos : self.pos + width]
        if len(digits) < width or any(d not in _HEX for d in digits):
            self.error(f"expected {width} hex digits", start)
        self.pos += width
        cp = int(digits, 16)
        if SURROGATE_LO <= cp <= SURROGATE_HI:
            self.error("surrogate code point", start)
        return cp

    def char_class(self) -> Node:
        start = self.pos
        self.take()  # [
        negated = False
        if self.peek() == "^":
            self.take()
            negated = True
        items: list = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated character class", start)
            if self.peek() == "]":
                if not items:
                    self.error("empty character class", start)
                self.take()
                return CharClass(tuple(items), negated)
            items.append(self.class_item(bool(items)))

    def class_item(self, have_items: bool):
        if self.peek() == "-":
            # A bare dash is a literal only at the edges of the class.
            if not have_items or self.peek(1) == "]":
                self.take()
                return CharRange(ord("-"), ord("-"))
            self.error("misplaced dash in character class")
        item_start = self.pos
        first = self.class_char()
        if isinstance(first, ClassShorthand):
            if self.peek() == "-" and self.peek(1) != "]":
                self.error("shorthand cannot bound a range", item_start)
            return first
        if self.peek() == "-" and self.peek(1) != "]" and self.peek(1) != "":
            self.take()
            second = self.class_char()
            if isinstance(second, ClassShorthand):
                self.error("shorthand cannot bound a range", item_start)
            if second < first:
                self.error("reversed character range", item_start)
            return CharRange(first, second)
        return CharRange(first, first)

    def class_char(self):
        """A single class member: scalar int, or ClassShorthand."""
        start = self.pos
        ch = self.take()
        if ch == "\\":
            if self.pos >= len(self.text):
                self.error("trailing backslash", start)
            esc = self.take()
            if esc in _SHORTHANDS:
                return ClassShorthand(esc)
            if esc in "bBAZz123456789k":
                self.error(f"escape \\{esc} not allowed in character class", start)
            return self._escape_scalar(esc, start)
        cp = ord(ch)
        if SURROGATE_LO <= cp <= SURROGATE_HI:
            self.error("surrogate code point", start)
        return cp


def parse_pattern(text: str) -> Node:
    """Parse dialect pattern text into an AST.

    Raises PatternSyntaxError or UnsupportedFeature, both carrying the
    character offset of the problem.
    """
    return _Parser(text).parse()
