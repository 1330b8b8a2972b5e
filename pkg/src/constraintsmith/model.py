"""Constraint primitives and their composition into a ConstraintSpec.

The six primitives mirror a GUI palette: a user lines them up left to
right and the whole line compiles to one anchored pattern. Values are
immutable after construction; `validate_spec` is the single authority on
what is well-formed (constructors accept anything structurally sound, so
a UI can hold invalid drafts while editing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidSpec, SpecFormatError

FIELD_TYPES = ("string", "number", "array_of_string", "boolean")

ORDERED_LIST_CAP = 50  # numbering is unrolled, so the cap keeps DFAs finite


@dataclass(frozen=True)
class JsonField:
    key: str
    type: str = "string"


@dataclass(frozen=True)
class JsonObject:
    """Fixed-schema JSON object; field order fixes the emitted key order."""

    fields: tuple[JsonField, ...]


@dataclass(frozen=True)
class MultipleChoice:
    choices: tuple[str, ...]


@dataclass(frozen=True)
class BulletList:
    bullet: str = "- "
    min_items: int = 1
    max_items: int = 10


@dataclass(frozen=True)
class OrderedList:
    min_items: int = 1
    max_items: int = 10


@dataclass(frozen=True)
class SomeText:
    """Free generation, bounded in characters."""

    min_chars: int = 1
    max_chars: int | None = None


@dataclass(frozen=True)
class ExactText:
    text: str


Primitive = Union[JsonObject, MultipleChoice, BulletList, OrderedList, SomeText, ExactText]

_VARIANT_TAGS = {
    JsonObject: "json_object",
    MultipleChoice: "multiple_choice",
    BulletList: "list",
    OrderedList: "ordered_list",
    SomeText: "some_text",
    ExactText: "exact_text",
}
_TAG_TO_TYPE = {tag: cls for cls, tag in _VARIANT_TAGS.items()}


@dataclass(frozen=True)
class ConstraintSpec:
    """An ordered, non-empty line of primitives, optionally named for the
    saved-constraint store."""

    primitives: tuple[Primitive, ...]
    name: str | None = None


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


def _check_primitive(p: Primitive, path: str, out: list[Violation]) -> None:
    if isinstance(p, JsonObject):
        seen = set()
        for i, f in enumerate(p.fields):
            fpath = f"{path}.fields[{i}]"
            if not isinstance(f.key, str) or not f.key:
                out.append(Violation(fpath, "field key must be a non-empty string"))
            elif f.key in seen:
                out.append(Violation(fpath, f"duplicate key {f.key!r}"))
            else:
                seen.add(f.key)
            if f.type not in FIELD_TYPES:
                out.append(
                    Violation(fpath, f"unknown field type {f.type!r} (expected one of {FIELD_TYPES})")
                )
    elif isinstance(p, MultipleChoice):
        if len(p.choices) < 2:
            out.append(Violation(path, "multiple choice needs at least 2 choices"))
        seen = set()
        for i, c in enumerate(p.choices):
            if not isinstance(c, str) or not c:
                out.append(Violation(f"{path}.choices[{i}]", "choice must be a non-empty string"))
            elif c in seen:
                out.append(Violation(f"{path}.choices[{i}]", f"duplicate choice {c!r}"))
            else:
                seen.add(c)
    elif isinstance(p, BulletList):
        if not isinstance(p.bullet, str) or not p.bullet:
            out.append(Violation(path, "bullet must be a non-empty string"))
        if p.min_items < 1:
            out.append(Violation(path, "min_items must be >= 1"))
        if p.max_items < p.min_items:
            out.append(Violation(path, "max_items must be >= min_items"))
    elif isinstance(p, OrderedList):
        if p.min_items < 1:
            out.append(Violation(path, "min_items must be >= 1"))
        if p.max_items < p.min_items:
            out.append(Violation(path, "max_items must be >= min_items"))
        if p.max_items > ORDERED_LIST_CAP:
            out.append(Violation(path, f"max_items must be <= {ORDERED_LIST_CAP}"))
    elif isinstance(p, SomeText):
        if p.min_chars < 1:
            out.append(Violation(path, "min_chars must be >= 1"))
        if p.max_chars is not None and p.max_chars < p.min_chars:
            out.append(Violation(path, "max_chars must be >= min_chars"))
    elif isinstance(p, ExactText):
        if not isinstance(p.text, str) or not p.text:
            out.append(Violation(path, "text must be a non-empty string"))
    else:
        out.append(Violation(path, f"unknown primitive {type(p).__name__}"))


def validate_spec(spec: ConstraintSpec) -> list[Violation]:
    """Return every invariant violation; an empty list means the spec
    compiles. Pure: identical input yields an identical list."""
    out: list[Violation] = []
    if not spec.primitives:
        out.append(Violation("primitives", "constraint needs at least one primitive"))
        return out
    for i, p in enumerate(spec.primitives):
        _check_primitive(p, f"primitives[{i}]", out)
    for i in range(len(spec.primitives) - 1):
        if isinstance(spec.primitives[i], SomeText) and isinstance(spec.primitives[i + 1], SomeText):
            out.append(
                Violation(
                    f"primitives[{i + 1}]",
                    "adjacent free-text primitives (their boundary is undecidable; merge them)",
                )
            )
    return out


def _primitive_to_obj(p: Primitive) -> dict:
    tag = _VARIANT_TAGS[type(p)]
    if isinstance(p, JsonObject):
        return {"type": tag, "fields": [{"key": f.key, "type": f.type} for f in p.fields]}
    if isinstance(p, MultipleChoice):
        return {"type": tag, "choices": list(p.choices)}
    if isinstance(p, BulletList):
        return {"type": tag, "bullet": p.bullet, "min_items": p.min_items, "max_items": p.max_items}
    if isinstance(p, OrderedList):
        return {"type": tag, "min_items": p.min_items, "max_items": p.max_items}
    if isinstance(p, SomeText):
        obj = {"type": tag, "min_chars": p.min_chars}
        if p.max_chars is not None:
            obj["max_chars"] = p.max_chars
        return obj
    if isinstance(p, ExactText):
        return {"type": tag, "text": p.text}
    raise TypeError(f"not a primitive: {p!r}")


def spec_to_obj(spec: ConstraintSpec) -> dict:
    obj: dict = {}
    if spec.name is not None:
        obj["name"] = spec.name
    obj["primitives"] = [_primitive_to_obj(p) for p in spec.primitives]
    return obj


def serialize_spec(spec: ConstraintSpec) -> str:
    """Canonical JSON text: 2-space indent, fixed key order, trailing
    newline. The store and the service both round-trip this form."""
    return json.dumps(spec_to_obj(spec), indent=2, ensure_ascii=False) + "\n"


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise SpecFormatError(message, path)


def _primitive_from_obj(obj, path: str) -> Primitive:
    _expect(isinstance(obj, dict), "primitive must be a JSON object", path)
    tag = obj.get("type")
    _expect(isinstance(tag, str), "primitive is missing its \"type\" tag", path)
    cls = _TAG_TO_TYPE.get(tag)
    if cls is None:
        raise SpecFormatError(f"unknown variant {tag!r}", path)
    known = {"type"}
    if cls is JsonObject:
        fields = obj.get("fields", [])
        known.add("fields")
        _expect(isinstance(fields, list), "fields must be a list", f"{path}.fields")
        parsed = []
        for i, f in enumerate(fields):
            fpath = f"{path}.fields[{i}]"
            _expect(isinstance(f, dict), "field must be an object", fpath)
            key = f.get("key")
            _expect(isinstance(key, str), "field key must be a string", fpath)
            ftype = f.get("type", "string")
            _expect(isinstance(ftype, str), "field type must be a string", fpath)
            parsed.append(JsonField(key, ftype))
        prim: Primitive = JsonObject(tuple(parsed))
    elif cls is MultipleChoice:
        choices = obj.get("choices", [])
        known.add("choices")
        _expect(isinstance(choices, list), "choices must be a list", f"{path}.choices")
        _expect(all(isinstance(c, str) for c in choices), "choices must be strings", f"{path}.choices")
        prim = MultipleChoice(tuple(choices))
    elif cls is BulletList:
        known.update(("bullet", "min_items", "max_items"))
        prim = BulletList(
            bullet=_opt_str(obj, "bullet", "- ", path),
            min_items=_opt_int(obj, "min_items", 1, path),
            max_items=_opt_int(obj, "max_items", 10, path),
        )
    elif cls is OrderedList:
        known.update(("min_items", "max_items"))
        prim = OrderedList(
            min_items=_opt_int(obj, "min_items", 1, path),
            max_items=_opt_int(obj, "max_items", 10, path),
        )
    elif cls is SomeText:
        known.update(("min_chars", "max_chars"))
        max_chars = obj.get("max_chars")
        if max_chars is not None:
            _expect(isinstance(max_chars, int) and not isinstance(max_chars, bool),
                    "max_chars must be an integer", f"{path}.max_chars")
        prim = SomeText(min_chars=_opt_int(obj, "min_chars", 1, path), max_chars=max_chars)
    else:  # ExactText
        known.add("text")
        text = obj.get("text")
        _expect(isinstance(text, str), "text must be a string", f"{path}.text")
        prim = ExactText(text)
    extra = set(obj) - known
    _expect(not extra, f"unknown keys {sorted(extra)}", path)
    return prim


def _opt_str(obj: dict, key: str, default: str, path: str) -> str:
    value = obj.get(key, default)
    _expect(isinstance(value, str), f"{key} must be a string", f"{path}.{key}")
    return value


def _opt_int(obj: dict, key: str, default: int, path: str) -> int:
    value = obj.get(key, default)
    _expect(isinstance(value, int) and not isinstance(value, bool),
            f"{key} must be an integer", f"{path}.{key}")
    return value


def spec_from_obj(obj) -> ConstraintSpec:
    """Decode the JSON object form. Accepts either the full document
    ({"name"?, "primitives": [...]}) or a bare primitive list."""
    if isinstance(obj, list):
        obj = {"primitives": obj}
    _expect(isinstance(obj, dict), "constraint document must be an object or a list", "")
    name = obj.get("name")
    if name is not None:
        _expect(isinstance(name, str), "name must be a string", "name")
    prims = obj.get("primitives")
    _expect(isinstance(prims, list), "\"primitives\" must be a list", "primitives")
    extra = set(obj) - {"name", "primitives"}
    _expect(not extra, f"unknown keys {sorted(extra)}", "")
    spec = ConstraintSpec(
        tuple(_primitive_from_obj(p, f"primitives[{i}]") for i, p in enumerate(prims)),
        name=name,
    )
    violations = validate_spec(spec)
    if violations:
        raise InvalidSpec(violations)
    return spec


def parse_spec(text: str) -> ConstraintSpec:
    """Inverse of serialize_spec. Raises SpecFormatError for malformed
    JSON / unknown variants and InvalidSpec for invariant violations."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"malformed JSON: {exc}", "") from exc
    return spec_from_obj(obj)
