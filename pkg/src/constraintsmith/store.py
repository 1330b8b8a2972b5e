"""File-backed store of named constraints.

One canonical JSON document per constraint (`<name>.json`), inspectable
and diff-able; creation times live in a sidecar `.meta.json` so the
constraint files themselves stay byte-identical to what GET returns.
Mutations are serialized per name.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import NameCollision, SpecFormatError, StoreError
from .model import parse_spec, serialize_spec
from .regex.compile import compile_spec, parse_manual_regex

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,127}$")


def pattern_hash(pattern: str) -> str:
    return hashlib.sha256(pattern.encode("utf-8")).hexdigest()[:16]


def canonicalize_document(text: str) -> tuple[str, str]:
    """Validate a constraint document and return (canonical text, pattern).

    A document is either a spec ({"primitives": [...]} or a bare list) or
    a manual pattern ({"pattern": "..."}); both compile here, so storing
    an uncompilable constraint is impossible.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"malformed JSON: {exc}", "") from exc
    if isinstance(obj, dict) and "pattern" in obj:
        extra = set(obj) - {"pattern", "name"}
        if extra:
            raise SpecFormatError(f"unknown keys {sorted(extra)}", "")
        if not isinstance(obj["pattern"], str):
            raise SpecFormatError("pattern must be a string", "pattern")
        compiled = parse_manual_regex(obj["pattern"])
        doc: dict = {}
        if obj.get("name") is not None:
            doc["name"] = obj["name"]
        doc["pattern"] = obj["pattern"]
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", compiled.pattern
    spec = parse_spec(text)
    return serialize_spec(spec), compile_spec(spec).pattern


@dataclass(frozen=True)
class StoreEntry:
    name: str
    pattern_hash: str
    created: float
    modified: float


class ConstraintStore:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._meta_path = self.directory / ".meta.json"
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, name: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(name.lower(), threading.Lock())

    def _check_name(self, name: str) -> None:
        if not _NAME_RE.match(name):
            raise StoreError(
                f"invalid constraint name {name!r} (use letters, digits, . _ -)"
            )

    def _path(self, name: str) -> Path:
        return self.directory / f"{name}.json"

    def _existing_casing(self, name: str) -> str | None:
        lowered = name.lower()
        for p in self.directory.glob("*.json"):
            if p.stem.lower() == lowered:
                return p.stem
        return None

    def _load_meta(self) -> dict:
        try:
            return json.loads(self._meta_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return {}

    def _save_meta(self, meta: dict) -> None:
        self._meta_path.write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def put(self, name: str, document: str) -> StoreEntry:
        """Canonicalize and persist; overwrites an existing constraint of
        the same name. A name differing only in case is a conflict."""
        self._check_name(name)
        with self._lock_for(name):
            existing = self._existing_casing(name)
            if existing is not None and existing != name:
                raise NameCollision(
                    f"name {name!r} collides with stored {existing!r} (names are case-insensitively unique)"
                )
            canonical, pattern = canonicalize_document(document)
            path = self._path(name)
            created = time.time()
            meta = self._load_meta()
            if path.exists() and name in meta:
                created = meta[name]["created"]
            path.write_text(canonical, encoding="utf-8")
            meta[name] = {"created": created}
            self._save_meta(meta)
            return StoreEntry(name, pattern_hash(pattern), created, path.stat().st_mtime)

    def get(self, name: str) -> str | None:
        """Stored canonical document, byte-identical to what put wrote."""
        self._check_name(name)
        path = self._path(name)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    def delete(self, name: str) -> bool:
        self._check_name(name)
        with self._lock_for(name):
            path = self._path(name)
            if not path.exists():
                return False
            path.unlink()
            meta = self._load_meta()
            meta.pop(name, None)
            self._save_meta(meta)
            return True

    def list(self) -> list[StoreEntry]:
        """Entries sorted lexicographically by name."""
        meta = self._load_meta()
        out = []
        for path in sorted(self.directory.glob("*.json")):
            name = path.stem
            try:
                _, pattern = canonicalize_document(path.read_text(encoding="utf-8"))
            except Exception:
                continue  # foreign or corrupt file; not ours to report
            created = meta.get(name, {}).get("created", path.stat().st_mtime)
            out.append(StoreEntry(name, pattern_hash(pattern), created, path.stat().st_mtime))
        return out
