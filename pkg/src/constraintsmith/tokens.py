"""Token vocabularies and the per-state token admissibility index.

`build_index` precomputes, for every DFA state, which vocabulary tokens
can be emitted there and where each one lands, so the decoding loop does
one O(1) lookup per step instead of walking token text. Token walks are
shared through a trie over the vocabulary and advanced level-by-level
with one vectorized table gather per trie depth, which is what keeps
50k-token vocabularies in the sub-second range.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import TokenNotAllowed, UnknownState
from .fsm import Automaton, MAX_SCALAR


@dataclass(frozen=True)
class Vocabulary:
    """Dense token id -> text map plus a reserved end-of-sequence id.

    Token texts need not be unique (real BPE vocabularies carry
    duplicates); ids are dense 0..len-1 and eos_id lies outside them.
    """

    tokens: tuple[str, ...]
    eos_id: int

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("vocabulary must contain at least one token")
        if any(not isinstance(t, str) or not t for t in self.tokens):
            raise ValueError("token texts must be non-empty strings")
        if 0 <= self.eos_id < len(self.tokens):
            raise ValueError("eos_id must be reserved, not a token entry")

    def __len__(self) -> int:
        return len(self.tokens)

    def to_json(self) -> str:
        """Canonical file form: {"eos_id": N, "<id>": "<text>", ...}."""
        obj: dict = {"eos_id": self.eos_id}
        for i, t in enumerate(self.tokens):
            obj[str(i)] = t
        return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        obj = json.loads(text)
        if not isinstance(obj, dict) or "eos_id" not in obj:
            raise ValueError("vocabulary JSON must be an object with an \"eos_id\" key")
        eos_id = obj.pop("eos_id")
        if not isinstance(eos_id, int):
            raise ValueError("eos_id must be an integer")
        entries = {}
        for key, value in obj.items():
            try:
                tid = int(key)
            except ValueError:
                raise ValueError(f"non-numeric token id {key!r}") from None
            if not isinstance(value, str):
                raise ValueError(f"token {key} text must be a string")
            entries[tid] = value
        if sorted(entries) != list(range(len(entries))):
            raise ValueError("token ids must be dense 0..V-1")
        return cls(tuple(entries[i] for i in range(len(entries))), eos_id)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    @cached_property
    def content_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @cached_property
    def _trie(self) -> "_TrieLevels":
        return _TrieLevels(self.tokens)


_JSON_FRAGMENTS = [
    '": "', '",\n  "', '"\n  "', '{\n  "', '"\n}', '": ', '",\n', '"\n',
    '  "', ', "', '["', '"]', '", "', '[]', 'true', 'false', 'null',
    '": [', '],\n  "', '": true',
]
_LIST_FRAGMENTS = [
    '- ', '* ', '\n- ', '\n* ',
    '1. ', '2. ', '3. ', '4. ', '5. ', '6. ', '7. ', '8. ', '9. ', '10. ',
]
_TRIGRAMS = [
    'the', 'and', 'ing', 'ion', 'ent', 'ati', 'for', 'her', 'ter', 'hat',
    'tha', 'ere', 'ate', 'his', 'con', 'res', 'ver', 'all', 'ons', 'nce',
    'men', 'ith', 'ted', 'ers', 'pro', 'thi', 'wit', 'are', 'ess', 'not',
    'ive', 'was', 'ect', 'rea', 'com', 'eve', 'per', 'int', 'est', 'sta',
    'cti', 'ica', 'ist', 'ear', 'ain', 'one', 'our', 'iti', 'rat', 'ity',
]
_BIGRAMS = [
    'th', 'he', 'in', 'er', 'an', 're', 'on', 'at', 'en', 'nd',
    'ti', 'es', 'or', 'te', 'of', 'ed', 'is', 'it', 'al', 'ar',
    'st', 'to', 'nt', 'ng', 'se', 'ha', 'as', 'ou', 'io', 'le',
    've', 'co', 'me', 'de', 'hi', 'ri', 'ro', 'ic', 'ne', 'ea',
    'ra', 'ce', 'li', 'ch', 'll', 'be', 'ma', 'si', 'om', 'ur',
]
_SPACED_WORDS = [
    ' the', ' of', ' and', ' to', ' in', ' is', ' it', ' that', ' was',
    ' for', ' on', ' are', ' as', ' with', ' his', ' they', ' at', ' be',
    ' this', ' have', ' from', ' or', ' had', ' by', ' word', ' but',
]


def basic_vocabulary() -> Vocabulary:
    """Bundled 256-token test vocabulary: one token per printable ASCII
    scalar plus newline, then common multi-character fragments. Having
    every single scalar guarantees decoding can always make progress on
    ASCII-alphabet patterns."""
    singles = [chr(c) for c in range(0x20, 0x7F)] + ["\n"]
    tokens = singles + _JSON_FRAGMENTS + _LIST_FRAGMENTS + _TRIGRAMS + _BIGRAMS + _SPACED_WORDS
    assert len(tokens) == 256 and len(set(tokens)) == 256
    return Vocabulary(tuple(tokens), eos_id=256)


class _TrieLevels:
    """Vocabulary trie flattened into per-depth arrays for vectorized
    walking. levels[d] holds, for every node at depth d+1: the index of
    its parent within depth d (depth 0 parents the root), its scalar, and
    the ids of tokens ending there."""

    def __init__(self, tokens: tuple[str, ...]):
        root: dict = {}
        ends: dict[int, list[int]] = {}
        nodes: list[dict] = [root]

        def node_id(d: dict) -> int:
            return d["#id"]

        root["#id"] = 0
        for tid, text in enumerate(tokens):
            cur = root
            for ch in text:
                cp = ord(ch)
                nxt = cur.get(cp)
                if nxt is None:
                    nxt = {"#id": len(nodes)}
                    nodes.append(nxt)
                    cur[cp] = nxt
                cur = nxt
            ends.setdefault(node_id(cur), []).append(tid)

        self.levels: list[tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]] = []
        frontier = [root]
        while True:
            parents: list[int] = []
            scalars: list[int] = []
            children: list[dict] = []
            level_ends: list[tuple[int, int]] = []
            for pi, node in enumerate(frontier):
                for cp in sorted(k for k in node if k != "#id"):
                    child = node[cp]
                    pos = len(children)
                    parents.append(pi)
                    scalars.append(cp)
                    children.append(child)
                    for tid in ends.get(node_id(child), ()):
                        level_ends.append((pos, tid))
            if not children:
                break
            self.levels.append(
                (
                    np.asarray(parents, dtype=np.int32),
                    np.asarray(scalars, dtype=np.int32),
                    level_ends,
                )
            )
            frontier = children


def _transition_table(a: Automaton) -> tuple[np.ndarray, np.ndarray]:
    """(class starts, state x class -> target table, -1 = reject)."""
    points = {0}
    for row in a.transitions:
        for lo, hi, _ in row:
            points.add(lo)
            points.add(hi + 1)
    points.discard(MAX_SCALAR + 1)
    starts = np.asarray(sorted(points), dtype=np.int64)
    table = np.full((a.n_states, len(starts)), -1, dtype=np.int32)
    for s, row in enumerate(a.transitions):
        for lo, hi, t in row:
            i0 = int(np.searchsorted(starts, lo, side="right")) - 1
            i1 = int(np.searchsorted(starts, hi + 1, side="left"))
            table[s, i0:i1] = t
    return starts, table


@dataclass(eq=False)
class TokenIndex:
    """Per-state allowed token ids with their destination states, plus EOS
    admissibility (true exactly in accepting states). Immutable after
    build; lookups are lock-free."""

    vocab: Vocabulary
    start_state: int
    eos_id: int
    _allowed: tuple[np.ndarray, ...]
    _next: tuple[np.ndarray, ...]
    _eos_ok: np.ndarray

    @property
    def n_states(self) -> int:
        return len(self._allowed)


def build_index(a: Automaton, v: Vocabulary) -> TokenIndex:
    """Index every (state, token) pair of a pruned automaton.

    A token is allowed from a state iff walking its scalars stays inside
    the automaton the whole way; tokens valid nowhere simply never appear.
    """
    starts, table = _transition_table(a)
    n = a.n_states

    ids: list[int] = []
    final_rows: list[np.ndarray] = []

    prev_rows = np.arange(n, dtype=np.int32)[None, :]
    prev_row_of = np.zeros(1, dtype=np.int64)  # the root is always alive
    for parents, scalars, level_ends in v._trie.levels:
        parent_rows = prev_row_of[parents]
        valid = parent_rows >= 0
        if not valid.any():
            break
        cls = np.searchsorted(starts, scalars[valid], side="right") - 1
        src = prev_rows[parent_rows[valid]]
        stepped = np.where(src >= 0, table[np.maximum(src, 0), cls[:, None]], np.int32(-1))
        alive = (stepped >= 0).any(axis=1)
        rows = stepped[alive]
        row_of = np.full(len(parents), -1, dtype=np.int64)
        row_of[np.nonzero(valid)[0][alive]] = np.arange(int(alive.sum()))
        for pos, tid in level_ends:
            r = row_of[pos]
            if r >= 0:
                ids.append(tid)
                final_rows.append(rows[r])
        prev_rows = rows
        prev_row_of = row_of

    if ids:
        order = np.argsort(np.asarray(ids), kind="stable")
        ids_sorted = np.asarray(ids, dtype=np.int32)[order]
        dest = np.stack(final_rows)[order]
    else:
        ids_sorted = np.empty(0, dtype=np.int32)
        dest = np.empty((0, n), dtype=np.int32)

    allowed = []
    nxt = []
    for s in range(n):
        col = dest[:, s]
        sel = col >= 0
        allowed.append(np.ascontiguousarray(ids_sorted[sel]))
        nxt.append(np.ascontiguousarray(col[sel]))
    eos_ok = np.zeros(n, dtype=bool)
    for s in a.accepting:
        eos_ok[s] = True
    return TokenIndex(
        vocab=v,
        start_state=a.start,
        eos_id=v.eos_id,
        _allowed=tuple(allowed),
        _next=tuple(nxt),
        _eos_ok=eos_ok,
    )


def allowed_tokens(ix: TokenIndex, state: int) -> tuple[np.ndarray, bool]:
    """(sorted token ids admissible from `state`, EOS admissible?)."""
    if not 0 <= state < ix.n_states:
        raise UnknownState(f"state {state} not in index")
    return ix._allowed[state], bool(ix._eos_ok[state])


def advance(ix: TokenIndex, state: int, token_id: int) -> int:
    """Destination state after emitting an allowed token. Raises
    TokenNotAllowed otherwise — that means a decoder bug or a tampered
    mask, never normal flow."""
    if not 0 <= state < ix.n_states:
        raise UnknownState(f"state {state} not in index")
    arr = ix._allowed[state]
    i = int(np.searchsorted(arr, token_id))
    if i >= len(arr) or int(arr[i]) != token_id:
        raise TokenNotAllowed(f"token {token_id} not allowed from state {state}")
    return int(ix._next[state][i])


def encode_greedy(v: Vocabulary, text: str) -> list[int]:
    """Longest-match tokenization (ties -> lowest id). Raises ValueError
    when a character cannot be spelled; handy for building echo scripts."""
    by_text: dict[str, int] = {}
    max_len = 0
    for tid, t in enumerate(v.tokens):
        by_text.setdefault(t, tid)
        max_len = max(max_len, len(t))
    out: list[int] = []
    i = 0
    while i < len(text):
        for length in range(min(max_len, len(text) - i), 0, -1):
            tid = by_text.get(text[i : i + length])
            if tid is not None:
                out.append(tid)
                i += length
                break
        else:
            raise ValueError(f"no token spells {text[i]!r} at position {i}")
    return out
