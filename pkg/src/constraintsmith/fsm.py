"""DFA construction and queries over Unicode scalar values.

Pipeline: AST -> Thompson NFA -> subset construction -> dead-state
pruning -> Hopcroft minimization (default on) -> BFS renumbering.
Transitions are stored as sorted scalar intervals per state, never as
dense tables; the alphabet is the full scalar space minus surrogates.

After construction every retained state is live (some accepting state is
reachable), so a missing transition is the only way to reject.
"""

from __future__ import annotations

import bisect
import random
from collections import deque
from dataclasses import dataclass, field

from .errors import ComplexityLimit, EmptyLanguage, LengthExceeded, UnknownState
from .regex.nodes import (
    Alternate,
    AnyChar,
    CharClass,
    CharRange,
    Concat,
    Group,
    Literal,
    MAX_SCALAR,
    Node,
    Repeat,
    SURROGATE_HI,
    SURROGATE_LO,
)

DEFAULT_STATE_CAP = 100_000

# Scalar values = code points minus the surrogate block.
UNIVERSE: tuple[tuple[int, int], ...] = ((0, SURROGATE_LO - 1), (SURROGATE_HI + 1, MAX_SCALAR))

_SHORTHAND_RANGES = {
    "d": [(0x30, 0x39)],
    "s": [(0x09, 0x0D), (0x20, 0x20)],
    "w": [(0x30, 0x39), (0x41, 0x5A), (0x5F, 0x5F), (0x61, 0x7A)],
}


def normalize_ranges(ranges) -> list[tuple[int, int]]:
    """Sort, clamp to the scalar universe, and merge overlaps."""
    clamped = []
    for lo, hi in ranges:
        for ulo, uhi in UNIVERSE:
            a, b = max(lo, ulo), min(hi, uhi)
            if a <= b:
                clamped.append((a, b))
    clamped.sort()
    merged: list[tuple[int, int]] = []
    for lo, hi in clamped:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def complement_ranges(ranges) -> list[tuple[int, int]]:
    ranges = normalize_ranges(ranges)
    out = []
    for ulo, uhi in UNIVERSE:
        cursor = ulo
        for lo, hi in ranges:
            if hi < ulo or lo > uhi:
                continue
            if lo > cursor:
                out.append((cursor, lo - 1))
            cursor = max(cursor, hi + 1)
        if cursor <= uhi:
            out.append((cursor, uhi))
    return normalize_ranges(out)


def class_ranges(node: CharClass) -> list[tuple[int, int]]:
    ranges: list[tuple[int, int]] = []
    for item in node.items:
        if isinstance(item, CharRange):
            ranges.append((item.lo, item.hi))
        else:
            base = _SHORTHAND_RANGES[item.kind.lower()]
            ranges.extend(base if item.kind.islower() else complement_ranges(base))
    ranges = normalize_ranges(ranges)
    return complement_ranges(ranges) if node.negated else ranges


def leaf_ranges(node: Node) -> list[tuple[int, int]]:
    if isinstance(node, Literal):
        return [(node.scalar, node.scalar)]
    if isinstance(node, AnyChar):
        return complement_ranges([(0x0A, 0x0A)])
    if isinstance(node, CharClass):
        return class_ranges(node)
    raise TypeError(f"not a leaf: {node!r}")


def _collect_leaves(node: Node, out: list[Node]) -> None:
    if isinstance(node, (Literal, AnyChar, CharClass)):
        out.append(node)
    elif isinstance(node, Concat):
        for p in node.parts:
            _collect_leaves(p, out)
    elif isinstance(node, Alternate):
        for o in node.options:
            _collect_leaves(o, out)
    elif isinstance(node, (Repeat, Group)):
        _collect_leaves(node.child, out)


class _ClassMap:
    """Partition of the scalar space into classes such that every AST leaf
    is a union of whole classes."""

    def __init__(self, ast: Node):
        leaves: list[Node] = []
        _collect_leaves(ast, leaves)
        points = {0, SURROGATE_LO, SURROGATE_HI + 1}
        for leaf in leaves:
            for lo, hi in leaf_ranges(leaf):
                points.add(lo)
                points.add(hi + 1)
        points.discard(MAX_SCALAR + 1)
        self.starts = sorted(points)
        self.n_classes = len(self.starts)

    def end_of(self, cls: int) -> int:
        return self.starts[cls + 1] - 1 if cls + 1 < self.n_classes else MAX_SCALAR

    def classes_for(self, ranges) -> list[int]:
        out = []
        for lo, hi in ranges:
            first = bisect.bisect_right(self.starts, lo) - 1
            last = bisect.bisect_right(self.starts, hi) - 1
            out.extend(range(first, last + 1))
        return sorted(set(out))


class _Nfa:
    """Thompson construction; edges labeled with class ids."""

    def __init__(self, classmap: _ClassMap, state_cap: int):
        self.classmap = classmap
        self.state_cap = state_cap
        self.eps: list[list[int]] = []
        self.edges: list[list[tuple[int, int]]] = []

    def new_state(self) -> int:
        if len(self.eps) >= self.state_cap:
            raise ComplexityLimit(
                f"NFA exceeds {self.state_cap} states; simplify the constraint"
            )
        self.eps.append([])
        self.edges.append([])
        return len(self.eps) - 1

    def build(self, node: Node) -> tuple[int, int]:
        if isinstance(node, (Literal, AnyChar, CharClass)):
            s, e = self.new_state(), self.new_state()
            for cls in self.classmap.classes_for(leaf_ranges(node)):
                self.edges[s].append((cls, e))
            return s, e
        if isinstance(node, Group):
            return self.build(node.child)
        if isinstance(node, Concat):
            s = e = self.new_state()
            for part in node.parts:
                ps, pe = self.build(part)
                self.eps[e].append(ps)
                e = pe
            return s, e
        if isinstance(node, Alternate):
            s, e = self.new_state(), self.new_state()
            for option in node.options:
                os_, oe = self.build(option)
                self.eps[s].append(os_)
                self.eps[oe].append(e)
            return s, e
        if isinstance(node, Repeat):
            return self._build_repeat(node)
        raise TypeError(f"not a regex node: {node!r}")

    def _build_repeat(self, node: Repeat) -> tuple[int, int]:
        start = cur = self.new_state()
        for _ in range(node.min):
            cs, ce = self.build(node.child)
            self.eps[cur].append(cs)
            cur = ce
        if node.max is None:
            cs, ce = self.build(node.child)
            end = self.new_state()
            self.eps[cur].append(cs)
            self.eps[cur].append(end)
            self.eps[ce].append(cs)
            self.eps[ce].append(end)
            return start, end
        tails = [cur]
        for _ in range(node.max - node.min):
            cs, ce = self.build(node.child)
            self.eps[cur].append(cs)
            tails.append(ce)
            cur = ce
        end = self.new_state()
        for t in tails:
            self.eps[t].append(end)
        return start, end

    def closure(self, states) -> frozenset[int]:
        seen = set(states)
        stack = list(states)
        while stack:
            for t in self.eps[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


@dataclass(frozen=True, eq=False)
class Automaton:
    """Immutable DFA. `transitions[s]` is a sorted tuple of
    (lo, hi, target) scalar intervals, disjoint per state. State ids are
    dense and BFS-ordered from `start`; every retained state is live."""

    start: int
    n_states: int
    accepting: frozenset[int]
    transitions: tuple[tuple[tuple[int, int, int], ...], ...]
    _lows: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_lows", tuple(tuple(lo for lo, _, _ in row) for row in self.transitions)
        )

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return (
            self.start == other.start
            and self.n_states == other.n_states
            and self.accepting == other.accepting
            and self.transitions == other.transitions
        )


def _subset_construct(nfa: _Nfa, start: int, accept: int, cap: int):
    init = nfa.closure([start])
    ids: dict[frozenset[int], int] = {init: 0}
    order = [init]
    trans: list[dict[int, int]] = []
    queue = deque([init])
    while queue:
        current = queue.popleft()
        by_class: dict[int, set[int]] = {}
        for s in current:
            for cls, t in nfa.edges[s]:
                by_class.setdefault(cls, set()).add(t)
        row: dict[int, int] = {}
        for cls in sorted(by_class):
            target = nfa.closure(by_class[cls])
            if target not in ids:
                if len(ids) >= cap:
                    raise ComplexityLimit(f"DFA exceeds {cap} states; simplify the constraint")
                ids[target] = len(ids)
                order.append(target)
                queue.append(target)
            row[cls] = ids[target]
        trans.append(row)
    accepting = {i for i, st in enumerate(order) if accept in st}
    return trans, accepting


def _prune_dead(trans, accepting, start):
    n = len(trans)
    reverse: list[list[int]] = [[] for _ in range(n)]
    for s, row in enumerate(trans):
        for t in row.values():
            reverse[t].append(s)
    live = set(accepting)
    stack = list(accepting)
    while stack:
        for p in reverse[stack.pop()]:
            if p not in live:
                live.add(p)
                stack.append(p)
    if start not in live:
        raise EmptyLanguage("the pattern admits no string")
    remap = {}
    for s in range(n):
        if s in live:
            remap[s] = len(remap)
    new_trans = []
    for s in range(n):
        if s not in remap:
            continue
        new_trans.append({c: remap[t] for c, t in trans[s].items() if t in remap})
    return new_trans, {remap[s] for s in accepting}, remap[start]


def _minimize(trans, accepting, start, n_classes):
    """Hopcroft partition refinement. The transition function is completed
    with a sink; live states can never merge with it (their languages are
    nonempty), so the sink block is dropped afterwards."""
    n = len(trans)
    sink = n
    preimage: list[dict[int, list[int]]] = [{} for _ in range(n_classes)]
    for s, row in enumerate(trans):
        for c in range(n_classes):
            preimage[c].setdefault(row.get(c, sink), []).append(s)
    for c in range(n_classes):
        preimage[c].setdefault(sink, []).append(sink)

    acc = frozenset(accepting)
    rest = frozenset(range(n + 1)) - acc
    partition: set[frozenset[int]] = {b for b in (acc, rest) if b}
    worklist: list[frozenset[int]] = sorted(partition, key=min)
    block_of = {}
    for b in partition:
        for s in b:
            block_of[s] = b

    while worklist:
        splitter = worklist.pop()
        for c in range(n_classes):
            x = set()
            for t in splitter:
                x.update(preimage[c].get(t, ()))
            if not x:
                continue
            touched = {}
            for s in x:
                touched.setdefault(block_of[s], set()).add(s)
            for block, inter in touched.items():
                if len(inter) == len(block):
                    continue
                inter_f = frozenset(inter)
                diff_f = block - inter_f
                partition.discard(block)
                partition.add(inter_f)
                partition.add(diff_f)
                for s in inter_f:
                    block_of[s] = inter_f
                for s in diff_f:
                    block_of[s] = diff_f
                if block in worklist:
                    worklist.remove(block)
                    worklist.append(inter_f)
                    worklist.append(diff_f)
                else:
                    worklist.append(inter_f if len(inter_f) <= len(diff_f) else diff_f)

    blocks = sorted((b for b in partition if sink not in b), key=min)
    index_of = {b: i for i, b in enumerate(blocks)}
    new_trans: list[dict[int, int]] = [{} for _ in range(len(blocks))]
    for i, b in enumerate(blocks):
        representative = min(b)
        for c, t in trans[representative].items():
            target_block = block_of[t]
            if sink not in target_block:
                new_trans[i][c] = index_of[target_block]
    new_accepting = {index_of[block_of[s]] for s in accepting}
    return new_trans, new_accepting, index_of[block_of[start]]


def _bfs_renumber(trans, accepting, start, classmap: _ClassMap) -> Automaton:
    order = []
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        order.append(s)
        for c in sorted(trans[s]):
            t = trans[s][c]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    remap = {old: new for new, old in enumerate(order)}
    rows = []
    for old in order:
        intervals: list[tuple[int, int, int]] = []
        for c in sorted(trans[old]):
            lo = classmap.starts[c]
            hi = classmap.end_of(c)
            t = remap[trans[old][c]]
            if intervals and intervals[-1][1] + 1 == lo and intervals[-1][2] == t:
                intervals[-1] = (intervals[-1][0], hi, t)
            else:
                intervals.append((lo, hi, t))
        rows.append(tuple(intervals))
    return Automaton(
        start=0,
        n_states=len(order),
        accepting=frozenset(remap[s] for s in accepting if s in remap),
        transitions=tuple(rows),
    )


def build_dfa(ast: Node, *, state_cap: int = DEFAULT_STATE_CAP, minimize: bool = True) -> Automaton:
    """Compile an AST to a pruned (and by default minimized) DFA.

    Raises EmptyLanguage when the AST denotes no string, ComplexityLimit
    when construction exceeds `state_cap`.
    """
    classmap = _ClassMap(ast)
    nfa = _Nfa(classmap, state_cap * 4)
    nfa_start, nfa_accept = nfa.build(ast)
    trans, accepting = _subset_construct(nfa, nfa_start, nfa_accept, state_cap)
    trans, accepting, start = _prune_dead(trans, accepting, start=0)
    if minimize:
        trans, accepting, start = _minimize(trans, accepting, start, classmap.n_classes)
    return _bfs_renumber(trans, accepting, start, classmap)


def step(a: Automaton, state: int, scalar: int) -> int | None:
    """Next state on one scalar, or None when the DFA rejects."""
    lows = a._lows[state]
    i = bisect.bisect_right(lows, scalar) - 1
    if i >= 0:
        lo, hi, target = a.transitions[state][i]
        if scalar <= hi:
            return target
    return None


def is_accepting(a: Automaton, state: int) -> bool:
    return state in a.accepting


def is_live(a: Automaton, state: int) -> bool:
    """True for every retained state: dead states are pruned at build."""
    if not 0 <= state < a.n_states:
        raise UnknownState(f"state {state} not in automaton")
    return True


def full_match(a: Automaton, text: str) -> bool:
    """Anchored at both ends: True iff the whole text is in the language."""
    state = a.start
    for ch in text:
        state = step(a, state, ord(ch))
        if state is None:
            return False
    return state in a.accepting


def match_prefix(a: Automaton, text: str) -> tuple[bool, int | None]:
    """(matched, first_reject_offset). The offset is where the first scalar
    had no transition, or len(text) when input ended mid-pattern."""
    state = a.start
    for i, ch in enumerate(text):
        nxt = step(a, state, ord(ch))
        if nxt is None:
            return False, i
        state = nxt
    if state in a.accepting:
        return True, None
    return False, len(text)


def distances_to_accept(a: Automaton) -> list[int]:
    """Minimum scalars from each state to an accepting state (0 when the
    state itself accepts). Finite for every state since all are live."""
    reverse: list[set[int]] = [set() for _ in range(a.n_states)]
    for s, row in enumerate(a.transitions):
        for _, _, t in row:
            reverse[t].add(s)
    dist = [-1] * a.n_states
    queue = deque()
    for s in a.accepting:
        dist[s] = 0
        queue.append(s)
    while queue:
        s = queue.popleft()
        for p in reverse[s]:
            if dist[p] < 0:
                dist[p] = dist[s] + 1
                queue.append(p)
    return dist


def sample_string(a: Automaton, rng_seed: int, max_len: int = 256) -> str:
    """Random member of the language, at most max_len scalars.

    Raises LengthExceeded when every accepted string is longer than
    max_len. The walk only takes transitions that keep an accepting state
    within budget, so it never needs to backtrack.
    """
    dist = distances_to_accept(a)
    if dist[a.start] > max_len:
        raise LengthExceeded(f"no accepted string within {max_len} scalars")
    rng = random.Random(rng_seed)
    state = a.start
    out: list[str] = []
    while True:
        can_stop = state in a.accepting
        budget = max_len - len(out) - 1
        options = [(lo, hi, t) for lo, hi, t in a.transitions[state] if dist[t] <= budget]
        if can_stop and (not options or rng.random() < 0.5):
            return "".join(out)
        # Wide classes cover most of the scalar space; lean on printable
        # ASCII when the transitions offer it so samples stay readable.
        printable = [
            (max(lo, 0x20), min(hi, 0x7E), t) for lo, hi, t in options if lo <= 0x7E and hi >= 0x20
        ]
        if printable and rng.random() < 0.9:
            options = printable
        lo, hi, target = options[rng.randrange(len(options))]
        out.append(chr(rng.randint(lo, hi)))
        state = target


def to_dot(a: Automaton) -> str:
    """Debug export in Graphviz DOT form."""

    def label(lo: int, hi: int) -> str:
        def show(cp: int) -> str:
            ch = chr(cp)
            if ch == '"':
                return '\\"'
            if ch == "\\":
                return "\\\\"
            return ch if 0x20 <= cp < 0x7F else f"U+{cp:04X}"

        return show(lo) if lo == hi else f"{show(lo)}-{show(hi)}"

    lines = ["digraph dfa {", "  rankdir=LR;", '  hidden [shape=none label=""];']
    for s in range(a.n_states):
        shape = "doublecircle" if s in a.accepting else "circle"
        lines.append(f"  {s} [shape={shape}];")
    lines.append(f"  hidden -> {a.start};")
    for s, row in enumerate(a.transitions):
        for lo, hi, t in row:
            lines.append(f'  {s} -> {t} [label="{label(lo, hi)}"];')
    lines.append("}")
    return "\n".join(lines)
