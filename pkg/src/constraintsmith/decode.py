"""Constrained generation loop and pluggable token scorers.

The loop owns the guarantee: candidates offered to a scorer are exactly
the index's allowed set for the current state (plus EOS when the state
accepts), so no scorer — however buggy or adversarial — can steer the
output off the constraint. Sampling uses the Mersenne Twister via
`random.Random(seed)`, which is stable across platforms and Python
versions, so seeded runs are reproducible everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx

from .errors import ScorerError
from .tokens import TokenIndex, advance, allowed_tokens

FINISH_EOS = "eos"
FINISH_FORCED_EOS = "forced_eos"
FINISH_FAILURE = "max_tokens_with_completion_failure"


class TokenScorer(Protocol):
    """Weights candidate tokens for the next step.

    Must return one non-negative weight per offered candidate (same
    order), not all zero. Candidates may include the vocabulary's EOS id.
    """

    def score(
        self, prompt: str, prefix_ids: Sequence[int], candidate_ids: Sequence[int]
    ) -> Sequence[float]: ...


@dataclass(frozen=True)
class DecodeParams:
    mode: str = "sample"  # "greedy" ignores the seed
    seed: int = 0
    max_tokens: int = 512
    eos_bias: float = 1.0  # multiplier on the EOS weight


@dataclass(frozen=True)
class GenerationResult:
    """finish == eos/forced_eos implies the text full-matches the
    constraint automaton; a failure result carries diagnostic text that
    must not be treated as valid output."""

    text: str
    token_ids: tuple[int, ...]
    steps: int
    finish: str

    @property
    def ok(self) -> bool:
        return self.finish in (FINISH_EOS, FINISH_FORCED_EOS)


class UniformScorer:
    """Equal weight on every candidate; randomness comes solely from the
    decoder's seeded sampling."""

    def score(self, prompt, prefix_ids, candidate_ids):
        return [1.0] * len(candidate_ids)


class EchoScorer:
    """Replays a scripted id sequence. When the scripted id is masked out
    (or the script is exhausted) it falls back to uniform and records the
    step in `deviations` — the mask always wins."""

    def __init__(self, script: Sequence[int]):
        if not script:
            raise ValueError("echo script must be non-empty")
        self.script = list(script)
        self.deviations: list[int] = []

    def score(self, prompt, prefix_ids, candidate_ids):
        pos = len(prefix_ids)
        want = self.script[pos] if pos < len(self.script) else None
        if want is not None and want in candidate_ids:
            return [1.0 if c == want else 0.0 for c in candidate_ids]
        self.deviations.append(pos)
        return [1.0] * len(candidate_ids)


class RemoteScorer:
    """HTTP adapter: POST {prompt, prefix_ids, candidate_ids}, expect
    {"weights": [...]} parallel to the candidates (or an id->weight map
    whose keys must all be candidates). Transport and contract failures
    surface as ScorerError; the adapter never widens the candidate set."""

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self._client = httpx.Client(timeout=timeout)

    def score(self, prompt, prefix_ids, candidate_ids):
        try:
            resp = self._client.post(
                self.endpoint,
                json={
                    "prompt": prompt,
                    "prefix_ids": list(prefix_ids),
                    "candidate_ids": list(candidate_ids),
                },
            )
            resp.raise_for_status()
            body = resp.json()
        except Exception as exc:
            raise ScorerError(f"scorer endpoint failed: {exc}") from exc
        weights = body.get("weights") if isinstance(body, dict) else None
        if isinstance(weights, dict):
            by_id = {}
            for key, value in weights.items():
                try:
                    tid = int(key)
                except (TypeError, ValueError):
                    raise ScorerError(f"non-integer token id {key!r} in weights") from None
                if tid not in candidate_ids:
                    raise ScorerError(f"unsolicited token {tid} in weights")
                by_id[tid] = value
            weights = [by_id.get(c, 0.0) for c in candidate_ids]
        if not isinstance(weights, list) or len(weights) != len(candidate_ids):
            raise ScorerError("malformed weights in scorer response")
        return weights


def uniform_scorer() -> UniformScorer:
    return UniformScorer()


def echo_scorer(script: Sequence[int]) -> EchoScorer:
    return EchoScorer(script)


def remote_scorer(endpoint: str, timeout: float = 30.0) -> RemoteScorer:
    return RemoteScorer(endpoint, timeout=timeout)


def _checked_weights(raw, n_candidates: int, step: int) -> list[float]:
    if raw is None or len(raw) != n_candidates:
        raise ScorerError("scorer returned wrong number of weights", step)
    weights = []
    for w in raw:
        w = float(w)
        if not (w >= 0.0) or w != w or w == float("inf"):
            raise ScorerError(f"invalid weight {w!r}", step)
        weights.append(w)
    return weights


def _pick(candidates: list[int], weights: list[float], mode: str, rng: random.Random, step: int) -> int:
    total = sum(weights)
    if total <= 0.0:
        raise ScorerError("degenerate distribution (all weights zero)", step)
    if mode == "greedy":
        best = 0
        for i in range(1, len(weights)):
            if weights[i] > weights[best]:
                best = i
        return candidates[best]  # ties keep the lowest token id
    # Cumulative-distribution inversion.
    r = rng.random() * total
    acc = 0.0
    for c, w in zip(candidates, weights):
        acc += w
        if r < acc:
            return c
    return candidates[-1]  # float round-off


def generate(
    prompt: str,
    ix: TokenIndex,
    scorer: TokenScorer,
    params: DecodeParams = DecodeParams(),
) -> GenerationResult:
    """Decode one completion that is guaranteed to match the constraint.

    Loop invariant: the current state is live, so either some token or
    EOS is admissible. EOS is offered only in accepting states and forced
    — without consulting the scorer — when nothing else is allowed or the
    token budget is exhausted in an accepting state. Exhausting the
    budget anywhere else yields a failure result whose text is diagnostic
    only. `steps` counts decisions, including the final EOS.
    """
    if params.mode not in ("sample", "greedy"):
        raise ValueError(f"unknown mode {params.mode!r}")
    if params.max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    rng = random.Random(params.seed)
    state = ix.start_state
    out_ids: list[int] = []
    steps = 0

    def finish(kind: str) -> GenerationResult:
        text = "".join(ix.vocab.tokens[i] for i in out_ids)
        return GenerationResult(text, tuple(out_ids), steps, kind)

    while True:
        allowed, eos_ok = allowed_tokens(ix, state)
        if len(allowed) == 0:
            if eos_ok:
                steps += 1
                return finish(FINISH_FORCED_EOS)
            # Vocabulary cannot spell any continuation (progress assumption
            # violated); surface as a completion failure, not a crash.
            return finish(FINISH_FAILURE)
        if len(out_ids) >= params.max_tokens:
            if eos_ok:
                steps += 1
                return finish(FINISH_FORCED_EOS)
            return finish(FINISH_FAILURE)

        candidates = [int(t) for t in allowed]
        if eos_ok:
            candidates.append(ix.eos_id)
        try:
            raw = scorer.score(prompt, tuple(out_ids), tuple(candidates))
        except ScorerError as exc:
            if exc.step is None:
                raise ScorerError(str(exc), steps) from exc
            raise
        except Exception as exc:
            raise ScorerError(f"scorer raised {type(exc).__name__}: {exc}", steps) from exc
        weights = _checked_weights(raw, len(candidates), steps)
        if eos_ok and params.eos_bias != 1.0:
            weights[-1] *= params.eos_bias
        choice = _pick(candidates, weights, params.mode, rng, steps)
        steps += 1
        if choice == ix.eos_id and eos_ok:
            return finish(FINISH_EOS)
        out_ids.append(choice)
        state = advance(ix, state, choice)
