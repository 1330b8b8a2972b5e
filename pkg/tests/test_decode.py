"""Guided decoding: the mask guarantee, scorers, reproducibility."""

from __future__ import annotations

import json
import random
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from constraintsmith.decode import (
    DecodeParams,
    FINISH_FAILURE,
    FINISH_FORCED_EOS,
    echo_scorer,
    generate,
    remote_scorer,
    uniform_scorer,
)
from constraintsmith.errors import ScorerError
from constraintsmith.fsm import build_dfa, full_match
from constraintsmith.regex.compile import compile_spec
from constraintsmith.regex.parser import parse_pattern
from constraintsmith.tokens import basic_vocabulary, build_index, encode_greedy

from test_model import SENTIMENT

VOCAB = basic_vocabulary()


def setup_pattern(pattern: str):
    automaton = build_dfa(parse_pattern(pattern))
    return automaton, build_index(automaton, VOCAB)


SENT_AUTOMATON = build_dfa(compile_spec(SENTIMENT).ast)
SENT_INDEX = build_index(SENT_AUTOMATON, VOCAB)


# --- core loop ---

def test_sentiment_generation_matches(tmp_path=None):
    result = generate("Classify: great movie!", SENT_INDEX, uniform_scorer(), DecodeParams(seed=7))
    assert result.ok
    assert result.text in {f"Sentiment : {w}" for w in ("positive", "negative", "neutral")}
    assert full_match(SENT_AUTOMATON, result.text)


def test_singleton_language_forces_eos():
    automaton, ix = setup_pattern("abc")
    result = generate("", ix, uniform_scorer(), DecodeParams(seed=0))
    assert result.text == "abc"
    assert result.finish == FINISH_FORCED_EOS
    assert full_match(automaton, result.text)


def test_steps_count_decisions():
    _, ix = setup_pattern("abc")
    result = generate("", ix, uniform_scorer(), DecodeParams(seed=0))
    assert result.steps == len(result.token_ids) + 1


def test_max_tokens_failure_is_typed_not_truncated():
    automaton, ix = setup_pattern("a{20}")
    result = generate("", ix, uniform_scorer(), DecodeParams(seed=0, max_tokens=3))
    assert result.finish == FINISH_FAILURE
    assert not result.ok
    assert not full_match(automaton, result.text)  # diagnostic text only


def test_max_tokens_on_accepting_state_forces_eos():
    automaton, ix = setup_pattern("a+")
    result = generate("", ix, uniform_scorer(), DecodeParams(seed=1, max_tokens=2))
    assert result.ok
    assert full_match(automaton, result.text)


def test_reproducible_from_seed():
    runs = [
        generate("p", SENT_INDEX, uniform_scorer(), DecodeParams(seed=123)) for _ in range(3)
    ]
    assert runs[0] == runs[1] == runs[2]


def test_greedy_ignores_seed_and_breaks_ties_low():
    _, ix = setup_pattern("(?:a|b)")
    r1 = generate("", ix, uniform_scorer(), DecodeParams(mode="greedy", seed=1))
    r2 = generate("", ix, uniform_scorer(), DecodeParams(mode="greedy", seed=99))
    assert r1.text == r2.text == "a"  # 'a' has the lower token id


def test_uniform_sampling_visits_all_choices():
    _, ix = setup_pattern("(?:a|b)")
    seen = {generate("", ix, uniform_scorer(), DecodeParams(seed=s)).text for s in range(100)}
    assert seen == {"a", "b"}


def test_eos_bias_shortens_free_text():
    _, ix = setup_pattern("[a-z]+")
    lengths_biased = [
        len(generate("", ix, uniform_scorer(), DecodeParams(seed=s, eos_bias=50.0)).text)
        for s in range(30)
    ]
    lengths_plain = [
        len(generate("", ix, uniform_scorer(), DecodeParams(seed=s, max_tokens=64)).text)
        for s in range(30)
    ]
    assert sum(lengths_biased) < sum(lengths_plain)


# --- echo scorer ---

def test_echo_scorer_replays_exact_text():
    script = encode_greedy(VOCAB, "Sentiment : positive")
    scorer = echo_scorer(script)
    result = generate("", SENT_INDEX, scorer, DecodeParams(seed=0))
    assert result.text == "Sentiment : positive"
    assert result.ok
    assert scorer.deviations == []


def test_echo_scorer_deviates_under_mask_but_output_still_matches():
    script = encode_greedy(VOCAB, "Sentiment : wonderful")
    scorer = echo_scorer(script)
    result = generate("", SENT_INDEX, scorer, DecodeParams(seed=3))
    assert result.ok
    assert full_match(SENT_AUTOMATON, result.text)
    assert scorer.deviations, "expected a recorded deviation at the first masked step"
    # "Sentiment : w..." deviates exactly where 'w' stops being spellable.
    assert scorer.deviations[0] == len(encode_greedy(VOCAB, "Sentiment : "))


def test_echo_script_must_be_nonempty():
    with pytest.raises(ValueError):
        echo_scorer([])


# --- mask supremacy ---

class AdversarialScorer:
    """Puts all weight on the first candidate it is offered and, whenever
    possible, asks for ids spelling a constraint-violating string."""

    def __init__(self, bad_ids):
        self.bad_ids = list(bad_ids)

    def score(self, prompt, prefix_ids, candidate_ids):
        pos = len(prefix_ids)
        want = self.bad_ids[pos % len(self.bad_ids)]
        return [100.0 if c == want else 0.001 for c in candidate_ids]


def test_mask_supremacy_100_trials():
    bad = encode_greedy(VOCAB, "Sentiment : maybe!!")
    for seed in range(100):
        result = generate("", SENT_INDEX, AdversarialScorer(bad), DecodeParams(seed=seed))
        assert result.ok
        assert full_match(SENT_AUTOMATON, result.text)


# --- scorer contract ---

class BrokenScorer:
    def __init__(self, weights_fn):
        self.weights_fn = weights_fn

    def score(self, prompt, prefix_ids, candidate_ids):
        return self.weights_fn(candidate_ids)


@pytest.mark.parametrize(
    "weights_fn",
    [
        lambda c: [0.0] * len(c),          # degenerate
        lambda c: [1.0] * (len(c) + 1),    # wrong arity
        lambda c: [-1.0] + [1.0] * (len(c) - 1),  # negative
        lambda c: [float("nan")] * len(c),
        lambda c: (_ for _ in ()).throw(RuntimeError("boom")),  # raises
    ],
)
def test_scorer_contract_violations_surface_as_scorer_error(weights_fn):
    _, ix = setup_pattern("(?:a|b)")
    with pytest.raises(ScorerError) as err:
        generate("", ix, BrokenScorer(weights_fn), DecodeParams(seed=0))
    assert err.value.step == 0


# --- remote scorer over real HTTP ---

class _ScriptedHandler(BaseHTTPRequestHandler):
    script: list[int] = []
    mode = "echo"

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        candidates = body["candidate_ids"]
        pos = len(body["prefix_ids"])
        if self.mode == "echo":
            want = self.script[pos] if pos < len(self.script) else None
            if want in candidates:
                weights = [1.0 if c == want else 0.0 for c in candidates]
            else:
                weights = [1.0] * len(candidates)
            payload = {"weights": weights}
        elif self.mode == "zeros":
            payload = {"weights": [0.0] * len(candidates)}
        else:  # unsolicited id in mapping form
            payload = {"weights": {"999999": 1.0}}
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def scorer_server():
    server = HTTPServer(("127.0.0.1", 0), _ScriptedHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/score"
    server.shutdown()


def test_remote_scorer_matches_local_echo(scorer_server):
    script = encode_greedy(VOCAB, "Sentiment : neutral")
    _ScriptedHandler.script = script
    _ScriptedHandler.mode = "echo"
    remote = generate("p", SENT_INDEX, remote_scorer(scorer_server), DecodeParams(seed=5))
    local = generate("p", SENT_INDEX, echo_scorer(script), DecodeParams(seed=5))
    assert remote == local
    assert remote.text == "Sentiment : neutral"


def test_remote_scorer_degenerate_distribution(scorer_server):
    _ScriptedHandler.mode = "zeros"
    with pytest.raises(ScorerError, match="degenerate"):
        generate("", SENT_INDEX, remote_scorer(scorer_server), DecodeParams(seed=0))


def test_remote_scorer_unsolicited_token(scorer_server):
    _ScriptedHandler.mode = "unsolicited"
    with pytest.raises(ScorerError, match="unsolicited"):
        generate("", SENT_INDEX, remote_scorer(scorer_server), DecodeParams(seed=0))


def test_remote_scorer_transport_error():
    with pytest.raises(ScorerError):
        generate(
            "",
            SENT_INDEX,
            remote_scorer("http://127.0.0.1:1/nothing", timeout=0.2),
            DecodeParams(seed=0),
        )


# --- the guarantee, property-style ---

def test_guarantee_for_every_scorer_and_seed():
    rng = random.Random(11)
    scorers = [
        uniform_scorer(),
        AdversarialScorer(encode_greedy(VOCAB, "zzz!!qqq")),
        echo_scorer(encode_greedy(VOCAB, "Sentiment : negative")),
    ]
    patterns = ["(?:a|b)c", "a{2,3}", r"- [^\n]+\n", "Sentiment : (?:positive|negative|neutral)"]
    for pattern in patterns:
        automaton, ix = setup_pattern(pattern)
        for scorer in scorers:
            for _ in range(10):
                params = DecodeParams(seed=rng.randrange(1 << 30), max_tokens=64)
                result = generate("", ix, scorer, params)
                if result.ok:
                    assert full_match(automaton, result.text)
