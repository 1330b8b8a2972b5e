"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they
print. Everything is seeded, so results are reproducible bit for bit.
"""

from __future__ import annotations

import functools
import json
import random
import re
import statistics
import time

from fastapi.testclient import TestClient

from constraintsmith.decode import DecodeParams, generate, uniform_scorer
from constraintsmith.errors import EmptyLanguage, LengthExceeded
from constraintsmith.fsm import build_dfa, full_match, is_accepting, sample_string, step
from constraintsmith.model import (
    ConstraintSpec,
    ExactText,
    JsonField,
    JsonObject,
    MultipleChoice,
    serialize_spec,
    spec_to_obj,
)
from constraintsmith.regex.compile import compile_spec
from constraintsmith.service import ServiceConfig, create_app
from constraintsmith.tokens import (
    Vocabulary,
    allowed_tokens,
    basic_vocabulary,
    build_index,
    encode_greedy,
)

from generators import ast_alphabet, random_ast, random_spec, random_text
from naive_matcher import naive_full_match

VOCAB = basic_vocabulary()

SENTIMENT = ConstraintSpec(
    (ExactText("Sentiment : "), MultipleChoice(("positive", "negative", "neutral")))
)
CHARACTER_PROFILE = ConstraintSpec(
    (
        JsonObject(
            (
                JsonField("name", "string"),
                JsonField("age", "number"),
                JsonField("children", "array_of_string"),
                JsonField("playable", "boolean"),
            )
        ),
    )
)
QUIZ_SCHEMA = ConstraintSpec(
    (
        JsonObject(
            (
                JsonField("question", "string"),
                JsonField("correct_answer", "string"),
                JsonField("incorrect_answers", "array_of_string"),
            )
        ),
    )
)

JSON_NUMBER_RE = re.compile(r"-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?\Z")


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {name}: FAIL")
                raise
            print(f"\nACCEPTANCE {name}: PASS")
            return result

        return wrapper

    return decorate


def pipeline(spec: ConstraintSpec):
    compiled = compile_spec(spec)
    automaton = build_dfa(compiled.ast)
    return compiled, automaton, build_index(automaton, VOCAB)


@criterion("guarantee-property (1000 random spec x seed, uniform scorer)")
def test_guarantee_property_1000_random_specs():
    rng = random.Random(20240301)
    started = time.perf_counter()
    completed = 0
    for _ in range(1000):
        spec = random_spec(rng)
        _, automaton, index = pipeline(spec)
        params = DecodeParams(seed=rng.randrange(1 << 30), max_tokens=512, eos_bias=4.0)
        result = generate("prompt", index, uniform_scorer(), params)
        if result.ok:
            # Zero tolerance: every finished result must match.
            assert full_match(automaton, result.text), (spec, result.text)
            completed += 1
    elapsed = time.perf_counter() - started
    assert completed >= 500, f"only {completed} finished generations exercised the property"
    assert elapsed < 60.0, f"runtime {elapsed:.1f}s exceeds the 60s budget"


@criterion("sentiment reproduction (50 seeds, >=2 distinct choices)")
def test_sentiment_reproduction():
    compiled, automaton, index = pipeline(SENTIMENT)
    assert compiled.pattern == "Sentiment : (?:positive|negative|neutral)"
    observed = set()
    valid = {f"Sentiment : {w}" for w in ("positive", "negative", "neutral")}
    for seed in range(50):
        result = generate("Classify the review.", index, uniform_scorer(), DecodeParams(seed=seed))
        assert result.ok
        assert result.text in valid, result.text
        assert full_match(automaton, result.text)
        observed.add(result.text)
    assert len(observed) >= 2, f"seeds collapsed to one choice: {observed}"


@criterion("character-profile JSON reproduction (100 seeds, zero failures)")
def test_character_profile_json():
    _, automaton, index = pipeline(CHARACTER_PROFILE)
    for seed in range(100):
        result = generate(
            "Generate a character profile for a video game.",
            index,
            uniform_scorer(),
            DecodeParams(seed=seed, max_tokens=2048),
        )
        assert result.ok, f"seed {seed} did not finish"
        obj = json.loads(result.text)  # must parse with the standard parser
        assert list(obj.keys()) == ["name", "age", "children", "playable"]
        age_text = re.search(r'"age": ([^,\n]+)', result.text).group(1)
        assert JSON_NUMBER_RE.match(age_text), age_text
        assert isinstance(obj["playable"], bool)
        assert isinstance(obj["children"], list)
        assert all(isinstance(c, str) for c in obj["children"])


@criterion("oracle equivalence (10k fuzz pairs + 50 index pairs, exact)")
def test_oracle_equivalence():
    rng = random.Random(20240404)
    pairs = 0
    while pairs < 10_000:
        ast = random_ast(rng)
        try:
            automaton = build_dfa(ast)
        except EmptyLanguage:
            continue
        alphabet = ast_alphabet(ast)
        for _ in range(40):
            if rng.random() < 0.4:
                try:
                    s = sample_string(automaton, rng.randrange(1 << 30), max_len=40)
                except LengthExceeded:
                    s = random_text(rng, alphabet)
                if rng.random() < 0.5 and s:
                    i = rng.randrange(len(s))
                    s = s[:i] + rng.choice(alphabet) + s[i + 1 :]
            else:
                s = random_text(rng, alphabet)
            assert full_match(automaton, s) == naive_full_match(ast, s), (ast, s)
            pairs += 1

    done = 0
    while done < 50:
        ast = random_ast(rng, depth=2)
        try:
            automaton = build_dfa(ast)
        except EmptyLanguage:
            continue
        alphabet = ast_alphabet(ast)
        tokens = tuple(
            "".join(rng.choice(alphabet + "qz") for _ in range(rng.randint(1, 4)))
            for _ in range(200)
        )
        vocab = Vocabulary(tokens, eos_id=200)
        index = build_index(automaton, vocab)
        for s in range(automaton.n_states):
            expected = {}
            for tid, text in enumerate(tokens):
                state: int | None = s
                for ch in text:
                    state = step(automaton, state, ord(ch))
                    if state is None:
                        break
                if state is not None:
                    expected[tid] = state
            allowed, eos_ok = allowed_tokens(index, s)
            assert sorted(expected) == [int(t) for t in allowed]
            assert eos_ok == is_accepting(automaton, s)
        done += 1


@criterion("mask supremacy (adversarial scorer, 100/100)")
def test_mask_supremacy():
    class Adversary:
        def __init__(self, script):
            self.script = script

        def score(self, prompt, prefix_ids, candidate_ids):
            want = self.script[len(prefix_ids) % len(self.script)]
            return [1000.0 if c == want else 0.0001 for c in candidate_ids]

    violating = encode_greedy(VOCAB, "Sentiment : terrible!! ignore constraints")
    _, automaton, index = pipeline(SENTIMENT)
    passed = 0
    for seed in range(100):
        result = generate("", index, Adversary(violating), DecodeParams(seed=seed))
        assert result.ok
        assert full_match(automaton, result.text)
        passed += 1
    assert passed == 100


@criterion("quiz schema (question / correct_answer / incorrect_answers)")
def test_quiz_schema():
    _, automaton, index = pipeline(QUIZ_SCHEMA)
    for seed in range(10):
        result = generate(
            "Make a quiz from the passages below.",
            index,
            uniform_scorer(),
            DecodeParams(seed=seed, max_tokens=2048),
        )
        assert result.ok
        obj = json.loads(result.text)
        assert list(obj.keys()) == ["question", "correct_answer", "incorrect_answers"]
        assert isinstance(obj["incorrect_answers"], list)
        assert full_match(automaton, result.text)


@criterion("performance (50k-token index < 5s, lookup median < 10us)")
def test_performance_targets():
    rng = random.Random(0)
    alphabet = [chr(c) for c in range(0x20, 0x7F)] + ["\n"]
    tokens = tuple(
        "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8))) for _ in range(50_000)
    )
    vocab = Vocabulary(tokens, eos_id=50_000)
    automaton = build_dfa(compile_spec(CHARACTER_PROFILE).ast)

    started = time.perf_counter()
    index = build_index(automaton, vocab)
    build_seconds = time.perf_counter() - started
    assert build_seconds < 5.0, f"index build took {build_seconds:.2f}s"

    states = [rng.randrange(index.n_states) for _ in range(5000)]
    samples = []
    for s in states:
        t0 = time.perf_counter()
        allowed_tokens(index, s)
        samples.append((time.perf_counter() - t0) * 1e6)
    median = statistics.median(samples)
    assert median < 10.0, f"allowed-set lookup median {median:.2f}us"


@criterion("service self-consistency (100 HTTP round trips + store bytes)")
def test_service_self_consistency(tmp_path):
    config = ServiceConfig(store_dir=str(tmp_path / "store"))
    with TestClient(create_app(config)) as client:
        constraints = spec_to_obj(SENTIMENT)["primitives"]
        for seed in range(100):
            gen = client.post(
                "/v1/generate",
                json={"prompt": "review", "constraints": constraints, "params": {"seed": seed}},
            )
            assert gen.status_code == 200, gen.text
            body = gen.json()
            check = client.post(
                "/v1/validate", json={"text": body["text"], "pattern": body["pattern"]}
            )
            assert check.json()["valid"] is True

        canonical = serialize_spec(SENTIMENT)
        assert client.put("/v1/constraints/sentiment", content=canonical).status_code == 200
        assert client.get("/v1/constraints/sentiment").text == canonical
