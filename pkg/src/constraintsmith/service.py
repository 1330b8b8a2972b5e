"""HTTP service: compile / generate / validate plus the constraint store.

Constraints always travel in a dedicated request field (`constraints`,
`pattern`, or `stored_name`), never inside the prompt. The service is
stateless across requests except for the store and an LRU cache of
(pattern, vocabulary) -> (automaton, token index).
"""

from __future__ import annotations

import json
import os
import threading
from collections import OrderedDict
from dataclasses import dataclass, replace

from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .decode import (
    DecodeParams,
    EchoScorer,
    FINISH_FAILURE,
    RemoteScorer,
    TokenScorer,
    UniformScorer,
    generate,
)
from .errors import (
    ComplexityLimit,
    ConstraintError,
    EmptyLanguage,
    InvalidSpec,
    NameCollision,
    PatternSyntaxError,
    ScorerError,
    SpecFormatError,
    StoreError,
    UnsupportedFeature,
)
from .fsm import Automaton, build_dfa, match_prefix
from .model import spec_from_obj
from .regex.compile import CompiledConstraint, compile_spec, parse_manual_regex
from .store import ConstraintStore, pattern_hash
from .tokens import TokenIndex, Vocabulary, basic_vocabulary, build_index

DEFAULT_LISTEN = "127.0.0.1:8000"
INDEX_CACHE_CAPACITY = 64


@dataclass(frozen=True)
class ServiceConfig:
    listen: str = DEFAULT_LISTEN
    vocab_path: str | None = None
    store_dir: str = "constraint_store"
    state_cap: int = 100_000
    decode_defaults: DecodeParams = DecodeParams()
    scorer: str = "uniform"  # uniform | echo:<script.json> | remote:<url>


def load_config(path: str | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    """Config file (JSON) with environment overrides CSMITH_LISTEN,
    CSMITH_VOCAB, CSMITH_STORE."""
    env = os.environ if env is None else env
    cfg = ServiceConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        decode = raw.pop("decode_defaults", {})
        cfg = replace(
            cfg,
            **{k: v for k, v in raw.items() if k in ServiceConfig.__dataclass_fields__},
        )
        if decode:
            cfg = replace(cfg, decode_defaults=replace(DecodeParams(), **decode))
    if env.get("CSMITH_LISTEN"):
        cfg = replace(cfg, listen=env["CSMITH_LISTEN"])
    if env.get("CSMITH_VOCAB"):
        cfg = replace(cfg, vocab_path=env["CSMITH_VOCAB"])
    if env.get("CSMITH_STORE"):
        cfg = replace(cfg, store_dir=env["CSMITH_STORE"])
    return cfg


class _IndexCache:
    """LRU over (pattern, vocab hash); safe for concurrent read/insert."""

    def __init__(self, capacity: int = INDEX_CACHE_CAPACITY):
        self.capacity = capacity
        self._entries: OrderedDict[tuple[str, str], tuple[Automaton, TokenIndex]] = OrderedDict()
        self._lock = threading.Lock()

    def contains(self, key: tuple[str, str]) -> bool:
        with self._lock:
            return key in self._entries

    def get_or_build(self, key, build):
        with self._lock:
            hit = self._entries.get(key)
            if hit is not None:
                self._entries.move_to_end(key)
                return hit
        value = build()
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)
        return value


class _ApiError(Exception):
    def __init__(self, status: int, detail: dict):
        self.status = status
        self.detail = detail


def _error_payload(exc: ConstraintError) -> tuple[int, dict]:
    if isinstance(exc, InvalidSpec):
        return 400, {
            "error": "invalid_spec",
            "violations": [{"path": v.path, "message": v.message} for v in exc.violations],
        }
    if isinstance(exc, SpecFormatError):
        return 400, {"error": "spec_format", "message": exc.message, "path": exc.path}
    if isinstance(exc, UnsupportedFeature):
        return 400, {"error": "unsupported_feature", "feature": exc.feature, "offset": exc.offset}
    if isinstance(exc, PatternSyntaxError):
        return 400, {"error": "syntax", "message": exc.message, "offset": exc.offset}
    if isinstance(exc, ComplexityLimit):
        return 422, {"error": "complexity_limit", "message": str(exc)}
    if isinstance(exc, EmptyLanguage):
        return 422, {"error": "empty_language", "message": str(exc)}
    if isinstance(exc, ScorerError):
        return 502, {"error": "scorer_error", "message": str(exc)}
    if isinstance(exc, StoreError):
        return 409, {"error": "store_conflict", "message": str(exc)}
    return 500, {"error": "internal", "message": str(exc)}


class CompileRequest(BaseModel):
    constraints: list | dict | None = None
    pattern: str | None = None


class GenerateParamsModel(BaseModel):
    mode: Literal["sample", "greedy"] | None = None
    seed: int | None = None
    max_tokens: int | None = Field(default=None, ge=1)
    eos_bias: float | None = Field(default=None, ge=0)


class GenerateRequest(BaseModel):
    prompt: str = ""
    constraints: list | dict | None = None
    pattern: str | None = None
    stored_name: str | None = None
    params: GenerateParamsModel | None = None


class ValidateRequest(BaseModel):
    text: str
    constraints: list | dict | None = None
    pattern: str | None = None


def build_scorer(spec: str) -> TokenScorer:
    if spec == "uniform":
        return UniformScorer()
    if spec.startswith("echo:"):
        with open(spec[len("echo:"):], encoding="utf-8") as fh:
            script = json.load(fh)
        return EchoScorer(script)
    if spec.startswith("remote:"):
        return RemoteScorer(spec[len("remote:"):])
    raise ValueError(f"unknown scorer backend {spec!r}")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    vocab = Vocabulary.load(config.vocab_path) if config.vocab_path else basic_vocabulary()
    store = ConstraintStore(config.store_dir)
    cache = _IndexCache()
    scorer = build_scorer(config.scorer)

    app = FastAPI(title="constraintsmith", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def resolve_constraint(
        constraints, pattern: str | None, stored_name: str | None = None
    ) -> CompiledConstraint:
        supplied = [x for x in (constraints, pattern, stored_name) if x is not None]
        if len(supplied) != 1:
            raise _ApiError(
                400,
                {
                    "error": "bad_request",
                    "message": "supply exactly one of constraints, pattern, stored_name",
                },
            )
        if pattern is not None:
            return parse_manual_regex(pattern)
        if constraints is not None:
            return compile_spec(spec_from_obj(constraints))
        try:
            document = store.get(stored_name)
        except StoreError:
            document = None
        if document is None:
            raise _ApiError(
                404, {"error": "not_found", "message": f"no stored constraint {stored_name!r}"}
            )
        obj = json.loads(document)
        if isinstance(obj, dict) and "pattern" in obj:
            return parse_manual_regex(obj["pattern"])
        return compile_spec(spec_from_obj(obj))

    def automaton_and_index(compiled: CompiledConstraint) -> tuple[Automaton, TokenIndex, bool]:
        key = (pattern_hash(compiled.pattern), vocab.content_hash)
        was_cached = cache.contains(key)

        def build():
            automaton = build_dfa(compiled.ast, state_cap=config.state_cap)
            return automaton, build_index(automaton, vocab)

        automaton, index = cache.get_or_build(key, build)
        return automaton, index, was_cached

    @app.exception_handler(_ApiError)
    async def api_error_handler(request: Request, exc: _ApiError):
        return JSONResponse(status_code=exc.status, content=exc.detail)

    @app.exception_handler(ConstraintError)
    async def constraint_error_handler(request: Request, exc: ConstraintError):
        status, payload = _error_payload(exc)
        return JSONResponse(status_code=status, content=payload)

    @app.post("/v1/compile")
    def compile_endpoint(body: CompileRequest):
        compiled = resolve_constraint(body.constraints, body.pattern)
        automaton, _, was_cached = automaton_and_index(compiled)
        return {
            "pattern": compiled.pattern,
            "state_count": automaton.n_states,
            "token_index_cached": was_cached,
        }

    @app.post("/v1/generate")
    def generate_endpoint(body: GenerateRequest):
        compiled = resolve_constraint(body.constraints, body.pattern, body.stored_name)
        _, index, _ = automaton_and_index(compiled)
        params = config.decode_defaults
        if body.params is not None:
            overrides = {k: v for k, v in body.params.model_dump().items() if v is not None}
            params = replace(params, **overrides)
        result = generate(body.prompt, index, scorer, params)
        if result.finish == FINISH_FAILURE:
            raise _ApiError(
                422,
                {
                    "error": "completion_failure",
                    "message": "token budget exhausted before the constraint was satisfied",
                    "text": result.text,
                    "steps": result.steps,
                },
            )
        return {
            "text": result.text,
            "finish": result.finish,
            "steps": result.steps,
            "pattern": compiled.pattern,
        }

    @app.post("/v1/validate")
    def validate_endpoint(body: ValidateRequest):
        compiled = resolve_constraint(body.constraints, body.pattern)
        automaton, _, _ = automaton_and_index(compiled)
        ok, offset = match_prefix(automaton, body.text)
        if ok:
            return {"valid": True}
        return {"valid": False, "first_reject_offset": offset}

    @app.get("/v1/constraints")
    def list_constraints():
        return {
            "constraints": [
                {
                    "name": e.name,
                    "pattern_hash": e.pattern_hash,
                    "created": e.created,
                    "modified": e.modified,
                }
                for e in store.list()
            ]
        }

    @app.put("/v1/constraints/{name}")
    async def put_constraint(name: str, request: Request):
        document = (await request.body()).decode("utf-8")
        try:
            entry = store.put(name, document)
        except NameCollision as exc:
            raise _ApiError(409, {"error": "name_collision", "message": str(exc)}) from exc
        except StoreError as exc:
            raise _ApiError(400, {"error": "bad_name", "message": str(exc)}) from exc
        return {"name": entry.name, "pattern_hash": entry.pattern_hash}

    @app.get("/v1/constraints/{name}")
    def get_constraint(name: str):
        try:
            document = store.get(name)
        except StoreError:
            document = None
        if document is None:
            raise _ApiError(404, {"error": "not_found", "message": f"no stored constraint {name!r}"})
        return Response(content=document, media_type="application/json")

    @app.delete("/v1/constraints/{name}", status_code=204)
    def delete_constraint(name: str):
        try:
            deleted = store.delete(name)
        except StoreError:
            deleted = False
        if not deleted:
            raise _ApiError(404, {"error": "not_found", "message": f"no stored constraint {name!r}"})
        return Response(status_code=204)

    return app
