"""Command-line interface: compile, generate, validate, serve.

Exit codes: 0 success, 1 invalid input (or non-matching text for
validate), 2 completion failure / scorer error. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .decode import DecodeParams, FINISH_FAILURE, generate
from .errors import ConstraintError, ScorerError
from .fsm import build_dfa, match_prefix
from .model import parse_spec
from .regex.compile import CompiledConstraint, compile_spec, parse_manual_regex
from .service import ServiceConfig, build_scorer, create_app, load_config
from .tokens import Vocabulary, basic_vocabulary, build_index

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILURE = 2


def _load_constraint(args) -> CompiledConstraint:
    if (args.constraints is None) == (args.pattern is None):
        raise ConstraintError("supply exactly one of --constraints FILE or --pattern STR")
    if args.pattern is not None:
        return parse_manual_regex(args.pattern)
    with open(args.constraints, encoding="utf-8") as fh:
        text = fh.read()
    obj = json.loads(text)
    if isinstance(obj, dict) and "pattern" in obj:
        return parse_manual_regex(obj["pattern"])
    return compile_spec(parse_spec(text))


def _load_vocab(args) -> Vocabulary:
    return Vocabulary.load(args.vocab) if args.vocab else basic_vocabulary()


def _read_prompt(args) -> str:
    if args.prompt is not None:
        return args.prompt
    if args.prompt_file is not None:
        with open(args.prompt_file, encoding="utf-8") as fh:
            return fh.read()
    return ""


def _read_text(args) -> str:
    if args.text is not None:
        return args.text
    data = sys.stdin.read()
    # Shell heredocs and POSIX text files append a final newline that is
    # almost never meant to be matched; strip exactly one unless asked not to.
    if not args.keep_trailing_newline and data.endswith("\n"):
        data = data[:-1]
    return data


def cmd_compile(args) -> int:
    compiled = _load_constraint(args)
    automaton = build_dfa(compiled.ast, state_cap=args.state_cap)
    if args.json:
        print(json.dumps({"pattern": compiled.pattern, "state_count": automaton.n_states}))
    else:
        print(compiled.pattern)
        print(f"states: {automaton.n_states}", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    compiled = _load_constraint(args)
    vocab = _load_vocab(args)
    automaton = build_dfa(compiled.ast, state_cap=args.state_cap)
    index = build_index(automaton, vocab)
    scorer = build_scorer(args.scorer)
    params = DecodeParams(
        mode=args.mode, seed=args.seed, max_tokens=args.max_tokens, eos_bias=args.eos_bias
    )
    result = generate(_read_prompt(args), index, scorer, params)
    if args.json:
        print(
            json.dumps(
                {
                    "text": result.text,
                    "finish": result.finish,
                    "steps": result.steps,
                    "pattern": compiled.pattern,
                }
            )
        )
    else:
        print(result.text)
    if result.finish == FINISH_FAILURE:
        print("completion failure: token budget exhausted mid-constraint", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_validate(args) -> int:
    compiled = _load_constraint(args)
    automaton = build_dfa(compiled.ast, state_cap=args.state_cap)
    ok, offset = match_prefix(automaton, _read_text(args))
    if args.json:
        payload = {"valid": ok}
        if not ok:
            payload["first_reject_offset"] = offset
        print(json.dumps(payload))
    else:
        print("valid" if ok else f"invalid (first reject at offset {offset})")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_serve(args) -> int:
    import uvicorn

    config = load_config(args.config)
    if args.listen:
        config = replace(config, listen=args.listen)
    if args.vocab:
        config = replace(config, vocab_path=args.vocab)
    if args.store:
        config = replace(config, store_dir=args.store)
    host, _, port = config.listen.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
    return EXIT_OK


def _add_constraint_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--constraints", metavar="FILE", help="constraint document (JSON)")
    p.add_argument("--pattern", metavar="STR", help="dialect regex")
    p.add_argument("--state-cap", type=int, default=100_000, help=argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="constraintsmith",
        description="Compose output-format constraints, compile them to a DFA, "
        "and generate or validate text against them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a constraint to its pattern")
    _add_constraint_args(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("generate", help="produce constrained text")
    _add_constraint_args(p)
    p.add_argument("--prompt", help="prompt text (not part of the matched output)")
    p.add_argument("--prompt-file", help="read the prompt from a file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["sample", "greedy"], default="sample")
    p.add_argument("--max-tokens", type=int, default=512)
    p.add_argument("--eos-bias", type=float, default=1.0)
    p.add_argument("--vocab", metavar="FILE", help="vocabulary JSON (default: bundled)")
    p.add_argument(
        "--scorer",
        default="uniform",
        help="uniform | echo:<script.json> | remote:<url>",
    )
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check text against a constraint")
    _add_constraint_args(p)
    p.add_argument("--text", help="text to validate (default: stdin)")
    p.add_argument(
        "--keep-trailing-newline",
        action="store_true",
        help="do not strip the final newline from stdin input",
    )
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="service config JSON")
    p.add_argument("--listen", help="host:port (default 127.0.0.1:8000)")
    p.add_argument("--vocab", metavar="FILE")
    p.add_argument("--store", metavar="DIR")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScorerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ConstraintError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
