"""constraintsmith: composable output-format constraints, compiled to a
DFA over Unicode scalars and enforced token-by-token during generation.

Build a ConstraintSpec from primitives, compile it to a pattern, index a
token vocabulary against the automaton, and decode with any scorer — the
mask guarantees the result matches the constraint.
"""

from .decode import (
    DecodeParams,
    FINISH_EOS,
    FINISH_FAILURE,
    FINISH_FORCED_EOS,
    GenerationResult,
    TokenScorer,
    echo_scorer,
    generate,
    remote_scorer,
    uniform_scorer,
)
from .errors import (
    ComplexityLimit,
    ConstraintError,
    EmptyLanguage,
    InvalidSpec,
    LengthExceeded,
    NameCollision,
    PatternSyntaxError,
    ScorerError,
    SpecFormatError,
    StoreError,
    TokenNotAllowed,
    UnknownState,
    UnsupportedFeature,
)
from .fsm import (
    Automaton,
    build_dfa,
    full_match,
    is_accepting,
    is_live,
    match_prefix,
    sample_string,
    step,
    to_dot,
)
from .model import (
    BulletList,
    ConstraintSpec,
    ExactText,
    JsonField,
    JsonObject,
    MultipleChoice,
    OrderedList,
    SomeText,
    Violation,
    parse_spec,
    serialize_spec,
    validate_spec,
)
from .regex import (
    CompiledConstraint,
    compile_primitive,
    compile_spec,
    parse_manual_regex,
    parse_pattern,
    render_pattern,
)
from .store import ConstraintStore
from .tokens import (
    TokenIndex,
    Vocabulary,
    advance,
    allowed_tokens,
    basic_vocabulary,
    build_index,
    encode_greedy,
)

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "BulletList",
    "CompiledConstraint",
    "ComplexityLimit",
    "ConstraintError",
    "ConstraintSpec",
    "ConstraintStore",
    "DecodeParams",
    "EmptyLanguage",
    "ExactText",
    "FINISH_EOS",
    "FINISH_FAILURE",
    "FINISH_FORCED_EOS",
    "GenerationResult",
    "InvalidSpec",
    "JsonField",
    "JsonObject",
    "LengthExceeded",
    "MultipleChoice",
    "NameCollision",
    "OrderedList",
    "PatternSyntaxError",
    "ScorerError",
    "SomeText",
    "SpecFormatError",
    "StoreError",
    "TokenIndex",
    "TokenNotAllowed",
    "TokenScorer",
    "UnknownState",
    "UnsupportedFeature",
    "Violation",
    "Vocabulary",
    "advance",
    "allowed_tokens",
    "basic_vocabulary",
    "build_dfa",
    "build_index",
    "compile_primitive",
    "compile_spec",
    "echo_scorer",
    "encode_greedy",
    "full_match",
    "generate",
    "is_accepting",
    "is_live",
    "match_prefix",
    "parse_manual_regex",
    "parse_pattern",
    "parse_spec",
    "remote_scorer",
    "render_pattern",
    "sample_string",
    "serialize_spec",
    "step",
    "to_dot",
    "uniform_scorer",
    "validate_spec",
]
