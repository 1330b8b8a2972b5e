"""Exception types shared across the package."""

from __future__ import annotations


class ConstraintError(Exception):
    """Base class for all errors raised by this package."""


class SpecFormatError(ConstraintError):
    """A constraint document could not be decoded (bad JSON, wrong shape,
    unknown variant name). `path` locates the offending element."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path


class InvalidSpec(ConstraintError):
    """A structurally well-formed spec violates one or more invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.path}: {v.message}" for v in self.violations))


class PatternSyntaxError(ConstraintError):
    """Malformed pattern text. `offset` is the character index of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class UnsupportedFeature(ConstraintError):
    """Syntactically recognizable regex feature outside the decidable dialect
    (backreference, lookaround, lazy quantifier, anchor, ...)."""

    def __init__(self, feature: str, offset: int):
        super().__init__(f"unsupported feature: {feature} at offset {offset}")
        self.feature = feature
        self.offset = offset


class EmptyLanguage(ConstraintError):
    """The pattern admits no string at all."""


class ComplexityLimit(ConstraintError):
    """Automaton construction exceeded the configured state cap."""


class LengthExceeded(ConstraintError):
    """No accepted string exists within the requested length bound."""


class UnknownState(ConstraintError):
    """A state id outside the automaton/index was queried."""


class TokenNotAllowed(ConstraintError):
    """advance() was called with a token absent from the state's allowed set.
    Signals a decoder bug or a tampered mask, never normal operation."""


class ScorerError(ConstraintError):
    """A scorer misbehaved (transport failure, malformed or degenerate
    response). `step` is the decode step at which it happened."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class StoreError(ConstraintError):
    """Constraint store failure (bad name)."""


class NameCollision(StoreError):
    """PUT with a name that differs only in case from a stored one."""
