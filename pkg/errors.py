"""
Reflectwist Errors
==================
Typed failures. Every error carries a replayable witness and the CLI exit
code of its family:

    MalformedInput     exit 2   the input could not be read as the declared object
    PropertyFailure    exit 1   a mathematical property failed on a concrete instance
    SizeLimitExceeded  exit 3   a search would exceed the configured gate
"""

from typing import Any, Dict, Optional


class ReflectwistError(ValueError):
    """Base class for all package errors"""

    exit_code = 1

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness: Dict[str, Any] = dict(witness or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "witness": self.witness,
        }


# ============================================================================
# MALFORMED INPUT
# ============================================================================

class MalformedInput(ReflectwistError):
    exit_code = 2


class ShapeError(MalformedInput):
    pass


class RangeError(MalformedInput):
    pass


class SizeMismatch(MalformedInput):
    pass


class ConfigError(MalformedInput):
    pass


class SchemaError(MalformedInput):
    pass


# ============================================================================
# PROPERTY FAILURES
# ============================================================================

class PropertyFailure(ReflectwistError):
    exit_code = 1


class YbeViolation(PropertyFailure):
    pass


class NotCommuting(PropertyFailure):
    pass


class NotBijective(PropertyFailure):
    pass


class ShelfViolation(PropertyFailure):
    pass


class Degenerate(PropertyFailure):
    pass


class NotAReflection(PropertyFailure):
    pass


class DtViolation(PropertyFailure):
    pass


class BdtViolation(PropertyFailure):
    pass


class BraidRelationViolation(PropertyFailure):
    pass


class NotAssociative(PropertyFailure):
    pass


class NoIdentity(PropertyFailure):
    pass


class NoInverse(PropertyFailure):
    pass


class NotASkewBrace(PropertyFailure):
    pass


class NotABraiding(PropertyFailure):
    pass


class NotAGroupReflection(PropertyFailure):
    pass


class NotFaithful(PropertyFailure):
    pass


class NotIsomorphism(PropertyFailure):
    pass


class NotFixing(PropertyFailure):
    pass


class HypothesisViolation(PropertyFailure):
    pass


class FalsificationEvent(PropertyFailure):
    """A proven implication failed on a concrete instance; always worth a bug report"""
    pass


# ============================================================================
# GATES
# ============================================================================

class SizeLimitExceeded(ReflectwistError):
    exit_code = 3
