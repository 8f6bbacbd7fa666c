"""Error types shared by all modules.

Every error carries a stable ``code`` string; the CLI prints it in the
machine-readable error object on stderr.
"""

from __future__ import annotations

from typing import Any


class StokesError(Exception):
    code = "StokesError"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": self.message}
        for key, val in self.details.items():
            out[key] = val
        return out


class AssumptionViolation(StokesError):
    code = "AssumptionViolation"


class MixedSlopes(AssumptionViolation):
    code = "MixedSlopes"


class MixedModuli(AssumptionViolation):
    code = "MixedModuli"


class SlopeNotGreaterThanOne(AssumptionViolation):
    code = "SlopeNotGreaterThanOne"


class DuplicateCircle(AssumptionViolation):
    code = "DuplicateCircle"


class OnBoundary(StokesError):
    code = "OnBoundary"


class SameExponent(StokesError):
    code = "SameExponent"


class NotSingular(StokesError):
    code = "NotSingular"


class DegenerateConfiguration(StokesError):
    code = "DegenerateConfiguration"


class NonGenericBase(StokesError):
    code = "NonGenericBase"


class ZeroSubstitutionForInvertible(StokesError):
    code = "ZeroSubstitutionForInvertible"


class SizeMismatch(StokesError):
    code = "SizeMismatch"


class LabelMismatch(StokesError):
    code = "LabelMismatch"


class NotUnipotent(StokesError):
    code = "NotUnipotent"


class ParseError(StokesError):
    code = "ParseError"


class ValidationError(StokesError):
    code = "ValidationError"


class RelationViolated(ValidationError):
    code = "RelationViolated"


class PatternViolated(ValidationError):
    code = "PatternViolated"


class BadFormalShape(ValidationError):
    code = "BadFormalShape"


class NonTriangularSystem(StokesError):
    code = "NonTriangularSystem"


class Inconsistent(StokesError):
    code = "Inconsistent"


class IncompleteAssignment(StokesError):
    code = "IncompleteAssignment"
