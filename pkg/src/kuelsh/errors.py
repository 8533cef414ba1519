"""Exception hierarchy.

Every error carries a machine-readable ``code`` and the CLI exit status it
maps to: 2 for bad input, 3 when an algebra is not (provably) symmetric,
4 for internal-consistency failures.
"""

from __future__ import annotations


class KuelshError(Exception):
    code = "Error"
    exit_code = 2

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class ValidationError(KuelshError):
    code = "ValidationError"


# field


class NotPrime(ValidationError):
    code = "NotPrime"


class DegreeZero(ValidationError):
    code = "DegreeZero"


class SizeOverflow(ValidationError):
    code = "SizeOverflow"


class MixedFields(ValidationError):
    code = "MixedFields"


class DivisionByZero(ValidationError, ZeroDivisionError):
    code = "DivisionByZero"


class ElementSyntaxError(ValidationError):
    code = "ElementSyntaxError"


# presentation


class PresentationSyntaxError(ValidationError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f"line {line}" if line is not None else ""
        if column is not None:
            loc += f", column {column}"
        super().__init__(f"{loc}: {message}" if loc else message, line=line, column=column)
        self.line = line
        self.column = column


class UnknownVertex(ValidationError):
    code = "UnknownVertex"


class UnknownArrow(ValidationError):
    code = "UnknownArrow"


class NonComposablePath(ValidationError):
    code = "NonComposablePath"


class NonParallelRelation(ValidationError):
    code = "NonParallelRelation"


class NonAdmissibleRelation(ValidationError):
    code = "NonAdmissibleRelation"


class BadParam(ValidationError):
    code = "BadParam"


class BadForm(ValidationError):
    code = "BadForm"


class UnknownName(ValidationError):
    code = "UnknownName"


class CharacteristicMismatch(ValidationError):
    code = "CharacteristicMismatch"


class MissingParam(ValidationError):
    code = "MissingParam"


class ParamForbiddenValue(ValidationError):
    code = "ParamForbiddenValue"


# rewriting / linear algebra


class BoundExceeded(ValidationError):
    code = "BoundExceeded"


class InconsistentPresentation(ValidationError):
    code = "InconsistentPresentation"


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class NotASubspace(ValidationError):
    code = "NotASubspace"


class BadTwist(ValidationError):
    code = "BadTwist"


class DegreeUnsupported(ValidationError):
    code = "DegreeUnsupported"


class OracleTooLarge(ValidationError):
    code = "OracleTooLarge"


class NotCentralInput(ValidationError):
    code = "NotCentralInput"


# symmetric-algebra failures


class FormError(KuelshError):
    exit_code = 3


class DegenerateForm(FormError):
    code = "DegenerateForm"


class NotCentralForm(FormError):
    code = "NotCentralForm"


class NotSymmetricAlgebra(FormError):
    code = "NotSymmetricAlgebra"


class SearchExhausted(FormError):
    code = "SearchExhausted"


class SocleMismatch(FormError):
    code = "SocleMismatch"


# internal consistency


class ConsistencyError(KuelshError):
    exit_code = 4


class AssociativityFailure(ConsistencyError):
    code = "AssociativityFailure"


class ChainNotDescending(ConsistencyError):
    code = "ChainNotDescending"


class NotAnIdeal(ConsistencyError):
    code = "NotAnIdeal"


class XiNotCentral(ConsistencyError):
    code = "XiNotCentral"


class ComplexError(ConsistencyError):
    code = "ComplexError"


class ReproductionFailure(ConsistencyError):
    code = "ReproductionFailure"
