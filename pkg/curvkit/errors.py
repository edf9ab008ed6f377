"""Exception hierarchy shared by every curvkit module."""
from __future__ import annotations

from typing import Any, Optional


class CurvkitError(Exception):
    """Base class for all curvkit errors."""


# === Input errors (CLI exit 1) ===
class InputError(CurvkitError):
    """The caller handed us something malformed or out of contract."""


class ParseError(InputError):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None) -> None:
        self.line = line
        self.col = col
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(InputError):
    def __init__(self, invariant: str, witness: Any = None) -> None:
        self.invariant = invariant
        self.witness = witness
        detail = f": {witness}" if witness is not None else ""
        super().__init__(f"{invariant} violated{detail}")


class DegenerateMetric(InputError):
    pass


class NotSymmetric(InputError):
    pass


class NotSkew(InputError):
    pass


class NotIsometry(InputError):
    pass


class NotLorentzian(InputError):
    pass


class NonSquarefreeInput(InputError):
    pass


class SpecInvalid(InputError):
    pass


class DimensionLimitExceeded(InputError):
    def __init__(self, dim: int, limit: int) -> None:
        self.dim = dim
        self.limit = limit
        super().__init__(f"dimension {dim} exceeds the limit {limit} (set CURVKIT_MAX_DIM to raise it)")


# === Engine preconditions ===
class NotSemisymmetric(CurvkitError):
    def __init__(self, witness: Any = None) -> None:
        self.witness = witness
        super().__init__(f"curvature tensor is not semi-symmetric; witness {witness}")


# === Theorem violations (CLI exit 2) ===
class TheoremViolation(CurvkitError):
    """A certified statement failed on a concrete instance."""


class FactorMultiplicityViolation(TheoremViolation):
    def __init__(self, factor: Any, multiplicity: int) -> None:
        self.factor = factor
        self.multiplicity = multiplicity
        super().__init__(
            f"minimal polynomial factor {factor} has multiplicity {multiplicity}; "
            "only X may repeat, and at most twice"
        )


class GaveUp(CurvkitError):
    def __init__(self, attempts: int) -> None:
        self.attempts = attempts
        super().__init__(f"no non-semi-symmetric perturbation found after {attempts} attempts")


# === Internal breaches (CLI exit 3) ===
class InternalInvariantError(CurvkitError):
    """An invariant that the code guarantees did not hold. Always a bug."""


class IterationCap(InternalInvariantError):
    pass


__all__ = [
    "CurvkitError",
    "DegenerateMetric",
    "DimensionLimitExceeded",
    "FactorMultiplicityViolation",
    "GaveUp",
    "InputError",
    "InternalInvariantError",
    "IterationCap",
    "NonSquarefreeInput",
    "NotIsometry",
    "NotLorentzian",
    "NotSemisymmetric",
    "NotSkew",
    "NotSymmetric",
    "ParseError",
    "SpecInvalid",
    "TheoremViolation",
    "ValidationError",
]
