"""Exception families raised by the engine.

Each family maps to a distinct CLI exit code (see ``twopt.cli``).
"""


class TwoPointError(Exception):
    """Base class for engine errors."""

    exit_code = 1
    kind = "engine"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class ValidationError(TwoPointError, ValueError):
    exit_code = 2
    kind = "validation"


class SectorMismatchError(ValidationError):
    kind = "sector"


class MonoidMismatchError(ValidationError):
    kind = "monoid"


class DivisibilityError(TwoPointError, ArithmeticError):
    """A series that should be divisible by (z1+z2) left a remainder."""

    exit_code = 3
    kind = "divisibility"

    def __init__(self, antidiagonal, remainder, degree=None, entry=None):
        self.antidiagonal = antidiagonal
        self.remainder = remainder
        self.degree = degree
        self.entry = entry
        msg = f"nonzero remainder {remainder} on anti-diagonal {antidiagonal}"
        if degree is not None:
            msg += f" at degree {degree}"
        if entry is not None:
            msg += f", entry {entry}"
        super().__init__(msg)

    def located(self, degree, entry):
        return DivisibilityError(self.antidiagonal, self.remainder, degree, entry)

    def to_dict(self):
        d = super().to_dict()
        d.update(antidiagonal=self.antidiagonal, degree=str(self.degree), entry=self.entry)
        return d


class ConditionError(TwoPointError):
    """A column generator produced z-powers that a column of S* cannot have."""

    exit_code = 4
    kind = "condition"


class LimitError(TwoPointError):
    """Two equivariant evaluations disagree on a non-equivariant number."""

    exit_code = 5
    kind = "limit"


class DegenerateLambdaError(ValidationError):
    kind = "degenerate-lambda"


class NotCertifiedError(TwoPointError):
    exit_code = 6
    kind = "not-certified"
