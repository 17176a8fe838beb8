"""Exception hierarchy shared by every module."""


class InterpMatError(Exception):
    """Base class for all library errors."""

    #: process exit code used by the command-line front end
    exit_code = 1


class InputError(InterpMatError):
    exit_code = 3


class ParseError(InputError):
    def __init__(self, message, text=None, pos=None, line=None):
        self.text = text
        self.pos = pos
        self.line = line
        where = ""
        if line is not None:
            where += f"line {line}"
        if pos is not None:
            where += (", " if where else "") + f"column {pos + 1}"
        if where:
            message = f"{message} ({where})"
        super().__init__(message)


class ModeError(InputError):
    """Exact and float data were mixed in one computation."""


class ValidationFailure(InterpMatError):
    exit_code = 2


class NumericDegeneracy(InterpMatError):
    exit_code = 4


class DegenerateInput(NumericDegeneracy):
    pass


class ZeroPolynomial(DegenerateInput):
    pass


class NotDivisible(NumericDegeneracy):
    pass


class NonZeroDimensional(NumericDegeneracy):
    pass


class SamplingFailed(NumericDegeneracy):
    pass


class RetryExhausted(NumericDegeneracy):
    pass


class RankDeficient(NumericDegeneracy):
    pass


class RayOnSurface(NumericDegeneracy):
    pass


class InversionFailed(NumericDegeneracy):
    pass


class DegenerateHyperplane(NumericDegeneracy):
    pass


class IdenticallyZeroResultant(NumericDegeneracy):
    pass


class ValidationFailed(ValidationFailure):
    pass
