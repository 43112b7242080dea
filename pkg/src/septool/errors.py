"""Exception hierarchy shared by every septool module."""


class SeptoolError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class VariableMismatch(SeptoolError, ValueError):
    pass


class NotAUnit(SeptoolError, ArithmeticError):
    pass


class NotDivisible(SeptoolError, ArithmeticError):
    pass


class CompositionError(SeptoolError, ValueError):
    pass


class NotSingular(SeptoolError, ValueError):
    pass


class IdenticallyZeroCone(SeptoolError):
    """The separatrix-tangent polynomial vanishes: dicritical point."""


class TruncationError(SeptoolError):
    """The working truncation is too small to decide something."""


class ResonanceError(SeptoolError, ArithmeticError):
    pass


class NotPrepared(SeptoolError, ValueError):
    pass


class DegenerateCurve(SeptoolError, ValueError):
    pass


class HypothesisViolated(SeptoolError, ValueError):
    exit_code = 3


class ParityError(SeptoolError, ValueError):
    pass


class CertificationError(SeptoolError):
    exit_code = 4


class ZeroOnCircle(CertificationError):
    pass


class TruncationTooCoarse(CertificationError):
    pass


class NoStabilization(CertificationError):
    pass


class InsufficientData(SeptoolError, ValueError):
    pass


class DSLSyntaxError(SeptoolError, SyntaxError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
