class GwbError(RuntimeError):
    """
    Base class of every error raised by the workbench. Subclasses may carry
    structured context as attributes; `details()` exposes it to reports.
    """

    def details(self) -> dict:
        return {}


class PreconditionViolated(GwbError):
    """
    Raised when an input violates a precondition that has no dedicated error.
    """
    pass


class ResourceExhausted(GwbError):
    """
    Raised when an exact computation exceeds its configured step budget.
    """

    def __init__(self, message: str, steps: int = 0):
        super().__init__(message)
        self.steps = steps

    def details(self) -> dict:
        return {'steps': self.steps}


class MalformedVariety(GwbError):
    """
    The variety is empty (its ideal is the unit ideal) or is not presented in
    the x1..xn, y1..yn coordinates of G^n.
    """
    pass


class PointNotOnVariety(GwbError):
    pass


class SamplingFailed(GwbError):
    """
    No smooth sample point of a variety could be produced.
    """
    pass


class NotPure(GwbError):
    """
    A point has a bounded-denominator multiple in the declared lattice of the
    base but is not itself declared there.
    """
    pass


class MalformedPresentation(GwbError):
    pass


class UnsupportedHSpec(GwbError):
    pass


class ToleranceUnachievable(GwbError):
    pass


class VNotOverConstants(GwbError):
    pass


class DependentRows(GwbError):
    pass


class PrecisionTooLow(GwbError):
    """
    The numeric input carries fewer significant digits than the requested
    tolerance demands.
    """

    def __init__(self, message: str, digits: int = 0, required: int = 0):
        super().__init__(message)
        self.digits = digits
        self.required = required

    def details(self) -> dict:
        return {'digits': self.digits, 'required': self.required}


class MaxRestartsExceeded(GwbError):
    pass


class SingularLocusOnly(GwbError):
    """
    Every converged sample landed where the Jacobian drops rank.
    """
    pass


class PrecisionUnreachable(GwbError):
    """
    The requested approximation error cannot be met with the allowed
    denominators. `best_eps` is the best error that could be achieved.
    """

    def __init__(self, message: str, best_eps: float = float('inf')):
        super().__init__(message)
        self.best_eps = best_eps

    def details(self) -> dict:
        return {'best_eps': self.best_eps}


class NewtonDiverged(GwbError):
    pass


class NoTransversalPoint(GwbError):
    """
    Restarts were exhausted without a regular point at which the fibre of
    theta meets V transversally. This usually means V is not rotund.
    """
    pass


class NonzeroConstantTerm(GwbError):
    pass


class ZeroConstant(GwbError):
    pass


class LengthMismatch(GwbError):
    pass


class ResolutionTooLow(GwbError):
    def __init__(self, message: str, required: int = 0):
        super().__init__(message)
        self.required = required

    def details(self) -> dict:
        return {'required': self.required}


class ParseError(GwbError):
    """
    Malformed input. `line` and `column` locate the problem when it was found
    by the JSON decoder.
    """

    def __init__(self, message: str, line: int = None, column: int = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def details(self) -> dict:
        return {'line': self.line, 'column': self.column}


class UnknownVerb(GwbError):
    pass
