"""Exception hierarchy shared by every ktdecay module."""


class KTDecayError(Exception):
    """Base class for all library errors."""


class DomainError(KTDecayError, ValueError):
    """An argument lies outside the domain of the requested map."""


class ValidationError(KTDecayError, ValueError):
    """A density, rate function or operator model violates its invariants."""


class SingularityError(KTDecayError, ArithmeticError):
    """The spectrum touches the point at which a resolvent was requested."""


class NumericalError(KTDecayError, ArithmeticError):
    """An iterative routine failed to converge within its cap."""


class DiagnosticError(KTDecayError, ValueError):
    """A finite-window diagnostic cannot be run on the supplied input."""


class ApplicabilityError(KTDecayError, ValueError):
    """A requested n-range or window exceeds the trusted resolution."""


class FitError(KTDecayError, ValueError):
    """A rate fit is degenerate."""


class SpecError(KTDecayError, ValueError):
    """A job specification file is malformed or rejected.

    ``lineno`` is the 1-based line of the offending entry when known.
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
