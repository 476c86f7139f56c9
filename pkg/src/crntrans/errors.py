"""Exception hierarchy shared by every module of the package."""


class CRNError(Exception):
    """Base class for all errors raised by crntrans."""


class ParseError(CRNError):
    """Malformed network or translation text.

    ``line`` and ``column`` are 1-based; ``column`` may be ``None`` when the
    problem concerns the file as a whole (e.g. an unused species).
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NetworkError(CRNError):
    """A network violates a structural invariant (self-reaction, duplicate rate, ...)."""


class NotWeaklyReversibleError(CRNError):
    pass


class CapExceededError(CRNError):
    """A configurable desk-scale guard refused an exponential computation."""


class TranslationError(CRNError):
    """A candidate translation fails one of the three defining conditions."""


class HypothesisError(CRNError):
    """Preconditions of the binomial steady-state theorem are not met."""


class ConvergenceError(CRNError):
    def __init__(self, message, iterations=None, residual=None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(message)
