"""Exception hierarchy shared by all charp_lab modules."""


class CharpLabError(Exception):
    """Base class for library errors."""


class PolynomialSyntaxError(CharpLabError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownVariableError(CharpLabError):
    pass


class ExponentOverflowError(CharpLabError):
    pass


class ResourceLimitError(CharpLabError):
    """A computation exceeded a configured budget (pair budget, chain budget, ...)."""


class PreconditionError(CharpLabError):
    pass


class SearchExhaustedError(CharpLabError):
    pass


class NotMonomialError(PreconditionError):
    pass


class FalsifiedExpectation(CharpLabError):
    """A structural expectation (e.g. a quotient F-purity certificate) failed to hold."""
