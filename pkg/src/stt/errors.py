"""Exception hierarchy for the kernel.

Every error raised by the kernel derives from :class:`SttError`, so callers
that only care about "did it work" can catch a single class.
"""


class SttError(Exception):
    """Base class of all kernel errors."""


class UnknownBuiltin(SttError):
    pass


class ValidationError(SttError):
    """A theory failed validation; ``diagnostics`` lists every problem found."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "\n".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} problem(s) in theory:\n{lines}")


class LengthMismatch(SttError):
    pass


class BudgetExhausted(SttError):
    """Rewriting took more steps than allowed; the orientation may not terminate."""


class UnorientedEquation(SttError):
    pass


class ContextMismatch(SttError):
    pass


class IndexOutOfRange(SttError):
    pass


class SortError(SttError):
    """A term is not well-sorted."""


class UnboundVariable(SortError):
    pass


class SortMismatch(SortError):
    def __init__(self, message, expected=None, found=None, position=None):
        super().__init__(message)
        self.expected = expected
        self.found = found
        self.position = position


class ParamSortMismatch(SortError):
    pass


class PlaceholderArityMismatch(SortError):
    pass


class IllFormedTerm(SortError):
    """Structural problem: unknown operator, wrong number of arguments, etc."""


class ParamSubstitution(SttError):
    """A non-variable term would be substituted into a parameter slot."""


class NonEnumerableOperator(SttError):
    pass


class SortOutsideUniverse(SttError):
    pass


class CarrierTooLarge(SttError):
    pass


class DslError(SttError):
    """Parse or elaboration failure, located by a source span."""

    def __init__(self, kind, message, span=None):
        self.kind = kind
        self.message = message
        self.span = span
        where = f"{span}: " if span is not None else ""
        super().__init__(f"{where}{kind}: {message}")
