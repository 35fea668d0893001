"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (the class name) and the
process exit status the CLI maps it to: 2 for malformed input, 1 for everything
else.
"""


class AlgDiagError(Exception):
    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": str(self)}


class MalformedInput(AlgDiagError):
    exit_code = 2


class NonPrimeCharacteristic(MalformedInput):
    pass


class ReducibleModulus(MalformedInput):
    pass


class VariableCountMismatch(AlgDiagError):
    pass


class ZeroPolynomial(AlgDiagError):
    pass


class NotARoot(AlgDiagError):
    pass


class SingularBranch(AlgDiagError):
    def __init__(self, message: str = "E_y(0, y0) = 0"):
        super().__init__(
            message + "; singular branches are not solved, supply coefficients "
            "directly with a series file (import_series)"
        )


class BadAxisCount(AlgDiagError):
    pass


class SupportEscape(AlgDiagError):
    pass


class StateBudgetExceeded(AlgDiagError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        # states discovered before the budget ran out, in BFS order
        self.partial = partial


class NotFound(AlgDiagError):
    pass


class InsufficientPrecision(AlgDiagError):
    pass


class ZeroSeries(AlgDiagError):
    pass


class NotAnnihilated(AlgDiagError):
    pass


class BoundViolation(AlgDiagError):
    pass
