"""Exception hierarchy shared by all modules."""


class MotivicKitError(Exception):
    """Base class; the CLI maps every subclass to a nonzero exit."""


class ParseError(MotivicKitError, ValueError):
    pass


class ZeroDenominator(MotivicKitError, ZeroDivisionError):
    pass


class UnsupportedLevel(MotivicKitError):
    pass


class NonIntegerCoefficients(MotivicKitError, ValueError):
    pass


class NonExpandable(MotivicKitError):
    """Rational function has no Taylor expansion at T = 0."""


class DivisionByZeroDiscrepancy(MotivicKitError, ZeroDivisionError):
    pass


class OrderMismatch(MotivicKitError, ValueError):
    pass


# -- resolution documents ---------------------------------------------


class SchemaError(MotivicKitError, ValueError):
    pass


class InconsistentStratumData(SchemaError):
    pass


class MissingMultiplicity(SchemaError):
    pass


class ForbiddenZeroPair(SchemaError):
    pass


class MissingEmptyStratum(MotivicKitError):
    pass


# -- invariants -------------------------------------------------------


class NotLogTerminal(MotivicKitError):
    pass


class PoleAtOne(MotivicKitError):
    def __init__(self, multiplicity: int):
        super().__init__(f"pole of order {multiplicity} at s = 1")
        self.multiplicity = multiplicity


class StrictlyLogCanonical(MotivicKitError):
    pass


class DegenerateDenominator(MotivicKitError):
    pass


class DConsistencyFailure(MotivicKitError):
    pass


# -- counting ---------------------------------------------------------


class BudgetExceeded(MotivicKitError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} evaluations, budget is {budget}")
        self.required = required
        self.budget = budget


class InsufficientData(MotivicKitError, ValueError):
    pass
