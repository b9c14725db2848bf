"""Exception hierarchy.

Every domain error derives from :class:`WaringError`; the CLI maps these to
exit code 2 and reports the class name.
"""


class WaringError(Exception):
    """Base class for all domain errors raised by the package."""


class NonPrimeP(WaringError, ValueError):
    pass


class NonPrimePowerQ(WaringError, ValueError):
    pass


class SizeCapExceeded(WaringError, ValueError):
    pass


class CapExceeded(WaringError, ValueError):
    pass


class DivisionByZero(WaringError, ZeroDivisionError):
    pass


class DerivativeNotUnit(WaringError, ValueError):
    pass


class NotARoot(WaringError, ValueError):
    pass


class HypothesisViolated(WaringError, ValueError):
    pass


class NoRootModJ(WaringError, ValueError):
    pass


class CharDividesK(WaringError, ValueError):
    pass


class BaseNotARepresentation(WaringError, ValueError):
    pass


class ExcludedFieldSize(WaringError, ValueError):
    def __init__(self, q, row):
        self.q = q
        self.row = row
        super().__init__(f"q={q} is excluded by the k={row['k']}, m={row['m']} row")


class ResidueFieldUncoverable(WaringError, ValueError):
    def __init__(self, factor, k):
        self.factor = factor
        self.k = k
        super().__init__(f"residue field of factor {factor} is not coverable by {k}-th powers")


class GcdViolation(WaringError, ValueError):
    pass


class NonCommutative(WaringError, ValueError):
    pass


class ModeViolation(WaringError, ValueError):
    pass
