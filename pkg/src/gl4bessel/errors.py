"""Exception and warning types shared across the package."""


class BesselError(Exception):
    """Base class for all package errors."""


class PoleError(BesselError, ArithmeticError):
    """An argument sits on (or within tolerance of) a pole."""


class NotAPole(BesselError, ValueError):
    """A residue was requested at a point that is not a pole."""


class DomainError(BesselError, ValueError):
    """An argument lies outside the domain of the function."""


class DivergenceError(BesselError, ArithmeticError):
    """A series neither terminates nor converges within budget."""


class DegenerateParameters(BesselError, ValueError):
    """Spectral parameters collide modulo the integers."""


class OrderError(BesselError, ValueError):
    """A coefficient lattice is too small for the requested operation."""


class ContourError(BesselError, ValueError):
    """A contour would pass through or sweep across a pole."""


class BudgetExceeded(BesselError, RuntimeError):
    """Quadrature needed more integrand evaluations than allowed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SingularCell(BesselError, ArithmeticError):
    """A Bruhat denominator vanishes: the point is off the big cell."""


class SizeBlowup(BesselError, RuntimeError):
    """A disjunctive normal form grew past the configured limit."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TruncationWarning(UserWarning):
    """The last shell of a truncated series is not negligible."""
