"""Exception types shared across the package."""


class VerlindeKitError(Exception):
    """Base class for all package errors."""


class ConfigurationError(VerlindeKitError, ValueError):
    """An algebra, twist or command configuration is not admissible."""


class DomainError(VerlindeKitError, ValueError):
    """An argument lies outside the domain of an operation (e.g. not in the alcove)."""


class RegularityError(VerlindeKitError, ValueError):
    """A twisting / bilinear form is singular where a regular one is required."""


class CapExceededError(VerlindeKitError, ValueError):
    """A desk-scale size cap (matrix dimension, mode count) would be exceeded."""


class InvariantError(VerlindeKitError, ArithmeticError):
    """A numerical invariant check failed beyond its tolerance."""
