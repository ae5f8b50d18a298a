"""Exception types raised across the package."""


class SuperpairError(Exception):
    """Base class for library errors."""


class BasisMismatch(SuperpairError):
    pass


class WindowOverflow(SuperpairError):
    """A windowed product would reference indices beyond the window."""


class FloorContamination(SuperpairError):
    """A truncated operator was asked for coefficients below its exact floor."""


class CocycleError(SuperpairError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CompatibilityError(SuperpairError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EscapeError(SuperpairError):
    """An operator value left the subspace it is required to land in."""


class SupportError(SuperpairError):
    """A Lax flow produced terms outside the declared variable pattern."""
