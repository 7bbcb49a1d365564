"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(LabError, ValueError):
    pass


class EmptyRegionError(LabError, ValueError):
    """A ball contains no cell center."""


class CoverageError(LabError, ValueError):
    """A grid cell is not contained in any ball of a family."""


class DegenerateBasisError(LabError, ValueError):
    """Too few cells to orthonormalize the requested polynomial space."""


class InconclusiveFitError(LabError):
    """A power-law fit is too noisy to support a conclusion."""
