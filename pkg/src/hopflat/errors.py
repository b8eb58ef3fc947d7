"""Exception types shared across the package."""


class HopflatError(Exception):
    """Base class for all package errors."""


class DomainError(HopflatError):
    """Operand lives in the wrong space or algebra."""


class CapacityError(HopflatError):
    """Requested dense computation exceeds the configured cutoff."""


class NoSolution(HopflatError):
    """Linear system is inconsistent."""


class NotSemisimple(HopflatError):
    """Haar-integral system does not have a one-dimensional solution space."""


class StructureError(HopflatError):
    """Algebraic structure data is inconsistent (e.g. non-invertible antipode)."""


class TwistError(HopflatError):
    """Element fails the 2-cocycle conditions."""


class NotFactorizable(HopflatError):
    """The canonical map built from the R-matrix is not bijective."""


class PathError(HopflatError):
    """Path word is not composable, not reduced, or not admissible here."""


class DecompositionError(HopflatError):
    """Module decomposition failed to converge."""


class ConfigError(HopflatError):
    """Configuration file violates the schema or is semantically invalid."""


class UsageError(HopflatError):
    """Bad command-line usage."""
