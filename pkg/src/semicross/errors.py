"""Exception types shared across the package."""


class SemicrossError(ValueError):
    """Base class for invalid inputs."""


class GuardError(SemicrossError):
    """An exhaustive enumeration was requested beyond its size guard."""


class SideMismatchError(SemicrossError):
    """Operands live on different sides or over different systems."""


class NotPermutationError(SemicrossError):
    """The operation needs a bijective map."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""
