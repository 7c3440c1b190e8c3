"""Exception types raised across the package."""


class OctolatError(Exception):
    """Base class for all package errors."""


class ZeroInput(OctolatError, ZeroDivisionError):
    """Inverse of the zero octonion requested."""


class ZeroDivisor(OctolatError, ZeroDivisionError):
    """Complexified octonion with vanishing norm form (no inverse exists)."""


class TopologyMismatch(OctolatError, ValueError):
    """Operation requires a different grid topology."""


class DegenerateGrid(OctolatError, ValueError):
    """Stencil operation on a grid with fewer than 3 points along some axis."""


class SupportViolation(OctolatError, ValueError):
    """Test function touches the faces of its computational window."""


class MissingFundamentalSolution(OctolatError, ValueError):
    """No fundamental solution supplied and none can be constructed."""


class SingularFrequency(OctolatError, ValueError):
    """Closed-form layer symbol evaluated at the zero frequency."""


class SizeGuard(OctolatError, ValueError):
    """Input exceeds the cost guard of a slow reference implementation."""


class SingularMatrix(OctolatError, ValueError):
    """Dense multiplication matrix is (numerically) singular."""


class FormatError(OctolatError, ValueError):
    """Malformed kernel or boundary-data file."""
