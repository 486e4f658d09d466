"""Exception types shared across the toolkit."""


class RotaboussError(Exception):
    """Base class for all toolkit errors."""


class OutOfLattice(RotaboussError):
    """Wavenumber index lies outside the admissible lattice."""


class WrongClass(RotaboussError):
    """Operation applied to a wavenumber index of the wrong lattice class."""


class NonConvergence(RotaboussError):
    """Iterative refinement failed to meet its residual bound."""


class SingularShift(RotaboussError):
    """Eigenvector coefficient formula evaluated at a singular shift."""


class TruncationTooSmall(RotaboussError):
    """Lattice scan minimizer touched the truncation boundary."""


class SigmaOutOfRange(RotaboussError):
    """Prandtl number outside the range required by the operation."""


class PositiveDelta(RotaboussError):
    """Cubic coefficient of the reduced system came out non-negative."""


class BlowUp(RotaboussError):
    """Simulation field max-norm exceeded the stability threshold."""


class InsufficientOscillations(RotaboussError):
    """Too few zero crossings to estimate an oscillation period."""
