"""Exception and warning types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; generic ``ValueError``/``TypeError`` are reserved for plain misuse
(wrong argument types, impossible shapes).
"""

from __future__ import annotations

__all__ = [
    "FrftkitError",
    "AngleDegenerate",
    "GridTooLarge",
    "GridMismatch",
    "OffGridShift",
    "IrrationalScale",
    "NonCommutingOps",
    "PathArityMismatch",
    "KeyMismatch",
    "NoDecay",
    "TruncationLoss",
    "WindowTooSmall",
    "NotHermitian",
    "BadRank",
    "NotMultiTile",
    "AliasRiskWarning",
    "InadmissibleBankWarning",
]


class FrftkitError(Exception):
    """Base class for all package-specific errors."""


class AngleDegenerate(FrftkitError):
    """The angle is too close to a multiple of pi for kernel-based work."""


class GridTooLarge(FrftkitError):
    """A quadratic-cost reference routine was asked to run on a big grid."""


class GridMismatch(FrftkitError):
    """Two objects that must share a sampling grid do not."""


class OffGridShift(FrftkitError):
    """A shift amount is not an integer multiple of the grid spacing."""


class IrrationalScale(FrftkitError):
    """A dilation factor is not representable as a small rational."""


class NonCommutingOps(FrftkitError):
    """A pipeline stage does not commute with the operator being measured."""


class PathArityMismatch(FrftkitError):
    """A layer path's length or labels do not match the network config."""


class KeyMismatch(FrftkitError):
    """Two feature collections do not share the same index set."""


class NoDecay(FrftkitError):
    """An atom's transform does not decay fast enough for bound constants."""


class TruncationLoss(FrftkitError):
    """An offset window drops more spectral mass than the guard allows."""


class WindowTooSmall(FrftkitError):
    """An analytic band family does not fit inside the offset window."""


class NotHermitian(FrftkitError):
    """A matrix handed to the Hermitian eigensolver is not Hermitian."""


class BadRank(FrftkitError):
    """A requested subspace rank is outside the feasible range."""


class NotMultiTile(FrftkitError):
    """A tile set does not have the uniform per-cell multiplicity."""


class AliasRiskWarning(UserWarning):
    """A dilation folds measurable spectral mass across the Nyquist edge."""


class InadmissibleBankWarning(UserWarning):
    """A layer stack fails the admissibility budget; results may not obey
    the energy and deviation bounds."""
