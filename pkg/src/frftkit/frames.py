"""Frame diagnostics for banks of analysis atoms.

A bank of atoms ``g_1 .. g_m`` analyzes signals through chirp-twisted
convolutions at a fixed angle.  Its stability is read off a single
nonnegative spectrum: the weighted sum of squared transform magnitudes of
the atoms over the output grid.  The extreme values of that spectrum are
the frame bounds; banks whose upper bounds stay at or below one (after
accounting for nonlinearity and pooling constants) are admissible for
cascaded feature extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

from .grids import Grid, SampledSignal, ThetaParam
from .transform import frft, frft_output_grid

__all__ = [
    "AtomBank",
    "FrameBounds",
    "frame_bounds",
    "check_admissibility",
    "ADMISSIBILITY_SLACK",
]

#: Absolute slack allowed when comparing admissibility products against one.
ADMISSIBILITY_SLACK = 1e-9


@dataclass(frozen=True, slots=True)
class AtomBank:
    """A finite family of analysis atoms sharing one grid and one angle."""

    atoms: tuple[SampledSignal, ...]
    theta: ThetaParam

    def __post_init__(self) -> None:
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) == 0:
            raise ValueError("an atom bank needs at least one atom")
        grid = self.atoms[0].grid
        for atom in self.atoms[1:]:
            if atom.grid != grid:
                raise ValueError("all atoms in a bank must share one grid")

    @property
    def grid(self) -> Grid:
        return self.atoms[0].grid

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True, slots=True)
class FrameBounds:
    """Extremes and full profile of a bank's analysis spectrum.

    ``spectrum`` holds the per-frequency values on the transform output
    grid (flattened row-major); ``lower`` and ``upper`` are its grid
    minimum and maximum.
    """

    lower: float
    upper: float
    spectrum: NDArray[np.float64] = field(repr=False)
    grid: Grid = field(repr=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError("frame bounds must satisfy 0 <= lower <= upper")
        if not np.isfinite(self.upper):
            raise ValueError("upper frame bound must be finite")
        spectrum = np.asarray(self.spectrum, dtype=np.float64)
        if spectrum.shape != (self.grid.size,):
            raise ValueError("spectrum length must match the grid size")
        spectrum = spectrum.copy()
        spectrum.flags.writeable = False
        object.__setattr__(self, "spectrum", spectrum)


def frame_bounds(bank: AtomBank) -> FrameBounds:
    """Frame bounds of a bank at its configured angle.

    The spectrum at frequency ``ω`` is ``|sin θ|^n`` times the sum over
    atoms of ``|F_θ g(ω)|²``; the bounds are its minimum and maximum over
    the transform output grid.
    """
    theta = bank.theta
    weight = theta.abs_sin ** bank.grid.n_dims
    out_grid = frft_output_grid(bank.grid, theta)
    spectrum = np.zeros(out_grid.size, dtype=np.float64)
    for atom in bank.atoms:
        spectrum += np.abs(frft(atom, theta).values) ** 2
    spectrum *= weight
    return FrameBounds(
        lower=float(spectrum.min()),
        upper=float(spectrum.max()),
        spectrum=spectrum,
        grid=out_grid,
    )


def check_admissibility(
    layers: Iterable[tuple[FrameBounds | float, float, float]],
) -> bool:
    """Whether a cascade of analysis layers contracts energy.

    Each entry is ``(bound, L, R)``: the layer's upper frame bound (either
    a :class:`FrameBounds` or the bare number), the Lipschitz constant of
    its nonlinearity, and that of its pooling map.  The cascade is
    admissible when every layer satisfies both ``B <= 1`` and
    ``B L² R² <= 1`` up to :data:`ADMISSIBILITY_SLACK`.
    """
    for bound, lipschitz, pooling in layers:
        upper = bound.upper if isinstance(bound, FrameBounds) else float(bound)
        if upper > 1.0 + ADMISSIBILITY_SLACK:
            return False
        if upper * lipschitz**2 * pooling**2 > 1.0 + ADMISSIBILITY_SLACK:
            return False
    return True
