"""The angle-covariant operator algebra: translate, modulate, convolve, dilate.

Every operator here is a chirp conjugate of a classical one,

    translate:  T_s = e^{i pi s² cot} * C⁻ ∘ (circular shift by s) ∘ C
    convolve:   f ⋆ g = C⁻ [ |sin|^{-n/2} (Cf) * (Cg) ]      (* circular)
    dilate:     D_s = C⁻ ∘ (contract by s) ∘ C

with ``C`` the chirp of :func:`frftkit.transform.chirp_modulate`.  Composing
through the chirps keeps every textbook identity (translation/modulation
exchange, convolution commutation, dilation exchange) exact on the periodic
grid, wrap-around included.  On samples that do not wrap, the translate
reduces to the pointwise form ``e^{-2 i pi s·(t-s) cot} f(t-s)``.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import AliasRiskWarning, GridMismatch, GridTooLarge, IrrationalScale
from .grids import SampledSignal, ShiftVector, ThetaParam, as_shift
from .transform import centered_dft, centered_idft, chirp_modulate

__all__ = ["theta_translate", "theta_modulate", "theta_convolve", "theta_dilate"]

#: Largest denominator accepted for a dilation factor.
MAX_DENOMINATOR = 256
#: Cap on the refined-grid size used by the dilation resampler.
MAX_FINE_SIZE = 1 << 24
#: Relative spectral mass beyond the folding edge that triggers a warning.
ALIAS_GUARD = 1e-12


def theta_translate(
    f: SampledSignal,
    s: ShiftVector | Sequence[float] | float,
    theta: ThetaParam,
) -> SampledSignal:
    """Angle-covariant translation by the on-grid shift ``s``."""
    shift = as_shift(s, f.grid.n_dims)
    offsets = shift.index_offsets(f.grid)
    phase = np.exp(1j * np.pi * theta.cot_t * sum(c * c for c in shift.components))
    chirped = chirp_modulate(f, theta, +1)
    rolled = np.roll(chirped.as_nd(), offsets, axis=tuple(range(f.grid.n_dims)))
    shifted = chirped.with_values(phase * rolled.ravel())
    return chirp_modulate(shifted, theta, -1)


def theta_modulate(
    f: SampledSignal,
    s: ShiftVector | Sequence[float] | float,
    theta: ThetaParam,
) -> SampledSignal:
    """Angle-covariant modulation: a pure phase, no sample movement."""
    shift = as_shift(s, f.grid.n_dims)
    s_sq = sum(c * c for c in shift.components)
    coords = f.grid.coordinates()
    s_dot_t = sum(c * axis for c, axis in zip(shift.components, coords))
    phase = np.exp(1j * np.pi * (s_sq * theta.cot_t + 2.0 * theta.csc_t * s_dot_t))
    return f.with_values(f.values * phase)


def theta_convolve(f: SampledSignal, g: SampledSignal, theta: ThetaParam) -> SampledSignal:
    """Angle-covariant convolution via chirp, multiply, inverse chirp."""
    if f.grid != g.grid:
        raise GridMismatch("theta_convolve requires a common grid")
    grid = f.grid
    cf = centered_dft(chirp_modulate(f, theta, +1).as_nd(), grid.spacing)
    cg = centered_dft(chirp_modulate(g, theta, +1).as_nd(), grid.spacing)
    product = centered_idft(cf * cg, grid.spacing)
    scale = theta.abs_sin ** (-0.5 * grid.n_dims)
    return chirp_modulate(f.with_values(scale * product.ravel()), theta, -1)


def _as_fraction(s: float | Rational) -> Fraction:
    if isinstance(s, Rational):
        frac = Fraction(s)
    else:
        value = float(s)
        frac = Fraction(value).limit_denominator(MAX_DENOMINATOR)
        if abs(float(frac) - value) > 1e-12 * max(1.0, abs(value)):
            raise IrrationalScale(
                f"dilation factor {value!r} is not a rational with "
                f"denominator <= {MAX_DENOMINATOR}"
            )
    if frac.denominator > MAX_DENOMINATOR:
        raise IrrationalScale(
            f"dilation denominator {frac.denominator} exceeds {MAX_DENOMINATOR}"
        )
    if frac <= 0:
        raise ValueError(f"dilation factor must be positive, got {s!r}")
    return frac


def _alias_tail_fraction(spectrum: NDArray[np.complex128], p: int, q: int) -> float:
    """Spectral mass (relative) that a contraction by p/q would fold."""
    total = float(np.sum(np.abs(spectrum) ** 2))
    if total == 0.0:
        return 0.0
    n = spectrum.shape[0]
    half = n // 2
    # Bins with |l - N/2| >= (N/2) * q / p survive only as folded copies.
    cut = int(np.ceil(half * q / p))
    keep = np.abs(np.arange(n) - half) < cut
    mask = np.ones(spectrum.shape, dtype=bool)
    for axis in range(spectrum.ndim):
        shape = [1] * spectrum.ndim
        shape[axis] = n
        mask &= keep.reshape(shape)
    kept = float(np.sum(np.abs(spectrum[mask]) ** 2))
    return (total - kept) / total


def theta_dilate(f: SampledSignal, s: float | Rational, theta: ThetaParam) -> SampledSignal:
    """Angle-covariant dilation by a rational factor ``s = p/q > 0``.

    The inner classical contraction is carried out by exact trigonometric
    resampling: the chirped signal's spectrum is zero-padded by ``q`` and the
    refined samples are read with stride ``p``, so rational factors are
    resolved without interpolation error.  Factors above 1 narrow the usable
    band to ``Nyquist/s``; if the input holds measurable spectral mass beyond
    that edge an :class:`AliasRiskWarning` is emitted (the folded copies then
    corrupt the output).
    """
    frac = _as_fraction(s)
    p, q = frac.numerator, frac.denominator
    grid = f.grid
    if p == q:
        return f.with_values(f.values.copy())

    chirped = chirp_modulate(f, theta, +1).as_nd()
    spectrum = centered_dft(chirped, grid.spacing)
    if frac > 1 and _alias_tail_fraction(spectrum, p, q) > ALIAS_GUARD:
        warnings.warn(
            f"dilation by {frac} folds spectral mass beyond Nyquist/{frac}",
            AliasRiskWarning,
            stacklevel=2,
        )

    n = grid.samples_per_dim
    fine_n = n * q
    if fine_n**grid.n_dims > MAX_FINE_SIZE:
        raise GridTooLarge(
            f"dilation by {frac} needs a refined grid of {fine_n} per dim"
        )
    if q > 1:
        pad = (fine_n - n) // 2
        embedded = np.zeros((fine_n,) * grid.n_dims, dtype=np.complex128)
        block = tuple(slice(pad, pad + n) for _ in range(grid.n_dims))
        embedded[block] = spectrum
        fine = centered_idft(embedded, grid.spacing / q)
    else:
        fine = centered_idft(spectrum, grid.spacing)

    idx = (fine_n // 2 + p * (np.arange(n) - n // 2)) % fine_n
    out = fine
    for axis in range(grid.n_dims):
        out = np.take(out, idx, axis=axis)
    return chirp_modulate(f.with_values(out.ravel()), theta, -1)
