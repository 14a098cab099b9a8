"""Frame bounds and energy-accounting routes for atom banks."""
import math

import numpy as np
import pytest

from frftkit import (
    AtomBank,
    FrameBounds,
    Grid,
    SampledSignal,
    ThetaParam,
    check_admissibility,
    frame_bounds,
    frft,
    frft_output_grid,
    inner_product,
    inverse_frft,
    l2_norm,
    theta_convolve,
    theta_translate,
)
from helpers import banded_signal, gauss_profile, reflected_atom, tight_bank


def test_tight_bank_has_unit_bounds_and_parseval_sum():
    grid = Grid(1, 128, 8.0)
    th = ThetaParam(math.pi / 3)
    bank = tight_bank(grid, th, 3, seed=7)
    bounds = frame_bounds(bank)
    assert abs(bounds.lower - 1.0) < 1e-12
    assert abs(bounds.upper - 1.0) < 1e-12
    f = banded_signal(grid, th, 0.45 * frft_output_grid(grid, th).extent, 8)
    total = sum(
        th.abs_sin * l2_norm(theta_convolve(g, f, th)) ** 2 for g in bank.atoms
    )
    assert abs(total - l2_norm(f) ** 2) < 1e-9


def test_three_energy_routes_agree():
    """Translated-atom correlations, convolutions, and the spectral form
    measure the same analysis energy."""
    grid = Grid(1, 128, 8.0)
    th = ThetaParam(math.pi / 3)
    og = frft_output_grid(grid, th)
    atoms = tuple(inverse_frft(gauss_profile(og, c, 0.6), th) for c in (-0.7, 0.0, 0.7))
    f = banded_signal(grid, th, 0.5, 17)

    literal = 0.0
    for g in atoms:
        g_check = reflected_atom(g, th)
        for j in range(grid.size):
            s = grid.axis[j]
            literal += grid.spacing * abs(
                inner_product(f, theta_translate(g_check, s, th))
            ) ** 2

    conv = sum(th.abs_sin * l2_norm(theta_convolve(g, f, th)) ** 2 for g in atoms)

    spectral = 0.0
    ff = frft(f, th)
    for g in atoms:
        fg = frft(g, th)
        spectral += th.abs_sin * float(
            np.sum(np.abs(fg.values) ** 2 * np.abs(ff.values) ** 2) * og.spacing
        )

    assert conv == pytest.approx(literal, rel=1e-10)
    assert conv == pytest.approx(spectral, rel=1e-10)


def test_one_hot_spectrum_probe():
    grid = Grid(1, 64, 4.0)
    th = ThetaParam(2 * math.pi / 5)
    og = frft_output_grid(grid, th)
    spec = np.zeros(og.size, dtype=np.complex128)
    spec[10] = 1.0
    atom = inverse_frft(SampledSignal(og, spec), th)
    bounds = frame_bounds(AtomBank((atom,), th))
    assert bounds.lower == pytest.approx(0.0, abs=1e-12)
    assert bounds.upper == pytest.approx(th.abs_sin, rel=1e-10)
    assert bounds.spectrum[10] == pytest.approx(th.abs_sin, rel=1e-10)
    assert np.max(np.abs(np.delete(bounds.spectrum, 10))) < 1e-12


def test_frame_bounds_scale_quadratically_with_atoms():
    grid = Grid(1, 64, 4.0)
    th = ThetaParam(math.pi / 3)
    og = frft_output_grid(grid, th)
    atom = inverse_frft(gauss_profile(og, 0.0, 0.5), th)
    one = frame_bounds(AtomBank((atom,), th))
    double = frame_bounds(AtomBank((atom.with_values(2.0 * atom.values),), th))
    assert double.upper == pytest.approx(4.0 * one.upper, rel=1e-12)
    pair = frame_bounds(AtomBank((atom, atom), th))
    assert pair.upper == pytest.approx(2.0 * one.upper, rel=1e-12)


def test_check_admissibility_gates():
    assert check_admissibility([(0.9, 1.0, 1.0), (1.0, 1.0, 1.0)])
    assert not check_admissibility([(1.2, 1.0, 1.0)])
    # B below one but an expansive nonlinearity pushes B L^2 R^2 over
    assert not check_admissibility([(0.9, 1.2, 1.0)])
    assert check_admissibility([(0.5, 1.2, 1.0)])
    # the slack tolerates boundary-exact layers
    assert check_admissibility([(1.0 + 1e-10, 1.0, 1.0)])
    # FrameBounds objects are accepted directly
    grid = Grid(1, 64, 4.0)
    th = ThetaParam(math.pi / 3)
    bounds = frame_bounds(tight_bank(grid, th, 2, seed=3))
    assert check_admissibility([(bounds, 1.0, 1.0)])


def test_atom_bank_validation():
    th = ThetaParam(math.pi / 3)
    with pytest.raises(ValueError):
        AtomBank((), th)
    g1 = Grid(1, 64, 4.0)
    g2 = Grid(1, 128, 4.0)
    a = SampledSignal(g1, np.ones(g1.size, dtype=np.complex128))
    b = SampledSignal(g2, np.ones(g2.size, dtype=np.complex128))
    with pytest.raises(ValueError):
        AtomBank((a, b), th)


def test_frame_bounds_validation():
    grid = Grid(1, 64, 4.0)
    with pytest.raises(ValueError):
        FrameBounds(-0.1, 1.0, np.ones(grid.size), grid)
    with pytest.raises(ValueError):
        FrameBounds(2.0, 1.0, np.ones(grid.size), grid)
