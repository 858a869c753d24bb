import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitnls.oracles import InitialDataSpec, make_initial_data, rough_coefficients
from splitnls.spectral import (
    Field,
    Grid,
    SpaceError,
    forward_dft,
    gradient,
    inverse_dft,
    lp_norm,
    sobolev_norm,
    spectral_l2_norm,
    w1r_norm,
)


def random_field(grid, seed):
    rng = np.random.default_rng(seed)
    return Field.physical(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(4)
    with pytest.raises(ValueError):
        Grid(1, points=7)
    with pytest.raises(ValueError):
        Grid(1, points=6)
    g = Grid(2, (2.0, 4.0), (8, 16))
    assert g.shape == (8, 16)
    assert g.cell_volume == pytest.approx(2 / 8 * 4 / 16)
    assert g.volume == pytest.approx(8.0)


def test_nyquist_mode_is_negative():
    g = Grid(1, 2 * np.pi, 8)
    assert g.mode_indices[0][4] == -4
    assert g.wavenumbers[0][4] == -4.0


def test_field_length_checked():
    with pytest.raises(ValueError):
        Field.physical(Grid(1, points=8), np.zeros(9))


def test_mixing_spaces_rejected():
    g = Grid(1, points=8)
    with pytest.raises(SpaceError):
        Field.zeros(g) + Field.zeros(g, "spectral")


def test_constant_transforms_to_dc_only():
    g = Grid(2, 3.0, (8, 16))
    fh = forward_dft(Field.physical(g, np.full(g.shape, 2.5)))
    assert fh.space == "spectral"
    # unitary DFT: DC coefficient is c * sqrt(number of nodes)
    assert fh.values[0, 0] == pytest.approx(2.5 * math.sqrt(g.size), rel=1e-14)
    rest = fh.values.copy()
    rest[0, 0] = 0
    assert np.abs(rest).max() < 1e-13


def test_dc_golden_inverse():
    g = Grid(1, 8.0, 16)
    coef = np.zeros(16, complex)
    coef[0] = 3.0 * math.sqrt(16)
    f = inverse_dft(Field.spectral(g, coef))
    np.testing.assert_allclose(f.values, 3.0, rtol=1e-15)


def test_pure_tone():
    g = Grid(1, 2 * np.pi, 32)
    fh = forward_dft(Field.physical(g, np.exp(1j * g.axes[0])))
    big = np.flatnonzero(np.abs(fh.values) > 1e-10)
    assert big.tolist() == [1]


def test_zero_round_trip():
    g = Grid(1, points=16)
    assert not inverse_dft(Field.zeros(g, "spectral")).values.any()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_round_trip(d):
    g = Grid(d, 5.0, 16)
    f = random_field(g, d)
    back = inverse_dft(forward_dft(f))
    assert np.abs(back.values - f.values).max() <= 1e-12 * np.abs(f.values).max()
    fh = forward_dft(f)
    again = forward_dft(inverse_dft(fh))
    assert np.abs(again.values - fh.values).max() <= 1e-12 * np.abs(fh.values).max()


def test_transform_checks_space():
    g = Grid(1, points=8)
    with pytest.raises(SpaceError):
        forward_dft(Field.zeros(g, "spectral"))
    with pytest.raises(SpaceError):
        inverse_dft(Field.zeros(g))


def test_gradient_examples():
    g = Grid(1, 2 * np.pi, 64)
    x = g.axes[0]
    (de,) = gradient(Field.physical(g, np.exp(1j * x)))
    assert np.abs(de.values - 1j * np.exp(1j * x)).max() < 1e-12
    (dc,) = gradient(Field.physical(g, np.full(64, 4.0)))
    assert np.abs(dc.values).max() < 1e-12
    (ds,) = gradient(Field.physical(g, np.sin(2 * x)))
    assert np.abs(ds.values - 2 * np.cos(2 * x)).max() <= 1e-11


def test_gradient_2d_components():
    g = Grid(2, 2 * np.pi, 32)
    x, y = g.coordinates
    gx, gy = gradient(Field.physical(g, np.sin(x) * np.cos(3 * y)))
    assert np.abs(gx.values - np.cos(x) * np.cos(3 * y)).max() < 1e-11
    assert np.abs(gy.values + 3 * np.sin(x) * np.sin(3 * y)).max() < 1e-11


def test_lp_norm_constants():
    g = Grid(1, 8.0, 16)
    one = Field.physical(g, np.ones(16))
    assert lp_norm(one, 2) == pytest.approx(math.sqrt(8), rel=1e-14)
    assert lp_norm(one, 4) == pytest.approx(8**0.25, rel=1e-14)
    assert lp_norm(one, 1) == pytest.approx(8.0)
    assert lp_norm(one, math.inf) == 1.0


def test_lp_norm_soliton():
    g = Grid(1, 60.0, 1024)
    f = Field.physical(g, math.sqrt(2) / np.cosh(g.axes[0]))
    assert abs(lp_norm(f, 2) - 2.0) < 1e-6


def test_lp_norm_errors():
    g = Grid(1, points=8)
    with pytest.raises(ValueError):
        lp_norm(Field.zeros(g), 0.5)
    with pytest.raises(SpaceError):
        lp_norm(Field.zeros(g, "spectral"), 2)


def test_lp_norm_large_r_does_not_overflow():
    g = Grid(1, 8.0, 16)
    f = Field.physical(g, np.full(16, 1e30))
    assert lp_norm(f, 40) == pytest.approx(1e30 * 8 ** (1 / 40), rel=1e-12)


def test_sobolev_examples():
    g = Grid(1, 8.0, 16)
    c = Field.physical(g, np.full(16, -1.5))
    for s in (0, 0.5, 1, 3):
        assert sobolev_norm(c, s) == pytest.approx(1.5 * math.sqrt(8), rel=1e-13)
    g = Grid(1, 2 * np.pi, 32)
    e = Field.physical(g, np.exp(1j * g.axes[0]))
    assert sobolev_norm(e, 1) == pytest.approx(math.sqrt(2) * lp_norm(e, 2), rel=1e-13)
    with pytest.raises(ValueError):
        sobolev_norm(e, -1)


def _partial_sum_norm(points, alpha, s, L=60.0):
    # direct evaluation of the coefficient law, independent of the library path
    m = np.fft.fftfreq(points, 1.0 / points)
    k = 2 * np.pi * m / L
    w = (1 + np.abs(k)) ** (-2 * alpha)
    return math.sqrt(np.sum((1 + k * k) ** s * w) / np.sum((1 + k * k) * w))


def test_rough_data_sobolev_under_refinement():
    spec = InitialDataSpec("rough", decay_exponent=1.55, seed=42)
    h1, h16 = [], []
    for M in (1024, 2048, 4096, 8192):
        f = make_initial_data(spec, Grid(1, 60.0, M))
        h1.append(sobolev_norm(f, 1.0))
        h16.append(sobolev_norm(f, 1.6))
        assert h16[-1] == pytest.approx(_partial_sum_norm(M, 1.55, 1.6), rel=1e-10)
    # data normalized to unit H^1 norm: stable by construction
    assert max(abs(a - b) / b for a, b in zip(h1, h1[1:])) <= 0.02
    growth = [b / a for a, b in zip(h16, h16[1:])]
    assert all(g > 1.3 for g in growth)


def test_rough_coefficients_follow_law():
    g = Grid(1, 60.0, 256)
    c = rough_coefficients(g, 1.55, 7)
    np.testing.assert_allclose(np.abs(c), (1 + np.abs(g.wavenumbers[0])) ** -1.55, rtol=1e-14)


def test_w1r_examples():
    g = Grid(1, 8.0, 16)
    c = Field.physical(g, np.full(16, 2.0))
    for r in (2, 3.5, math.inf):
        assert w1r_norm(c, r) == lp_norm(c, r)
    g = Grid(1, 2 * np.pi, 32)
    e = Field.physical(g, np.exp(1j * g.axes[0]))
    assert w1r_norm(e, 2) == pytest.approx(2 * lp_norm(e, 2), rel=1e-13)
    g = Grid(1, 60.0, 1024)
    s = Field.physical(g, math.sqrt(2) / np.cosh(g.axes[0]))
    assert abs(w1r_norm(s, 2) - (2 + math.sqrt(4 / 3))) < 1e-4


def test_parseval_100_fields():
    g = Grid(2, (3.0, 7.0), (16, 32))
    for seed in range(100):
        f = random_field(g, seed)
        a = lp_norm(f, 2)
        assert abs(a - spectral_l2_norm(forward_dft(f))) <= 1e-12 * a
        assert abs(sobolev_norm(f, 0) - a) <= 1e-12 * a


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), re=finite, im=finite, r=st.sampled_from([1, 2, 3, 4.5, math.inf]))
def test_homogeneity(seed, re, im, r):
    g = Grid(1, 6.0, 32)
    f = random_field(g, seed)
    a = complex(re, im)
    lhs = lp_norm(f * a, r)
    assert lhs == pytest.approx(abs(a) * lp_norm(f, r), rel=1e-13, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(s1=st.integers(0, 2**32 - 1), s2=st.integers(0, 2**32 - 1), r=st.sampled_from([1, 2, 3, 6, math.inf]))
def test_triangle_inequality(s1, s2, r):
    g = Grid(1, 6.0, 32)
    f, h = random_field(g, s1), random_field(g, s2)
    assert lp_norm(f + h, r) <= lp_norm(f, r) + lp_norm(h, r) + 1e-12
