import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_jacobi

from rftsolve import mat2
from rftsolve.dirset import (DirectionSet, WAVEGUIDE, directional_mean, jacobi_rule,
                             moment_closed_form, slab_quadrature, unit_ball, waveguide_modes)
from rftsolve.errors import EmptySet, GrazingMode, InvalidDim

L3 = mat2.LAMBDA3


def test_unit_ball_values():
    assert unit_ball(2) == pytest.approx(math.pi)
    assert unit_ball(3, "surface") == pytest.approx(4 * math.pi)
    assert unit_ball(1) == pytest.approx(2)
    assert unit_ball(-1) == pytest.approx(1 / math.pi)
    assert unit_ball(1, "surface") == pytest.approx(2)


@pytest.mark.parametrize("d,kappa,expected", [(2, 0, math.pi / 2), (2, 1, 1.0), (3, 0, 1.0), (3, 1, 0.5)])
def test_moment_closed_form(d, kappa, expected):
    assert moment_closed_form(d, kappa) == pytest.approx(expected, rel=1e-14)


def test_waveguide_25_5():
    s = waveguide_modes(2, 25.5)
    assert s.n_modes == 51
    assert len(s) == 26
    i = np.argmin(s.mu.real)
    assert s.mu[i].real == pytest.approx(math.sqrt(1 - (25 / 25.5) ** 2), abs=1e-15)
    assert s.mu[i].real == pytest.approx(0.197055, abs=2e-6)
    assert s.mult[i] == 2
    assert np.all(s.c == 1)


def test_waveguide_1_5():
    s = waveguide_modes(2, 1.5)
    np.testing.assert_allclose(s.mu.real, [1, math.sqrt(5) / 3])
    assert list(s.mult) == [1, 2]


def test_waveguide_cutoff_mode_is_grazing():
    with pytest.raises(GrazingMode):
        waveguide_modes(2, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.6, 80).filter(lambda w: abs(w - round(w)) > 1e-6))
def test_waveguide_mode_count_closed_form(w):
    assert waveguide_modes(2, w).n_modes == 2 * math.floor(w) + 1


def test_waveguide_3d_groups_by_index_norm():
    s = waveguide_modes(3, 2.5)
    # |n|^2 in {0, 1, 2, 4, 5}: multiplicities 1, 4, 4, 4, 8
    assert list(s.mult) == [1, 4, 4, 4, 8]
    assert s.n_modes == 21


def test_one_dimension_single_normal_mode():
    s = waveguide_modes(1, 3.0)
    assert len(s) == 1 and s.mu[0] == 1


@pytest.mark.parametrize("n,alpha", [(5, -0.5), (32, -0.5), (64, -0.5), (64, 0.0), (17, 0.5)])
def test_golub_welsch_matches_scipy(n, alpha):
    x, w = jacobi_rule(n, alpha, 0.0)
    xr, wr = roots_jacobi(n, alpha, 0.0)
    np.testing.assert_allclose(x, xr, atol=1e-13)
    np.testing.assert_allclose(w, wr, rtol=1e-11)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("kappa", [0, 1])
@pytest.mark.parametrize("a", [0.0, 0.3, 0.5, 1.0])
def test_quadrature_normalization(d, kappa, a):
    s = slab_quadrature(d, 64, a)
    assert abs(s.moment_norm(kappa) - moment_closed_form(d, kappa)) < 1e-9


def test_quadrature_examples():
    assert abs(slab_quadrature(2, 64, 0).moment_norm(0) - math.pi / 2) < 1e-10
    assert abs(slab_quadrature(3, 64, 0.5).moment_norm(0) - 1) < 1e-10
    assert np.min((slab_quadrature(2, 32, 0.5).mu ** 2).imag) > 0


def test_quadrature_integrates_analytic_moments():
    # contour deformation leaves integrals of analytic functions unchanged
    s = slab_quadrature(3, 40, 0.7)
    w = s.weights(1)
    assert abs(np.sum(w * s.mu ** 2) - 0.25) < 1e-12


def test_slab_directions_lie_in_right_half_plane():
    s = slab_quadrature(2, 64, 1.0)
    assert np.all(s.mu.real > 0) and np.all(s.mu.real <= 1)


def test_slab_invalid_dim():
    with pytest.raises(InvalidDim):
        slab_quadrature(1, 10, 0.5)


def test_directional_mean_examples():
    s = waveguide_modes(2, 25.5)
    vals = np.broadcast_to(L3, (len(s), 2, 2))
    for kappa in (0, 1):
        np.testing.assert_allclose(directional_mean(vals, s, kappa), L3)
    two = DirectionSet(WAVEGUIDE, 2, np.array([1.0, 0.5]), np.ones(2), np.ones(2, int))
    np.testing.assert_allclose(directional_mean(np.stack([L3, -L3]), two, 0), -L3 / 3)
    one = DirectionSet(WAVEGUIDE, 2, np.array([0.7]), np.ones(1), np.ones(1, int))
    np.testing.assert_allclose(directional_mean(np.stack([L3]), one, 1), L3)


def test_directional_mean_hemisphere_axis():
    two = DirectionSet(WAVEGUIDE, 2, np.array([1.0, 0.5]), np.ones(2), np.ones(2, int))
    vals = np.stack([np.stack([L3, L3]), np.stack([-L3, -L3])])
    np.testing.assert_allclose(directional_mean(vals, two, 0, "-"), -L3)


def test_empty_set():
    with pytest.raises(EmptySet):
        DirectionSet(WAVEGUIDE, 2, np.array([]), np.array([]), np.array([], int))


def test_set_is_read_only():
    s = waveguide_modes(2, 3.5)
    with pytest.raises(ValueError):
        s.mu[0] = 0.3


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1]))
def test_mean_permutation_and_split_invariance(seed, kappa):
    rng = np.random.default_rng(seed)
    n = 5
    mu = rng.uniform(0.1, 1, n)
    mult = rng.integers(1, 3, n)
    vals = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    s = DirectionSet(WAVEGUIDE, 2, mu, np.ones(n), mult)
    ref = directional_mean(vals, s, kappa)
    p = rng.permutation(n)
    sp = DirectionSet(WAVEGUIDE, 2, mu[p], np.ones(n), mult[p])
    np.testing.assert_allclose(directional_mean(vals[p], sp, kappa), ref, rtol=1e-12, atol=1e-14)
    rep = np.repeat(np.arange(n), mult)
    ss = DirectionSet(WAVEGUIDE, 2, mu[rep], np.ones(rep.size), np.ones(rep.size, int))
    np.testing.assert_allclose(directional_mean(vals[rep], ss, kappa), ref, rtol=1e-12, atol=1e-14)


def test_cutoff_mode_dropped_on_request():
    with pytest.raises(GrazingMode):
        waveguide_modes(2, 51.0)
    s = waveguide_modes(2, 51.0, drop_cutoff=True)
    assert s.mult.sum() == 101 and s.mu.real.min() > 0
    ref = waveguide_modes(2, 50.5)
    assert ref.mult.sum() == 101
