import math

import numpy as np
import pytest

from rftsolve.dirset import slab_quadrature, waveguide_modes
from rftsolve.errors import DomainError
from rftsolve.ray import Grid
from rftsolve.sc import SolveSettings, Transport, solve
from rftsolve.spectrum import gen_fun, rho_at, scan, solve_point, t_grid


def test_rho_at_inversion():
    assert rho_at(0.25, 1j * math.pi * 0.25**2) == pytest.approx(1.0)
    assert rho_at(0.4, 3.7 + 0j) == 0.0


@pytest.mark.parametrize("T", [0.0, 1.0, -0.1, 1.5])
def test_rho_at_domain(T):
    with pytest.raises(DomainError):
        rho_at(T, 1j)


def test_t_grids():
    g = t_grid()
    assert g.size == 199 and g[0] == pytest.approx(1e-8) and g[-1] == pytest.approx(1 - 1e-6)
    assert np.all(np.diff(g) > 0)
    p = t_grid(kind="power")
    u = np.linspace(0.001, 0.999, 199)
    np.testing.assert_allclose(p, 1 - (1 - u) ** 3)
    with pytest.raises(ValueError):
        t_grid(kind="uniform")


def test_scan_rejects_bad_grid():
    s = waveguide_modes(2, 1.5)
    with pytest.raises(DomainError):
        scan([0.2, 1.0], 1.0, s, Grid(8))
    with pytest.raises(ValueError):
        scan([0.5, 0.2], 1.0, s, Grid(8))


@pytest.mark.parametrize("convention", ["sqrt", "a_only"])
def test_ballistic_generating_function(convention):
    s = waveguide_modes(2, 5.5)
    gamma = 1 / 0.6 + 1e-6j
    qf = solve(Transport(0.0, gamma, convention=convention), s, Grid(16))
    assert gen_fun(qf, gamma, convention) == pytest.approx(1 / (1 - gamma), rel=1e-12)


def test_below_unity_gamma_gives_real_F():
    s = waveguide_modes(2, 5.5)
    gamma = 0.5
    qf = solve(Transport(1.0, gamma), s, Grid(128))
    F = gen_fun(qf, gamma)
    assert abs(F.imag) < 1e-12 * abs(F)


def test_conventions_agree():
    s = waveguide_modes(2, 25.5)
    a = solve_point(0.7, 0.5, s, Grid(256), convention="sqrt")
    b = solve_point(0.7, 0.5, s, Grid(256), convention="a_only")
    assert abs(a[1] - b[1]) <= 1e-4


def test_ballistic_scan_has_no_weight_away_from_unity():
    s = waveguide_modes(2, 5.5)
    tab = scan([0.5], 0.0, s, Grid(16))
    assert tab.rho[0] == pytest.approx(0, abs=1e-5)
    assert not tab.failed


def test_eta_halving_changes_smooth_region_little():
    s = waveguide_modes(2, 25.5)
    out = []
    for eta in (1e-6, 5e-7):
        g, F, *_ = solve_point(0.5, 1.0, s, Grid(256), SolveSettings(eta=eta))
        out.append(rho_at(0.5, F))
    assert abs(out[1] / out[0] - 1) < 0.01


def test_support_edge_moves_down_with_thickness():
    s = waveguide_modes(2, 25.5)
    thin = scan([0.05], 0.5, s, Grid(256)).rho[0]
    thick = scan([0.05], 5.0, s, Grid(1024)).rho[0]
    # below the quasiballistic cutoff only the eta floor remains
    assert thin < 1e-5
    assert thick > 0.5


def test_failed_points_are_recorded_not_dropped():
    s = waveguide_modes(2, 25.5)
    tab = scan([0.3, 0.5], 5.0, s, Grid(64), SolveSettings(max_iter=3))
    assert tab.T.size == 2 and len(tab.failed) == 2
    assert all("NoConvergence" in e for _, e in tab.failed)
    assert not np.any(tab.ok)


def test_threads_do_not_change_results():
    s = waveguide_modes(2, 5.5)
    T = [0.2, 0.5, 0.8]
    a = scan(T, 1.0, s, Grid(64))
    b = scan(T, 1.0, s, Grid(64), threads=3)
    assert np.array_equal(a.F, b.F)


def test_slab_thin_scan_normalized():
    s = slab_quadrature(2, 64, 0.5)
    tab = scan(t_grid(), 0.2, s, Grid(128))
    assert not tab.failed
    assert abs(tab.normalization() - 1) <= 0.02
    assert np.all(tab.rho_raw >= -1e-6)
