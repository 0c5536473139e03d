import functools

from rftsolve.dirset import slab_quadrature, waveguide_modes
from rftsolve.ray import Grid
from rftsolve.spectrum import scan, t_grid

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def waveguide_scan(W, L_over_ell, N_x, drop_cutoff=False):
    """Default-grid scan of the d = 2 waveguide, shared by the acceptance tests."""
    return scan(t_grid(), L_over_ell, waveguide_modes(2, W, drop_cutoff=drop_cutoff), Grid(N_x))


@functools.lru_cache(maxsize=None)
def slab_scan(L_over_ell, N_x, N_mu=64, a=0.5):
    return scan(t_grid(), L_over_ell, slab_quadrature(2, N_mu, a), Grid(N_x))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
