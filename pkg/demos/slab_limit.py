"""Wide waveguides approach the infinite slab.

The slab is handled by a quadrature on a complex contour in the direction
cosine. Waveguides of growing width are compared with it at L/l = 0.2 through
the L1 distance of the densities. Integer widths have a mode exactly at cutoff,
which is dropped.

Run: python3 demos/slab_limit.py   (a few minutes)
"""
import numpy as np

from rftsolve.dirset import slab_quadrature, waveguide_modes
from rftsolve.ray import Grid
from rftsolve.spectrum import scan, t_grid

T = t_grid(121)
slab = scan(T, 0.2, slab_quadrature(2, 64, 0.5), Grid(128))
print(f"slab: integral of rho = {slab.normalization():.4f}, rho(0.01) = {np.interp(0.01, T, slab.rho):.4f}")
for W in (25.5, 51.0, 102.0):
    wg = scan(T, 0.2, waveguide_modes(2, W, drop_cutoff=True), Grid(128))
    d = np.trapezoid(np.abs(wg.rho - slab.rho), T)
    print(f"W/lambda = {W:6.1f}: L1 distance to the slab {d:.4f}")
