"""Diffusive waveguide: the transmission density approaches the bimodal law.

A 2D waveguide of width 25.5 wavelengths and thickness five mean free paths
is scanned on a coarse grid. T̄ is taken from the table itself and the
computed density is printed next to T̄ / (2 T sqrt(1 - T)).

Run: python3 demos/bimodal_waveguide.py   (about two minutes on one core)
"""
import numpy as np

from rftsolve.dirset import waveguide_modes
from rftsolve.ray import Grid
from rftsolve.spectrum import scan, t_grid

modes = waveguide_modes(2, 25.5)
print(f"{modes.mult.sum()} modes, {len(modes)} distinct direction cosines")

table = scan(t_grid(61), 5.0, modes, Grid(512))
Tbar = table.mean_T()
print(f"integral of rho = {table.normalization():.4f}, mean T = {Tbar:.4f}")
print(f"{'T':>8} {'rho':>10} {'bimodal':>10} {'ratio':>7}")
for T, rho in zip(table.T, table.rho):
    if 0.1 <= T <= 0.9:
        law = Tbar / (2 * T * np.sqrt(1 - T))
        print(f"{T:8.4f} {rho:10.4f} {law:10.4f} {rho / law:7.3f}")
