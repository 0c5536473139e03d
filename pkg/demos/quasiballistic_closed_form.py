"""Thin waveguide: closed quasiballistic solution against the full solver.

For L/l = 0.5 the field is close to uniform inside the sample, and the closed
equation for f(mu) gives the density without any spatial grid. The two routes
agree best close to T = 1; further down the uniform-field assumption shows.

Run: python3 demos/quasiballistic_closed_form.py
"""
import numpy as np

from rftsolve.dirset import waveguide_modes
from rftsolve.qb import qb_gen_fun, qb_solve
from rftsolve.ray import Grid
from rftsolve.spectrum import rho_at, solve_point

modes = waveguide_modes(2, 25.5)
print(f"{'T':>6} {'full':>9} {'closed':>9} {'rel':>7}")
for T in (0.6, 0.75, 0.85, 0.9, 0.95, 0.99):
    _, F, *_ = solve_point(T, 0.5, modes, Grid(256))
    state = qb_solve(modes, 0.5, 1 / T + 1e-6j)
    full, closed = rho_at(T, F), rho_at(T, qb_gen_fun(state, modes))
    print(f"{T:6.2f} {full:9.4f} {closed:9.4f} {closed / full - 1:+7.3f}")

# the uniform field itself: normalization is far from Q^2 = 1
from rftsolve.qb import qb_field

state = qb_solve(modes, 0.5, 1 / 0.9 + 1e-6j)
Q0 = qb_field(state, state.gamma, 1.0)
print("Q0 =\n", np.round(Q0, 4))
print("|Q0^2 - 1| =", np.abs(Q0 @ Q0 - np.eye(2)).max())
