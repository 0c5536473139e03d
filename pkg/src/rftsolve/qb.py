"""Closed quasiballistic solution for a field that is uniform in the bulk.

With a uniform field the transport problem reduces to one scalar unknown per
direction, ``f(mu)``, coupled only through its mean ``<f>_0``.
"""
from dataclasses import dataclass

import numpy as np

from . import mat2
from .errors import NoConvergence, PoleHit


@dataclass
class QbState:
    f: np.ndarray
    mean_f: complex
    sigma: complex
    gamma: complex
    L_over_ell: float
    iterations: int = 0


def _tanhc(beta, sigma):
    """``tanh(beta sigma) / sigma``, even in sigma."""
    if abs(sigma) < 1e-8:
        return beta.astype(complex)
    return np.tanh(beta * sigma) / sigma


def qb_sigma(mean_f, gamma):
    gamma = complex(gamma)
    return np.sqrt(1 + gamma / (1 - gamma) * complex(mean_f) ** 2)


def qb_update(mean_f, dset, L_over_ell, gamma):
    """Right-hand side of the closed equation for every direction."""
    sigma = qb_sigma(mean_f, gamma)
    beta = L_over_ell / (2 * dset.mu)
    t = _tanhc(beta, sigma)
    den = 1 + (1 + gamma / (1 - gamma) * mean_f) * t
    if np.any(np.abs(den) < 1e-14):
        raise PoleHit("denominator of the closed equation vanishes")
    return (1 - (1 - mean_f) * t) / den, sigma


SECANT_AFTER = 200


def qb_solve(dset, L_over_ell, gamma, damping=0.5, tol=1e-12, max_iter=100000, mean_f0=1.0):
    """Damped fixed-point iteration on ``<f>_0`` starting from the ballistic value 1.

    Where the map is nearly marginal (slope close to 1, small T) the damped
    steps creep; after ``SECANT_AFTER`` iterations a secant step on
    ``<f(m)>_0 - m`` is tried each iteration and kept only when it lowers the
    mismatch. Stops once both the step in ``<f>_0`` and the closed-equation
    residual of the returned ``f`` are below ``tol``.
    """
    gamma = complex(gamma)
    if gamma == 1:
        raise ValueError("gamma = 1 is singular")
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    w0 = dset.weights(0)

    def mismatch(m):
        f, _ = qb_update(m, dset, L_over_ell, gamma)
        return complex(np.dot(w0, f) / w0.sum()) - m

    m = complex(mean_f0)
    prev = None
    for it in range(1, max_iter + 1):
        step = mismatch(m)
        new = m + damping * step
        if it > SECANT_AFTER and prev is not None and step != prev[1]:
            trial = m - step * (m - prev[0]) / (step - prev[1])
            if np.isfinite(trial) and abs(mismatch(trial)) < abs(step):
                new = trial
        prev = (m, step)
        m = new
        if abs(step) < tol:
            f, _ = qb_update(m, dset, L_over_ell, gamma)
            mean_f = complex(np.dot(w0, f) / w0.sum())
            state = QbState(f, mean_f, complex(qb_sigma(mean_f, gamma)), gamma, L_over_ell, it)
            if qb_residual(state, dset) < tol:
                return state
    raise NoConvergence(f"closed equation did not converge in {max_iter} iterations")


def qb_gen_fun(state, dset):
    w1 = dset.weights(1)
    return complex(np.dot(w1, state.f) / w1.sum() / (1 - state.gamma))


def qb_residual(state, dset):
    """Max deviation of ``f`` from the right-hand side of the closed equation."""
    f, _ = qb_update(state.mean_f, dset, state.L_over_ell, state.gamma)
    return float(np.max(np.abs(f - state.f)))


def qb_pair_residual(state, dset):
    """Residual of the two-unknown system with ``g(mu) = f(-mu)`` substituted.

    The ``g`` equation is evaluated at ``-mu`` (``beta -> -beta``) with
    ``<g>_0 = <f>_0``; the ``f`` equation uses the same mean for ``g``.
    """
    gamma, m = state.gamma, state.mean_f
    sigma = qb_sigma(m, gamma)
    beta = state.L_over_ell / (2 * dset.mu)
    t = _tanhc(-beta, sigma)
    g_at_minus = (1 + (1 - m) * t) / (1 - (1 + gamma / (1 - gamma) * m) * t)
    f_rhs, _ = qb_update(m, dset, state.L_over_ell, gamma)
    return float(max(np.max(np.abs(g_at_minus - state.f)), np.max(np.abs(f_rhs - state.f))))


def qb_boundary_values(state, gamma_a, gamma_b):
    """``g21`` of the + hemisphere and ``g12`` of the - hemisphere at x_a^-."""
    g21 = -2j * gamma_b * state.f / (1 - gamma_a * gamma_b)
    g12 = 2j * gamma_a * state.f
    return g21, g12


def qb_field(state, gamma_a, gamma_b):
    """Uniform bulk field ``Q0`` of the ansatz.

    Built from the outside value ``Qa`` at x_a^- by the similarity jump of
    contact A.
    """
    gamma = gamma_a * gamma_b
    Qa = np.array([[1, 1j * gamma_a * state.mean_f],
                   [-1j * gamma_b * state.mean_f / (1 - gamma), -1]], dtype=complex)
    E = mat2.IDENTITY + 1j * gamma_a * mat2.LAMBDA_PLUS
    Einv = mat2.IDENTITY - 1j * gamma_a * mat2.LAMBDA_PLUS
    return E @ Qa @ Einv
