"""Generating function, transmission density and T-grid scans."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SolverError
from .sc import SolveSettings, Transport, solve

CSV_HEADER = ("T", "gamma_re", "gamma_im", "F_re", "F_im", "rho", "iters", "residual")


def gen_fun(qf, gamma, convention="sqrt"):
    """Generating function from the converged currents at the contacts.

    ``J21`` is continuous across contact A and ``J12`` across contact B, so
    the outside samples are used.
    """
    if convention == "sqrt":
        dg = 1 / (2 * np.sqrt(complex(gamma)))
        return complex(1j * dg * (qf.J_left[1, 0] + qf.J_right[0, 1]))
    if convention == "a_only":
        return complex(1j * qf.J_left[1, 0])
    raise ValueError(f"unknown convention {convention!r}")


def rho_at(T, F):
    """Transmission density ``Im F / (pi T^2)`` at ``gamma = 1/T``."""
    if not 0 < T < 1:
        raise DomainError(f"T must lie in (0, 1), got {T}")
    return F.imag / (math.pi * T * T)


def t_grid(count=199, kind="sech2", T_min=1e-8, T_max=1 - 1e-6, power=3.0):
    """Transmission grid clustered near T = 1.

    ``sech2``: ``T = sech(x)^2`` with ``x = x_hi u^1.5`` and ``u`` uniform.
    Near T = 1 this gives ``1 - T ~ u^3``, which makes ``rho dT`` smooth across
    the ``1/sqrt(1-T)`` edge; at small T it is uniform in ``log T``.
    ``power``: ``T = 1 - (1-u)^power`` with ``u`` uniform on [0.001, 0.999].
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    if kind == "sech2":
        if not 0 < T_min < T_max < 1:
            raise ValueError("need 0 < T_min < T_max < 1")
        x_lo = np.arccosh(1 / np.sqrt(T_max))
        x_hi = np.arccosh(1 / np.sqrt(T_min))
        u = np.linspace((x_lo / x_hi) ** (2 / 3), 1, count)
        return np.sort(1 / np.cosh(x_hi * u**1.5) ** 2)
    if kind == "power":
        u = np.linspace(0.001, 0.999, count)
        return 1 - (1 - u) ** power
    raise ValueError(f"unknown grid kind {kind!r}")


@dataclass
class SpectrumTable:
    T: np.ndarray
    gamma: np.ndarray
    F: np.ndarray
    rho_raw: np.ndarray
    iterations: np.ndarray
    residual: np.ndarray
    errors: list = field(default_factory=list)

    @property
    def rho(self):
        """Density with the tiny negative values of finite eta clamped to zero."""
        return np.clip(self.rho_raw, 0, None)

    @property
    def ok(self):
        return np.isfinite(self.F)

    @property
    def failed(self):
        return [(float(t), e) for t, e in zip(self.T, self.errors) if e]

    def normalization(self):
        m = self.ok
        return float(np.trapezoid(self.rho[m], self.T[m]))

    def mean_T(self):
        m = self.ok
        return float(np.trapezoid(self.T[m] * self.rho[m], self.T[m]))

    def rows(self):
        for i in range(self.T.size):
            yield (self.T[i], self.gamma[i].real, self.gamma[i].imag, self.F[i].real,
                   self.F[i].imag, self.rho_raw[i], int(self.iterations[i]), self.residual[i])


CONTINUATION_ETA = 0.1
NEGATIVE_RHO_TOL = 1e-6


def _solve_retarded(T, L_over_ell, dset, grid, settings, convention, eps_over_k):
    """Converged field on the branch that continues from ``Im gamma > 0``.

    A cold start from ``Q = 0`` can settle on the conjugate solution when
    ``eta`` is tiny, which shows up as a negative density. Such points are
    redone by first solving at ``eta = CONTINUATION_ETA`` and restarting from
    that field at the requested ``eta``.
    """
    params = Transport.from_T(L_over_ell, T, settings.eta, convention=convention, eps_over_k=eps_over_k)
    qf = solve(params, dset, grid, settings)
    if rho_at(T, gen_fun(qf, params.gamma, convention)) >= -NEGATIVE_RHO_TOL \
            or settings.eta >= CONTINUATION_ETA:
        return params, qf, qf.iterations
    wide = Transport.from_T(L_over_ell, T, CONTINUATION_ETA, convention=convention, eps_over_k=eps_over_k)
    start = solve(wide, dset, grid, settings)
    qf = solve(params, dset, grid, settings, Q0=start.Qtilde)
    return params, qf, start.iterations + qf.iterations


def solve_point(T, L_over_ell, dset, grid, settings=SolveSettings(), convention="sqrt", eps_over_k=0.0):
    """One scan point: returns ``(gamma, F, iterations, residual, error)``."""
    try:
        params, qf, iters = _solve_retarded(T, L_over_ell, dset, grid, settings, convention, eps_over_k)
    except SolverError as exc:
        hist = getattr(exc, "residual_history", [])
        gamma = Transport.from_T(L_over_ell, T, settings.eta).gamma
        return gamma, complex(np.nan, np.nan), len(hist), hist[-1] if hist else np.nan, \
            f"{type(exc).__name__}: {exc}"
    return params.gamma, gen_fun(qf, params.gamma, convention), iters, qf.residual, ""


def scan(T_grid, L_over_ell, dset, grid, settings=SolveSettings(), convention="sqrt",
         eps_over_k=0.0, threads=1):
    """Solve every T point independently and assemble the table in grid order."""
    T = np.asarray(T_grid, dtype=float)
    if np.any(T <= 0) or np.any(T >= 1):
        raise DomainError("T values must lie in (0, 1)")
    if np.any(np.diff(T) <= 0):
        raise ValueError("T grid must be strictly increasing")

    def job(t):
        return solve_point(t, L_over_ell, dset, grid, settings, convention, eps_over_k)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(job, T))
    else:
        out = [job(t) for t in T]
    return table_from_points(T, out)


def table_from_points(T, out):
    gamma = np.array([o[0] for o in out], dtype=complex)
    F = np.array([o[1] for o in out], dtype=complex)
    rho = np.array([F[i].imag / (math.pi * T[i] ** 2) for i in range(T.size)])
    return SpectrumTable(np.asarray(T, float), gamma, F, rho,
                         np.array([o[2] for o in out], dtype=int),
                         np.array([o[3] for o in out], dtype=float),
                         [o[4] for o in out])
