"""Full-wave 1D saddle-point solver used to check the smoothness of the field.

The Green's function ``Gamma(x, x')`` of the 1D saddle-point operator is
discretized on a fine mesh; only its diagonal is needed, and it is obtained
from block recursions over the 2x2 blocks of the tridiagonal system.
"""
from dataclasses import dataclass, field

import numba
import numpy as np

from . import mat2
from .errors import NoConvergence, SingularBlock


@dataclass(frozen=True)
class Profile1D:
    """Disordered slab of thickness ``L`` in a padded 1D domain, lengths in units of lambda.

    ``varsigma = 0`` gives sharp edges; ``obstacle_sigma = 0`` a delta obstacle.
    """

    L: float = 20.0
    L_over_ell: float = 5.0
    varsigma: float = 0.4
    gamma_a: complex = 1.2 + 1e-5j
    gamma_b: complex = 1.2 + 1e-5j
    points_per_wavelength: int = 40
    padding: float = 2.0
    obstacle_gamma0: float = 0.0
    obstacle_sigma: float = 0.0
    obstacle_x0: float = None
    contacts: bool = True

    def __post_init__(self):
        if self.points_per_wavelength < 20:
            raise ValueError("need at least 20 points per wavelength")
        if self.padding < 2.0:
            raise ValueError("padding must be at least 2 wavelengths")
        if self.L <= 0 or self.L_over_ell < 0 or self.varsigma < 0:
            raise ValueError("invalid slab parameters")

    @property
    def k(self):
        return 2 * np.pi

    @property
    def h(self):
        return 1.0 / self.points_per_wavelength

    @property
    def x(self):
        n = int(round((self.L + 2 * self.padding) / self.h))
        return -self.padding + self.h * np.arange(n + 1)

    @property
    def velocity(self):
        """Group velocity of the discrete wave equation, ``sin(kh)/h``."""
        return np.sin(self.k * self.h) / self.h

    def node(self, x0):
        return int(np.argmin(np.abs(self.x - x0)))

    def disorder(self):
        """``alpha(x)``; the prefactor makes the bulk decay rate match ``1/ell``."""
        x = self.x
        ell = self.L / self.L_over_ell if self.L_over_ell > 0 else np.inf
        amp = 2 * self.velocity**2 / ell
        if self.varsigma == 0:
            prof = ((x >= 0) & (x <= self.L)).astype(float)
            prof[self.node(0.0)] = prof[self.node(self.L)] = 0.5
        else:
            prof = (np.tanh(x / self.varsigma) - np.tanh((x - self.L) / self.varsigma)) / 2
        return amp * prof

    def obstacle(self):
        x = self.x
        B = np.zeros_like(x)
        if self.obstacle_gamma0 == 0:
            return B
        x0 = self.L / 2 if self.obstacle_x0 is None else self.obstacle_x0
        if self.obstacle_sigma == 0:
            B[self.node(x0)] = self.obstacle_gamma0 * self.k / self.h
        else:
            s = self.obstacle_sigma
            B = self.obstacle_gamma0 * self.k / (np.sqrt(2 * np.pi) * s) * np.exp(-0.5 * ((x - x0) / s) ** 2)
        return B


def assemble(profile, Qtilde):
    """Blocks of the discretized operator: ``diag[j]``, ``upper[j] = A[j, j+1]``, ``lower[j] = A[j+1, j]``."""
    p = profile
    n = p.x.size
    h2 = p.h**2
    kd2 = 2 * (1 - np.cos(p.k * p.h)) / h2
    I = mat2.IDENTITY
    # Q = pi nu Qtilde with pi nu = 1/(2v)
    aQ = (p.disorder() / (2 * p.velocity))[:, None, None] * Qtilde
    diag = ((kd2 - 2 / h2) + p.obstacle())[:, None, None] * I + 1j * aQ
    upper = np.broadcast_to(I / h2, (n - 1, 2, 2)).copy()
    lower = upper.copy()
    # outgoing closures: channel 1 retarded, channel 2 advanced
    close = np.diag([np.exp(1j * p.k * p.h), np.exp(-1j * p.k * p.h)]) / h2
    diag[0] += close
    diag[-1] += close
    if p.contacts:
        # symmetrized current operator p delta + delta p at the contact node
        c = 1j / (2 * h2)
        for j0, lam in ((p.node(0.0), p.gamma_a * mat2.LAMBDA_PLUS),
                        (p.node(p.L), p.gamma_b * mat2.LAMBDA_MINUS)):
            upper[j0] += -c * lam      # A[j0, j0+1]
            lower[j0 - 1] += c * lam   # A[j0, j0-1]
            lower[j0] += c * lam       # A[j0+1, j0]
            upper[j0 - 1] += -c * lam  # A[j0-1, j0]
    return diag, upper, lower


@numba.njit(cache=True, inline="always")
def _inv2(a, out):
    d = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    s = max(max(abs(a[0, 0]), abs(a[0, 1])), max(abs(a[1, 0]), abs(a[1, 1])))
    if not abs(d) > 1e-14 * s * s:
        return False
    out[0, 0] = a[1, 1] / d
    out[0, 1] = -a[0, 1] / d
    out[1, 0] = -a[1, 0] / d
    out[1, 1] = a[0, 0] / d
    return True


@numba.njit(cache=True)
def _rgf(diag, upper, lower, out):
    n = diag.shape[0]
    gl = np.empty((n, 2, 2), dtype=np.complex128)
    gr = np.empty((n, 2, 2), dtype=np.complex128)
    if not _inv2(diag[0], gl[0]):
        return False
    for j in range(1, n):
        s = diag[j] - lower[j - 1] @ gl[j - 1] @ upper[j - 1]
        if not _inv2(s, gl[j]):
            return False
    if not _inv2(diag[n - 1], gr[n - 1]):
        return False
    for j in range(n - 2, -1, -1):
        s = diag[j] - upper[j] @ gr[j + 1] @ lower[j]
        if not _inv2(s, gr[j]):
            return False
    for j in range(n):
        s = diag[j].copy()
        if j > 0:
            s -= lower[j - 1] @ gl[j - 1] @ upper[j - 1]
        if j < n - 1:
            s -= upper[j] @ gr[j + 1] @ lower[j]
        if not _inv2(s, out[j]):
            return False
    return True


def block_diag_inverse(diag, upper, lower):
    """Diagonal 2x2 blocks of the inverse of a block-tridiagonal matrix."""
    out = np.empty_like(diag)
    ok = _rgf(np.ascontiguousarray(diag), np.ascontiguousarray(upper), np.ascontiguousarray(lower), out)
    if not ok:
        raise SingularBlock("pivot block is numerically singular")
    return out


def dense_matrix(diag, upper, lower):
    """Dense form of the block-tridiagonal operator, for checks on small grids."""
    n = diag.shape[0]
    A = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        A[2 * j:2 * j + 2, 2 * j:2 * j + 2] = diag[j]
    for j in range(n - 1):
        A[2 * j:2 * j + 2, 2 * j + 2:2 * j + 4] = upper[j]
        A[2 * j + 2:2 * j + 4, 2 * j:2 * j + 2] = lower[j]
    return A


def green_diag(profile, Qtilde, rhs_scale=1.0):
    """Normalized diagonal ``Q(x_j)/(pi nu)`` of the Green's function for a given field.

    The source is ``i * rhs_scale * delta(x - x')``.
    """
    diag, upper, lower = assemble(profile, Qtilde)
    Ginv = block_diag_inverse(diag, upper, lower)
    return 2 * profile.velocity * 1j * rhs_scale / profile.h * Ginv


@dataclass
class Field1D:
    x: np.ndarray
    Qtilde: np.ndarray
    oscillation_metric: float
    residual_history: list = field(default_factory=list)


def oscillation_metric(x, q11, L, k=2 * np.pi, window=(0.1, 0.9), degree=3):
    """Fraction of the spectral energy of ``Q11`` at wavenumbers ``>= k``.

    The signal is restricted to ``[0.1 L, 0.9 L]``, detrended by a low-order
    polynomial and Hann-windowed before the FFT.
    """
    m = (x >= window[0] * L) & (x <= window[1] * L)
    xs, y = x[m], np.real(q11[m])
    y = y - np.polyval(np.polyfit(xs, y, degree), xs)
    y = y * np.hanning(y.size)
    spec = np.abs(np.fft.rfft(y)) ** 2
    q = 2 * np.pi * np.fft.rfftfreq(y.size, d=xs[1] - xs[0])
    total = spec[q > 0].sum()
    if total == 0:
        return 0.0
    return float(spec[q >= k].sum() / total)


def solve_1d(profile, tol=1e-10, max_iter=1000, mixing=1.0):
    """Iterate ``Q -> diag Gamma[Q]`` from ``Q = 0`` to the self-consistent field."""
    n = profile.x.size
    Q = np.zeros((n, 2, 2), dtype=complex)
    history = []
    for _ in range(max_iter):
        Qn = green_diag(profile, Q)
        res = float(np.max(np.abs(Qn - Q)))
        history.append(res)
        Q = (1 - mixing) * Q + mixing * Qn
        if res < tol:
            metric = oscillation_metric(profile.x, Q[:, 0, 0], profile.L)
            return Field1D(profile.x, Q, metric, history)
    raise NoConvergence(f"1D saddle point did not converge in {max_iter} iterations", history)
