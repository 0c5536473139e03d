"""Discrete direction families: waveguide modes and slab contour quadrature."""
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gamma as gamma_fn

from .errors import EmptySet, GrazingMode, InvalidDim, QuadratureFailure

WAVEGUIDE = "waveguide"
SLAB = "slab"
MU_FLOOR = 1e-9


def unit_ball(d, which="volume"):
    """Volume ``V_d`` or surface ``S_d = d V_d`` of the unit ball in ``R^d``."""
    v = np.pi ** (d / 2) / gamma_fn(d / 2 + 1)
    if which == "volume":
        return float(v)
    if which == "surface":
        return float(d * v)
    raise ValueError(f"unknown quantity {which!r}")


def moment_closed_form(d, kappa):
    """Closed form of ``int_0^1 mu^kappa (1 - mu^2)^((d-3)/2) dmu``."""
    return unit_ball(d + kappa - 2) / (unit_ball(d - 1, "surface") * unit_ball(kappa - 1))


@dataclass(frozen=True)
class DirectionSet:
    """Direction cosines ``mu`` with weights ``c`` and integer multiplicities.

    Arrays are made read-only at construction so that a set can be shared
    freely between threads.
    """

    kind: str
    dims: int
    mu: np.ndarray
    c: np.ndarray
    mult: np.ndarray

    def __post_init__(self):
        for name in ("mu", "c", "mult"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.mu.size == 0:
            raise EmptySet("direction set has no directions")

    def __len__(self):
        return self.mu.size

    @property
    def n_modes(self):
        return int(self.mult.sum())

    def weights(self, kappa):
        """Unnormalized weights ``mult * c * mu**(kappa - 1)``."""
        return self.mult * self.c * self.mu ** (kappa - 1)

    def moment_norm(self, kappa):
        return complex(self.weights(kappa).sum())


def directional_mean(values, dset, kappa, hemisphere=None):
    """Weighted mean ``<A>_kappa`` over the directions of ``dset``.

    ``values`` has the direction index first. When ``hemisphere`` is given
    the array carries a leading sign axis (0 for '+', 1 for '-') that is
    selected first.
    """
    values = np.asarray(values)
    if hemisphere is not None:
        values = values[{"+": 0, "-": 1}[hemisphere]]
    if len(dset) == 0 or values.shape[0] == 0:
        raise EmptySet("no directions to average over")
    w = dset.weights(kappa)
    return np.tensordot(w, values, axes=(0, 0)) / w.sum()


def waveguide_modes(d, W_over_lambda, mu_min=MU_FLOOR, drop_cutoff=False):
    """Propagating modes of a waveguide with periodic transverse boundaries.

    Modes sharing the same integer ``|n|^2`` are degenerate and are merged
    into one direction with the corresponding multiplicity. ``d = 1`` gives
    the single normal direction. A mode below ``mu_min`` raises GrazingMode
    unless ``drop_cutoff`` is set, in which case it is left out as
    non-propagating.
    """
    if d < 1:
        raise InvalidDim(f"d must be >= 1, got {d}")
    if W_over_lambda <= 0:
        raise ValueError("W_over_lambda must be positive")
    nmax = int(np.floor(W_over_lambda))
    counts = {}
    for n in itertools.product(range(-nmax, nmax + 1), repeat=d - 1):
        n2 = sum(i * i for i in n)
        if n2 <= W_over_lambda**2 * (1 + 1e-14):
            counts[n2] = counts.get(n2, 0) + 1
    n2 = np.array(sorted(counts))
    mu = np.sqrt(np.clip(1 - n2 / W_over_lambda**2, 0, None))
    if drop_cutoff:
        keep = mu >= mu_min
        n2, mu = n2[keep], mu[keep]
    if mu.size == 0:
        raise EmptySet("no propagating modes")
    if mu.min() < mu_min:
        raise GrazingMode(f"mode at cutoff: mu = {mu.min():.3g} < {mu_min:g}")
    mult = np.array([counts[k] for k in n2])
    return DirectionSet(WAVEGUIDE, d, mu.astype(complex), np.ones(mu.size, complex), mult)


def jacobi_rule(n, alpha, beta):
    """Gauss-Jacobi nodes and weights on [-1, 1] by Golub-Welsch."""
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    s = 2 * k + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (beta**2 - alpha**2) / (s * (s + 2))
    diag[0] = (beta - alpha) / (ab + 2)
    m = np.arange(1, n, dtype=float)
    s = 2 * m + ab
    off = np.sqrt(4 * m * (m + alpha) * (m + beta) * (m + ab) / (s**2 * (s + 1) * (s - 1)))
    try:
        x, v = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:
        raise QuadratureFailure(str(exc)) from exc
    mu0 = 2 ** (ab + 1) * gamma_fn(alpha + 1) * gamma_fn(beta + 1) / gamma_fn(ab + 2)
    w = mu0 * v[0] ** 2
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise QuadratureFailure("non-finite Gauss-Jacobi rule")
    return x, w


def slab_quadrature(d, N_mu, a):
    """Contour quadrature for the infinite slab.

    Gauss rule on [0, 1] for the weight ``(1 - t)^p`` with ``p = (d - 3)/2``,
    mapped on the contour ``mu = t + i a t (1 - t^2)``.
    """
    if d < 2:
        raise InvalidDim(f"slab quadrature needs d >= 2, got {d}")
    if N_mu < 2:
        raise ValueError("N_mu must be at least 2")
    if a < 0:
        raise ValueError("contour parameter a must be non-negative")
    p = (d - 3) / 2
    x, w = jacobi_rule(N_mu, p, 0.0)
    t = (1 + x) / 2
    w = w / 2 ** (p + 1)
    mu = t + 1j * a * t * (1 - t * t)
    dmu = 1 + 1j * a * (1 - 3 * t * t)
    # (1 - mu^2)^p / (1 - t)^p written without the division; 1 - mu = (1 - t)(1 - i a t (1 + t))
    ratio = (1 - 1j * a * t * (1 + t)) ** p * (1 + mu) ** p
    c = w * dmu * mu * ratio
    return DirectionSet(SLAB, d, mu, c, np.ones(N_mu, dtype=int))
