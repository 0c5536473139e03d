"""Self-consistent field loop for the normalized field and matrix current."""
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence
from .ray import integrate_all

CONVENTIONS = ("sqrt", "a_only")


@dataclass(frozen=True)
class SolveSettings:
    tol: float = 1e-10
    max_iter: int = 20000
    mixing: float = 1.0
    eta: float = 1e-6
    fallback_mixing: float = 0.5
    patience: int = 5

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.mixing <= 1:
            raise ValueError("mixing must lie in (0, 1]")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class Transport:
    """Physical parameters of one solve.

    ``gamma`` is the full complex counting parameter; ``from_T`` builds it as
    ``1/T + i eta``. ``L_over_ell = 0`` switches the disorder off.
    """

    L_over_ell: float
    gamma: complex
    convention: str = "sqrt"
    eps_over_k: float = 0.0

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        if self.L_over_ell < 0:
            raise ValueError("L_over_ell must be non-negative")

    @classmethod
    def from_T(cls, L_over_ell, T, eta=1e-6, **kw):
        return cls(L_over_ell, 1.0 / T + 1j * eta, **kw)

    @property
    def contact_gammas(self):
        if self.convention == "sqrt":
            r = np.sqrt(complex(self.gamma))
            return r, r
        return complex(self.gamma), 1.0 + 0j


@dataclass
class QField:
    """Field and current on the grid, plus their values just outside the contacts."""

    Qtilde: np.ndarray
    Jpar: np.ndarray
    Q_left: np.ndarray = None
    Q_right: np.ndarray = None
    J_left: np.ndarray = None
    J_right: np.ndarray = None
    residual_history: list = field(default_factory=list)
    mixing_history: list = field(default_factory=list)
    rays: object = None

    @property
    def iterations(self):
        return len(self.residual_history)

    @property
    def residual(self):
        return self.residual_history[-1] if self.residual_history else np.inf


def _means(g_plus, g_minus, dset):
    w0 = dset.weights(0)
    w1 = dset.weights(1)
    gp0 = np.tensordot(w0, g_plus, axes=(0, 0)) / w0.sum()
    gm0 = np.tensordot(w0, g_minus, axes=(0, 0)) / w0.sum()
    gp1 = np.tensordot(w1, g_plus, axes=(0, 0)) / w1.sum()
    gm1 = np.tensordot(w1, g_minus, axes=(0, 0)) / w1.sum()
    return 0.5 * (gp0 + gm0), 0.5 * (gp1 - gm1)


def update_fields(rays, dset):
    """Hemispheric means: kappa = 0 for the field, kappa = 1 for the current."""
    Q, J = _means(rays.g[0], rays.g[1], dset)
    Ql, Jl = _means(rays.g_left[0], rays.g_left[1], dset)
    Qr, Jr = _means(rays.g_right[0], rays.g_right[1], dset)
    return QField(Q, J, Ql, Qr, Jl, Jr, rays=rays)


def solve(params, dset, grid, settings=SolveSettings(), Q0=None):
    """Iterate rays and field updates from ``Q = 0`` until the field stops moving.

    The residual is the max entry norm of the change of the field between two
    sweeps, divided by ``max(1, max|Q|)`` so that fields blown up near
    ``gamma = 1`` are judged at round-off level and not absolutely. Mixing drops to ``settings.fallback_mixing`` once the residual has
    grown for ``settings.patience`` iterations in a row.
    """
    ga, gb = params.contact_gammas
    Q = np.zeros((grid.N_x + 1, 2, 2), complex) if Q0 is None else np.array(Q0, complex)
    mixing = settings.mixing
    history, mixes = [], []
    rising = falling = 0
    for _ in range(settings.max_iter):
        rays = integrate_all(dset.mu, Q, grid, ga, gb, params.L_over_ell, params.eps_over_k)
        qf = update_fields(rays, dset)
        scale = max(1.0, float(np.max(np.abs(qf.Qtilde))))
        res = float(np.max(np.abs(qf.Qtilde - Q))) / scale
        up = bool(history) and res > history[-1]
        rising = rising + 1 if up else 0
        falling = 0 if up else falling + 1
        history.append(res)
        mixes.append(mixing)
        if res < settings.tol:
            qf.residual_history, qf.mixing_history = history, mixes
            return qf
        if rising >= settings.patience and mixing > settings.fallback_mixing:
            mixing = settings.fallback_mixing
            rising = falling = 0
        elif mixing < settings.mixing and falling >= 4 * settings.patience:
            # steady contraction again: back to the configured mixing
            mixing = settings.mixing
        Q = (1 - mixing) * Q + mixing * qf.Qtilde
    raise NoConvergence(f"no convergence after {settings.max_iter} iterations "
                        f"(residual {history[-1]:.3e})", history)
