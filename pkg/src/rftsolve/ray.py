"""Matrix transport along one direction in the Schopohl vector form.

The radiance ``g = M L3 M^-1`` is built from two vectors ``a`` and ``b`` that
obey the linear equations ``dv/dx = P v``. Each vector is swept in its stable
direction with the exact exponential of the cell generator, and the contact
terms enter as jumps ``v -> (I + i gamma L+-) v``.
"""
from dataclasses import dataclass

import numba
import numpy as np

from . import mat2
from .errors import NonFinite, ParamBlowup

# stable sweep direction for each vector, '+' and '-' are the two hemispheres
SWEEP_ARROWS = {
    ("a", "+"): "forward",
    ("b", "-"): "forward",
    ("a", "-"): "backward",
    ("b", "+"): "backward",
}
BLOWUP_TOL = 1e-14


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [0, 1] (units of L) with contacts on the end nodes."""

    N_x: int

    def __post_init__(self):
        if self.N_x < 2:
            raise ValueError("N_x must be at least 2")

    @property
    def dx(self):
        return 1.0 / self.N_x

    @property
    def x(self):
        return np.linspace(0.0, 1.0, self.N_x + 1)

    @property
    def j_a(self):
        return 0

    @property
    def j_b(self):
        return self.N_x


@dataclass
class RayField:
    """Radiance samples for every direction and both hemispheres.

    ``g[s, i, j]`` is the sample for sign ``s`` (0 for '+', 1 for '-'),
    direction ``i`` and node ``j``; node 0 sits just inside contact A and
    node N just inside contact B. ``g_left`` and ``g_right`` hold the values
    just outside, at x_a^- and x_b^+.
    """

    g: np.ndarray
    g_left: np.ndarray
    g_right: np.ndarray


def bulk_generator(mu, Qtilde, L_over_ell, eps_over_k=0.0, sign=1):
    """Generator ``P`` of the bulk transport equation in units of L."""
    if mu == 0:
        raise ValueError("mu must be non-zero")
    Qtilde = mat2.as_c2(Qtilde)
    return -sign * (L_over_ell * Qtilde + eps_over_k * mat2.LAMBDA3) / (2 * mu)


def contact_jump(v, which, gamma, inverse=False):
    """Apply ``exp(i gamma L+)`` at contact A or ``exp(i gamma L-)`` at B."""
    v = np.array(v, dtype=complex)
    g = -gamma if inverse else gamma
    if which == "A":
        v[..., 0] += 1j * g * v[..., 1]
    elif which == "B":
        v[..., 1] += 1j * g * v[..., 0]
    else:
        raise ValueError(f"unknown contact {which!r}")
    return v


def g_from_vectors(a, b):
    """Radiance from the vector pair, ``g = M L3 M^-1`` with ``M = [b | a]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = b[..., 0] * a[..., 1] - a[..., 0] * b[..., 1]
    g = np.empty(a.shape[:-1] + (2, 2), dtype=complex)
    g[..., 0, 0] = (b[..., 0] * a[..., 1] + a[..., 0] * b[..., 1]) / d
    g[..., 0, 1] = -2 * a[..., 0] * b[..., 0] / d
    g[..., 1, 0] = 2 * a[..., 1] * b[..., 1] / d
    g[..., 1, 1] = -g[..., 0, 0]
    return g


def propagate(v, mu, sign, Qtilde, grid, L_over_ell, eps_over_k=0.0, backward=False):
    """Reference sweep of one vector through the bulk, no contacts, no rescaling.

    Returns the vector at every node. This is a slow, literal route kept for
    checks of the compiled kernel and of the sweep orientation.
    """
    Qtilde = mat2.as_c2(Qtilde)
    Qmid = 0.5 * (Qtilde[1:] + Qtilde[:-1])
    P = bulk_generator(mu, Qmid, L_over_ell, eps_over_k, sign)
    P = P - 0.5 * mat2.trace(P)[:, None, None] * mat2.IDENTITY
    step = mat2.exp_traceless((-grid.dx if backward else grid.dx) * P)
    out = np.empty((grid.N_x + 1, 2), dtype=complex)
    cells = range(grid.N_x - 1, -1, -1) if backward else range(grid.N_x)
    j = grid.N_x if backward else 0
    out[j] = v
    for c in cells:
        nxt = c if backward else c + 1
        out[nxt] = step[c] @ out[j]
        j = nxt
    return out


@numba.njit(cache=True, inline="always")
def _rescale(v0, v1):
    m = max(abs(v0), abs(v1))
    return v0 / m, v1 / m


@numba.njit(cache=True, inline="always")
def _g_entries(a0, a1, b0, b1):
    """Entries of g and a status code: 0 fine, 1 Riccati pole, 2 non-finite."""
    d = b0 * a1 - a0 * b1
    scale = max(abs(a0), abs(a1)) * max(abs(b0), abs(b1))
    if not np.isfinite(scale * abs(d)):
        return 0j, 0j, 0j, 2
    if abs(d) < 1e-14 * scale:
        return 0j, 0j, 0j, 1
    g11 = (b0 * a1 + a0 * b1) / d
    g12 = -2.0 * a0 * b0 / d
    g21 = 2.0 * a1 * b1 / d
    return g11, g12, g21, 0


@numba.njit(cache=True, inline="always")
def _tanh_large(z):
    """tanh for |Re z| large; the compiled complex tanh overflows there."""
    if z.real < 0:
        e = np.exp(2.0 * z)
        return -(1.0 - e) / (1.0 + e)
    e = np.exp(-2.0 * z)
    return (1.0 - e) / (1.0 + e)


@numba.njit(cache=True, parallel=True, nogil=True)
def _sweep(mus, signs, Q, dx, L_over_ell, eps_hat, ga, gb, g, g_left, g_right, status):
    n = mus.size
    N = Q.shape[0] - 1
    for k in numba.prange(n):
        mu = mus[k]
        s = signs[k]
        cq = -s * 0.5 * L_over_ell / mu * dx
        ce = -s * 0.5 * eps_hat / mu * dx
        # per-cell step matrices exp(P dx) = ch I + sh A, A traceless
        ch = np.empty(N, dtype=np.complex128)
        e11 = np.empty(N, dtype=np.complex128)
        e12 = np.empty(N, dtype=np.complex128)
        e21 = np.empty(N, dtype=np.complex128)
        for c in range(N):
            q11 = 0.5 * (Q[c, 0, 0] + Q[c + 1, 0, 0])
            q22 = 0.5 * (Q[c, 1, 1] + Q[c + 1, 1, 1])
            q12 = 0.5 * (Q[c, 0, 1] + Q[c + 1, 0, 1])
            q21 = 0.5 * (Q[c, 1, 0] + Q[c + 1, 1, 0])
            p11 = cq * 0.5 * (q11 - q22) + ce
            p12 = cq * q12
            p21 = cq * q21
            s2 = p11 * p11 + p12 * p21
            sg = np.sqrt(s2)
            if abs(sg) < 1e-4:
                c0 = 1.0 + s2 / 2.0 + s2 * s2 / 24.0
                sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0
            elif abs(sg.real) > 20.0:
                # the vectors are only defined up to a factor: divide by cosh
                c0 = 1.0 + 0j
                sh = _tanh_large(sg) / sg
            else:
                c0 = np.cosh(sg)
                sh = np.sinh(sg) / sg
            ch[c] = c0
            e11[c] = sh * p11
            e12[c] = sh * p12
            e21[c] = sh * p21
        fw0 = np.empty(N + 1, dtype=np.complex128)
        fw1 = np.empty(N + 1, dtype=np.complex128)
        bw0 = np.empty(N + 1, dtype=np.complex128)
        bw1 = np.empty(N + 1, dtype=np.complex128)
        # forward vector: a for '+', b for '-'; enters through contact A
        if s > 0:
            v0, v1 = 1j * ga, 1.0 + 0j
        else:
            v0, v1 = 1.0 + 0j, 0j
        fw0[0], fw1[0] = v0, v1
        for c in range(N):
            w0 = (ch[c] + e11[c]) * v0 + e12[c] * v1
            w1 = e21[c] * v0 + (ch[c] - e11[c]) * v1
            v0, v1 = _rescale(w0, w1)
            fw0[c + 1], fw1[c + 1] = v0, v1
        # backward vector: b for '+', a for '-'; enters through contact B
        if s > 0:
            v0, v1 = 1.0 + 0j, -1j * gb
        else:
            v0, v1 = 0j, 1.0 + 0j
        bw0[N], bw1[N] = v0, v1
        for c in range(N - 1, -1, -1):
            w0 = (ch[c] - e11[c]) * v0 - e12[c] * v1
            w1 = -e21[c] * v0 + (ch[c] + e11[c]) * v1
            v0, v1 = _rescale(w0, w1)
            bw0[c], bw1[c] = v0, v1
        code = 0
        for j in range(N + 1):
            if s > 0:
                g11, g12, g21, c0 = _g_entries(fw0[j], fw1[j], bw0[j], bw1[j])
            else:
                g11, g12, g21, c0 = _g_entries(bw0[j], bw1[j], fw0[j], fw1[j])
            code = max(code, c0)
            g[k, j, 0, 0] = g11
            g[k, j, 0, 1] = g12
            g[k, j, 1, 0] = g21
            g[k, j, 1, 1] = -g11
        # just outside contact A (undo the jump on the backward vector)
        u0 = bw0[0] - 1j * ga * bw1[0]
        u1 = bw1[0]
        if s > 0:
            g11, g12, g21, c0 = _g_entries(0j, 1.0 + 0j, u0, u1)
        else:
            g11, g12, g21, c0 = _g_entries(u0, u1, 1.0 + 0j, 0j)
        code = max(code, c0)
        g_left[k, 0, 0], g_left[k, 0, 1], g_left[k, 1, 0], g_left[k, 1, 1] = g11, g12, g21, -g11
        # just outside contact B (apply the jump to the forward vector)
        u0 = fw0[N]
        u1 = fw1[N] + 1j * gb * fw0[N]
        if s > 0:
            g11, g12, g21, c0 = _g_entries(u0, u1, 1.0 + 0j, 0j)
        else:
            g11, g12, g21, c0 = _g_entries(0j, 1.0 + 0j, u0, u1)
        code = max(code, c0)
        g_right[k, 0, 0], g_right[k, 0, 1], g_right[k, 1, 0], g_right[k, 1, 1] = g11, g12, g21, -g11
        status[k] = code


def _run_kernel(mus, signs, Qtilde, grid, L_over_ell, gamma_a, gamma_b, eps_over_k):
    Qtilde = np.ascontiguousarray(Qtilde, dtype=np.complex128)
    if Qtilde.shape != (grid.N_x + 1, 2, 2):
        raise ValueError(f"Q field shape {Qtilde.shape} does not match the grid")
    mus = np.ascontiguousarray(mus, dtype=np.complex128)
    if np.any(mus == 0):
        raise ValueError("mu must be non-zero")
    signs = np.ascontiguousarray(signs, dtype=np.float64)
    n = mus.size
    g = np.empty((n, grid.N_x + 1, 2, 2), dtype=np.complex128)
    g_left = np.empty((n, 2, 2), dtype=np.complex128)
    g_right = np.empty((n, 2, 2), dtype=np.complex128)
    status = np.zeros(n, dtype=np.int64)
    _sweep(mus, signs, Qtilde, grid.dx, float(L_over_ell), float(eps_over_k),
           complex(gamma_a), complex(gamma_b), g, g_left, g_right, status)
    if np.any(status == 2):
        raise NonFinite("non-finite radiance")
    if np.any(status == 1):
        raise ParamBlowup("Riccati pole on a sample (degenerate vector pair)")
    return g, g_left, g_right


def integrate_ray(mu, sign, Qtilde, grid, gamma_a, gamma_b, L_over_ell, eps_over_k=0.0):
    """Radiance of one direction and hemisphere at every node.

    Returns ``(g, g_left, g_right)``: the node samples and the values just
    outside contact A and contact B.
    """
    s = {"+": 1.0, "-": -1.0}.get(sign, sign)
    g, gl, gr = _run_kernel([mu], [s], Qtilde, grid, L_over_ell, gamma_a, gamma_b, eps_over_k)
    return g[0], gl[0], gr[0]


def integrate_all(mus, Qtilde, grid, gamma_a, gamma_b, L_over_ell, eps_over_k=0.0):
    """Radiance for every direction in ``mus`` and both hemispheres."""
    mus = np.asarray(mus, dtype=complex)
    n = mus.size
    both = np.concatenate([mus, mus])
    signs = np.concatenate([np.ones(n), -np.ones(n)])
    g, gl, gr = _run_kernel(both, signs, Qtilde, grid, L_over_ell, gamma_a, gamma_b, eps_over_k)
    shape = (2, n)
    return RayField(g.reshape(shape + g.shape[1:]), gl.reshape(shape + (2, 2)), gr.reshape(shape + (2, 2)))
