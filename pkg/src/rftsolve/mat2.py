"""Complex 2x2 matrix kernel.

Matrices are plain ``numpy`` arrays of shape ``(..., 2, 2)``. Every function
broadcasts over leading axes so that whole grids of matrices can be handled
at once.
"""
import numpy as np

from .errors import DefectiveMatrix, NonTraceless

IDENTITY = np.eye(2, dtype=complex)
LAMBDA3 = np.array([[1, 0], [0, -1]], dtype=complex)
LAMBDA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
LAMBDA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

SERIES_THRESHOLD = 1e-4


def as_c2(a):
    a = np.asarray(a, dtype=complex)
    if a.shape[-2:] != (2, 2):
        raise ValueError(f"expected (..., 2, 2) array, got shape {a.shape}")
    return a


def trace(a):
    a = as_c2(a)
    return a[..., 0, 0] + a[..., 1, 1]


def det(a):
    a = as_c2(a)
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def commutator(a, b):
    a, b = as_c2(a), as_c2(b)
    return a @ b - b @ a


def cosh_sinhc(s2):
    """Return ``cosh(s)`` and ``sinh(s)/s`` as functions of ``s2 = s**2``.

    Both are even in ``s``, so no branch of the square root needs tracking.
    """
    s2 = np.asarray(s2, dtype=complex)
    s = np.sqrt(s2)
    small = np.abs(s) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, s)
    c = np.where(small, 1 + s2 / 2 + s2 * s2 / 24, np.cosh(safe))
    sh = np.where(small, 1 + s2 / 6 + s2 * s2 / 120, np.sinh(safe) / safe)
    return c, sh


def exp_traceless(a, check=True):
    """Exponential of a traceless 2x2 matrix, ``cosh(s) I + sinh(s)/s A``."""
    a = as_c2(a)
    if check:
        scale = np.max(np.abs(a), axis=(-2, -1))
        if np.any(np.abs(trace(a)) > 1e-12 * scale):
            raise NonTraceless("exp_traceless needs a traceless argument")
    s2 = a[..., 0, 0] ** 2 + a[..., 0, 1] * a[..., 1, 0]
    c, sh = cosh_sinhc(s2)
    return c[..., None, None] * IDENTITY + sh[..., None, None] * a


def msign(a, max_cond=1e12):
    """Matrix sign function through the eigendecomposition."""
    a = as_c2(a)
    w, u = np.linalg.eig(a)
    if np.any(w.real == 0):
        raise DefectiveMatrix("eigenvalue on the imaginary axis, sign undefined")
    if np.any(np.linalg.cond(u) > max_cond):
        raise DefectiveMatrix("eigenvector matrix is numerically singular")
    s = np.sign(w.real)
    return (u * s[..., None, :]) @ np.linalg.inv(u)
