"""Invariant checks on converged solutions, shared by the CLI and the tests."""
from dataclasses import dataclass

import numpy as np

from . import mat2
from .dirset import moment_closed_form, slab_quadrature


@dataclass
class Check:
    name: str
    value: float
    limit: float

    @property
    def passed(self):
        return bool(np.isfinite(self.value) and self.value <= self.limit)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: {self.value:.3e} (limit {self.limit:.1e})"

    def as_dict(self):
        return {"name": self.name, "value": float(self.value), "limit": self.limit, "passed": self.passed}


def quadrature_checks(N_mu=64, dims=(2, 3), kappas=(0, 1), contours=(0.0, 0.5), limit=1e-9):
    out = []
    for d in dims:
        for a in contours:
            s = slab_quadrature(d, N_mu, a)
            for kappa in kappas:
                err = abs(s.moment_norm(kappa) - moment_closed_form(d, kappa))
                out.append(Check(f"quadrature norm d={d} kappa={kappa} a={a}", err, limit))
    return out


def radiance_errors(rays):
    """Max ``|g^2 - I|`` and max ``|tr g|`` over all samples, inside and outside the contacts."""
    g2, tr = 0.0, 0.0
    for g in (rays.g, rays.g_left, rays.g_right):
        g2 = max(g2, float(np.max(np.abs(g @ g - mat2.IDENTITY))))
        tr = max(tr, float(np.max(np.abs(mat2.trace(g)))))
    return g2, tr


def current_drift(qf):
    """Largest node-to-node change of the current, relative to its size."""
    J = qf.Jpar
    return float(np.max(np.abs(np.diff(J, axis=0))) / np.max(np.abs(J)))


def jump_errors(qf, gamma_a, gamma_b):
    """Deviation from ``X(x+) = E X(x-) E^-1`` at both contacts for field and current."""
    EA = mat2.IDENTITY + 1j * gamma_a * mat2.LAMBDA_PLUS
    EAi = mat2.IDENTITY - 1j * gamma_a * mat2.LAMBDA_PLUS
    EB = mat2.IDENTITY + 1j * gamma_b * mat2.LAMBDA_MINUS
    EBi = mat2.IDENTITY - 1j * gamma_b * mat2.LAMBDA_MINUS
    q = max(np.max(np.abs(EA @ qf.Q_left @ EAi - qf.Qtilde[0])),
            np.max(np.abs(EB @ qf.Qtilde[-1] @ EBi - qf.Q_right)))
    j = max(np.max(np.abs(EA @ qf.J_left @ EAi - qf.Jpar[0])),
            np.max(np.abs(EB @ qf.Jpar[-1] @ EBi - qf.J_right)))
    return float(q), float(j)


def solution_checks(qf, params):
    g2, tr = radiance_errors(qf.rays)
    jq, jj = jump_errors(qf, *params.contact_gammas)
    return [
        Check("g^2 = I", g2, 1e-8),
        Check("tr g = 0", tr, 1e-10),
        Check("bulk current drift", current_drift(qf), 1e-6),
        Check("field contact jumps", jq, 1e-8),
        Check("current contact jumps", jj, 1e-8),
    ]


def normalization_check(table, limit=0.02):
    return Check("integral of rho - 1", abs(table.normalization() - 1), limit)
