"""Free-space dyadic Green tensor on the imaginary frequency axis.

The tensor at omega = i*xi is real and symmetric,

    G(r, i xi) = -c^2 / (4 pi xi^2 r^3) * exp(-x)
                 * [(1 + x + x^2) I - (3 + 3x + x^2) rhat rhat],   x = xi r / c,

and reduces to -c^2 / (4 pi xi^2 r^3) (I - 3 rhat rhat) for x << 1.

Dispersion integrands contain xi^4 G G, so the library works mostly with the
regular product ``xi^2 G`` (see :func:`scaled_green`), which is finite at
xi = 0 and avoids forming the singular factors separately.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .quantities import C

_I3 = np.eye(3)


def _unit(r_vec):
    r_vec = np.asarray(r_vec, dtype=float)
    if r_vec.shape != (3,):
        raise ValueError(f"separation must be a 3-vector, got shape {r_vec.shape}")
    r = float(np.linalg.norm(r_vec))
    if not r > 0.0:
        raise DomainError("coincident points: separation vector has zero length")
    return r, r_vec / r


def scaled_green(r_vec, xi, near_field=False):
    """Return xi^2 * G(r_vec, i xi) with shape ``np.shape(xi) + (3, 3)``.

    Parameters
    ----------
    r_vec : array_like, shape (3,)
        Separation vector in m.
    xi : float or ndarray
        Imaginary frequencies in rad/s, xi >= 0.
    near_field : bool
        Drop the retardation factors (the x -> 0 limit).
    """
    r, rhat = _unit(r_vec)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0):
        raise DomainError("imaginary frequency must be non-negative")
    rr = np.outer(rhat, rhat)
    pref = -C * C / (4.0 * math.pi * r**3)
    if near_field:
        tensor = pref * (_I3 - 3.0 * rr)
        return np.broadcast_to(tensor, xi.shape + (3, 3)).copy()
    x = xi * r / C
    damp = np.exp(-x)
    a = (pref * damp * (1.0 + x + x * x))[..., None, None]
    b = (pref * damp * (3.0 + 3.0 * x + x * x))[..., None, None]
    return a * _I3 - b * rr


def _divide_out(kernel, xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0.0):
        raise DomainError("static pole: the Green tensor is singular at xi = 0")
    return kernel / (xi * xi)[..., None, None]


def vacuum_green(r_vec, xi):
    """Retarded free-space Green tensor G(r_vec, i xi) in m^-1."""
    return _divide_out(scaled_green(r_vec, xi), xi)


def near_field_green(r_vec, xi):
    """Non-retarded limit -c^2/(4 pi xi^2 r^3) (I - 3 rhat rhat)."""
    return _divide_out(scaled_green(r_vec, xi, near_field=True), xi)
