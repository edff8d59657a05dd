"""Two-body dispersion energy, effective C6 and scaling estimates."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .green import scaled_green
from .levels import DEFAULT_AXIS
from .quad import QuadratureSpec, integrate_semi_infinite
from .quantities import C, FOUR_PI_EPS0, HBAR, MU0

# -hbar mu0^2 / (2 pi): multiplies int dxi Tr[alpha_A (xi^2 G) alpha_B (xi^2 G)]
PREFACTOR = -HBAR * MU0 * MU0 / (2.0 * math.pi)


def default_xi_scale(r, *omega_max):
    """Map scale max(c/(2r), omega_max) for the integrals at separation ``r``.

    Covers both the retardation knee and the emitter Lorentzians.
    """
    return max([C / (2.0 * r)] + [w for w in omega_max if w > 0.0])


def separation_vector(r, direction=None):
    if not r > 0.0:
        raise DomainError("separation must be positive")
    u = DEFAULT_AXIS if direction is None else np.asarray(direction, dtype=float)
    return r * u / np.linalg.norm(u)


def coupling_tensor(alpha_b, r_vec, xi, near_field=False):
    """(xi^2 G) . alpha_B . (xi^2 G): the scattered-field kernel seen by A."""
    k = scaled_green(r_vec, xi, near_field=near_field)
    return k @ alpha_b(xi) @ k


def _scale_for(r, *responses):
    return default_xi_scale(r, *(getattr(a, "omega_max", 0.0) for a in responses))


def vdw_potential(alpha_a, alpha_b, r, spec: QuadratureSpec | None = None,
                  direction=None, near_field=False, full_output=False):
    """Dispersion energy U(r) in J between two polarisable particles.

    Parameters
    ----------
    alpha_a, alpha_b : callable
        xi-resolved polarisabilities returning ``(n, 3, 3)`` arrays for a
        1-D array of imaginary frequencies (e.g. :class:`Response`).
    r : float
        Separation in m.
    direction : array_like, optional
        Direction of r_A - r_B; defaults to +z.
    near_field : bool
        Use the non-retarded Green tensor.
    full_output : bool
        Return the :class:`QuadResult` (value scaled to J) instead of a float.
    """
    spec = spec or QuadratureSpec()
    r_vec = separation_vector(r, direction)
    # reciprocity: G(r_B, r_A) = G(r_A, r_B)^T = G(r_A, r_B)

    def integrand(xi):
        m = coupling_tensor(alpha_b, r_vec, xi, near_field)
        return np.einsum("nij,nji->n", alpha_a(xi), m)

    res = integrate_semi_infinite(integrand, spec, xi_c=_scale_for(r, alpha_a, alpha_b))
    if full_output:
        return res._replace(value=PREFACTOR * res.value, error=abs(PREFACTOR) * res.error)
    return PREFACTOR * res.value


def c6_eff(u, r):
    """Effective coefficient -U r^6 in J m^6."""
    if not r > 0.0:
        raise DomainError("separation must be positive")
    return -u * r**6


def _static_terms(system):
    """Ground-state oscillator terms: alpha_iso(i xi) = sum_k a_k w_k^2/(w_k^2 + xi^2)."""
    w = system.omega[:, 0]
    d2 = np.sum(system.dipoles[0, :] ** 2, axis=-1)
    keep = (w > 0.0) & (d2 > 0.0)
    w, d2 = w[keep], d2[keep]
    return 2.0 * d2 / (3.0 * HBAR * w), w


def c6_bare_analytic(sys_a, sys_b) -> float:
    """London C6 for two isotropic ground-state emitters (J m^6).

    Uses int_0^inf w_k^2 w_l^2 / ((w_k^2 + xi^2)(w_l^2 + xi^2)) dxi
    = (pi/2) w_k w_l / (w_k + w_l) term by term.
    """
    if not (sys_a.isotropic and sys_b.isotropic):
        raise NotImplementedError("closed-form C6 requires isotropic systems")
    a, wa = _static_terms(sys_a)
    b, wb = _static_terms(sys_b)
    if a.size == 0 or b.size == 0:
        return 0.0
    overlap = 0.5 * math.pi * np.outer(wa, wb) / (wa[:, None] + wb[None, :])
    integral = float(a @ overlap @ b)
    return 3.0 * HBAR / math.pi * integral / FOUR_PI_EPS0**2


def mixing_estimate(d, delta_e, r):
    """Order-of-magnitude mixing d^4 / ((4 pi eps0)^2 dE^2 r^6)."""
    return d**4 / (FOUR_PI_EPS0**2 * delta_e**2 * r**6)


def r_star(d, delta_e):
    """Separation (d^2 / (4 pi eps0 dE))^(1/3) where :func:`mixing_estimate` is 1."""
    return (d * d / (FOUR_PI_EPS0 * delta_e)) ** (1.0 / 3.0)


def characteristic_scales(system):
    """Largest transition dipole and lowest excitation gap of ``system``."""
    return float(np.max(system.dipole_magnitudes())), system.excitation_gap()
