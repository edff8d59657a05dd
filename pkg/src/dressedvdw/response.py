"""Polarisabilities on the imaginary frequency axis.

Every function takes ``xi`` (scalar or 1-D array, rad/s) and returns a real
array of shape ``np.shape(xi) + (3, 3)`` in C^2 m^2 J^-1.

On the imaginary axis a pair of resonant terms ``A/(w - i xi) + A^T/(w + i xi)``
has the real part ``(A + A^T) w / (w^2 + xi^2)``; the remaining imaginary part
is antisymmetric and drops out of every trace against the symmetric Green
tensor products used downstream, so it is not returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .quantities import HBAR


def _xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0):
        raise DomainError("imaginary frequency must be non-negative")
    return xi


def _check_index(system, *idx):
    n = system.n_levels
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"state index {i} out of range for {n}-level system")


def _lorentz(omega, xi):
    """omega / (omega^2 + xi^2) with shape xi.shape + omega.shape; 0 where omega == 0."""
    w = omega
    x = xi[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = w / (w * w + x * x)
    return np.where(w == 0.0, 0.0, out)


def _lorentz_sq(omega, xi):
    """Re 1/(omega - i xi)^2 = (omega^2 - xi^2) / (omega^2 + xi^2)^2."""
    w = omega
    x = xi[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        den = w * w + x * x
        out = (w * w - x * x) / (den * den)
    return np.where(w == 0.0, 0.0, out)


def _sym_sum(weights, numerators):
    """sum_k weights[..., k] * (A_k + A_k^T) for A of shape (K, 3, 3)."""
    s = numerators + np.swapaxes(numerators, -1, -2)
    return np.einsum("...k,kij->...ij", weights, s)


def orientation_average(tensor):
    """Replace each 3x3 tensor by Tr(tensor)/3 * I."""
    tr = np.trace(tensor, axis1=-2, axis2=-1) / 3.0
    return tr[..., None, None] * np.eye(3)


def _finish(alpha, isotropic):
    return orientation_average(alpha) if isotropic else alpha


def alpha_from_parameters(omega, dipoles, m, xi, isotropic=True):
    """Ground-form polarisability of state ``m`` from explicit parameters.

    ``omega[k, m]`` are transition frequencies and ``dipoles[k, m]`` the
    transition dipoles; used both for bare systems and for parameters rebuilt
    from a dressed system.
    """
    xi = _xi(xi)
    w = np.asarray(omega)[:, m]
    d = np.asarray(dipoles)
    a = np.einsum("ki,kj->kij", d[m, :], d[:, m])
    alpha = _sym_sum(_lorentz(w, xi), a) / HBAR
    return _finish(alpha, isotropic)


def alpha_bare(system, m, xi):
    """Free polarisability of eigenstate ``m`` at omega = i xi."""
    _check_index(system, m)
    return alpha_from_parameters(system.omega, system.dipoles, m, xi, system.isotropic)


def alpha_transition(system, c, m, xi):
    """Transition polarisability connecting states ``c`` and ``m``.

    Resonance denominators use the midpoint frequencies
    ``(E_k - (E_c + E_m)/2) / hbar``, so ``c == m`` is exactly
    :func:`alpha_bare`.
    """
    _check_index(system, c, m)
    xi = _xi(xi)
    e = system.energies
    w = (e - 0.5 * (e[c] + e[m])) / HBAR
    d = system.dipoles
    a = np.einsum("ki,kj->kij", d[c, :], d[:, m])
    alpha = _sym_sum(_lorentz(w, xi), a) / HBAR
    return _finish(alpha, system.isotropic)


def _sigma_entries(sigma):
    return np.asarray(getattr(sigma, "entries", sigma), dtype=float)


def delta_alpha_wf(system, m, sigma, xi, intermediate=True):
    """First-order polarisability change from self-energy state mixing.

    Each state ``|n>`` acquires the admixture ``Sigma_cn / (E_n - E_c)`` of
    every ``|c>``.  With ``intermediate=False`` only the reference state
    ``|m>`` is mixed; the default also mixes the intermediate states ``|k>``,
    which makes the result the exact linearisation of rebuilding the
    polarisability from first-order dressed dipoles.
    """
    _check_index(system, m)
    xi = _xi(xi)
    s = _sigma_entries(sigma)
    n = system.n_levels
    if s.shape != (n, n):
        raise ValueError(f"self-energy must be {n}x{n}, got {s.shape}")
    e = system.energies
    d = system.dipoles
    w = system.omega[:, m]

    def coeff(c, state):
        if s[c, state] == 0.0:
            return 0.0
        gap = e[state] - e[c]
        if gap == 0.0:
            raise DomainError(f"degenerate mixing between states {c} and {state}")
        return s[c, state] / gap

    b = np.zeros((n, 3, 3))
    for k in range(n):
        for c in range(n):
            if c != m:
                cm = coeff(c, m)
                if cm:
                    # bra side <m~| and its conjugate partner on the ket side |m~>
                    b[k] += cm * (np.outer(d[c, k], d[k, m]) + np.outer(d[m, k], d[k, c]))
            if intermediate and c != k:
                ck = coeff(c, k)
                if ck:
                    b[k] += ck * (np.outer(d[m, c], d[k, m]) + np.outer(d[m, k], d[c, m]))
    alpha = _sym_sum(_lorentz(w, xi), b) / HBAR
    return _finish(alpha, system.isotropic)


def delta_alpha_en(system, m, shifts, xi):
    """First-order polarisability change from transition-frequency shifts.

    ``shifts[k]`` is the shift of omega_km in rad/s.
    """
    _check_index(system, m)
    xi = _xi(xi)
    shifts = np.asarray(shifts, dtype=float)
    if shifts.shape != (system.n_levels,):
        raise ValueError("shifts must hold one entry per level")
    if not np.all(np.isfinite(shifts)):
        raise ValueError("shifts must be finite")
    d = system.dipoles
    w = system.omega[:, m]
    a = np.einsum("ki,kj->kij", d[m, :], d[:, m])
    alpha = -_sym_sum(_lorentz_sq(w, xi) * shifts, a) / HBAR
    return _finish(alpha, system.isotropic)


def frequency_shifts(sigma, m):
    """Shifts (Sigma_kk - Sigma_mm)/hbar of omega_km for every k."""
    s = _sigma_entries(sigma)
    diag = np.diag(s)
    return (diag - diag[m]) / HBAR


def alpha_dressed(system, m, sigma, xi):
    """Bare polarisability plus both first-order self-energy corrections."""
    return (
        alpha_bare(system, m, xi)
        + delta_alpha_wf(system, m, sigma, xi)
        + delta_alpha_en(system, m, frequency_shifts(sigma, m), xi)
    )


@dataclass(frozen=True)
class Response:
    """An xi-resolved polarisability with the frequency scale it lives on."""

    func: Callable[[np.ndarray], np.ndarray]
    omega_max: float = 0.0
    label: str = ""

    def __call__(self, xi):
        return self.func(xi)


def bare_response(system, m=0) -> Response:
    return Response(lambda xi: alpha_bare(system, m, xi), system.omega_max, "bare")


def zero_response() -> Response:
    return Response(lambda xi: np.zeros(np.shape(xi) + (3, 3)), 0.0, "zero")
