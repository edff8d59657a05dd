"""Partner-mediated self-energies, first-order dressing and the solver hierarchy.

The self-energy of particle A in the field scattered by particle B is

    Sigma_cm(r) = -(hbar mu0^2 / 2 pi) int_0^inf dxi xi^4
                  Tr[alpha_A^(cm)(i xi) G(r, i xi) alpha_B(i xi) G(r, i xi)],

built from the transition polarisability ``alpha_A^(cm)``.  Its ground-state
diagonal is the two-body dispersion energy itself.  Only the scattered field
enters; the free-space coincident-point part is taken to be already contained
in the input spectrum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvergenceError, PerturbativeValidityError
from .levels import LevelSystem
from .potential import PREFACTOR, coupling_tensor, default_xi_scale, separation_vector
from .quad import QuadratureSpec, integrate_semi_infinite
from .quantities import HBAR
from .response import Response, alpha_from_parameters, alpha_transition, bare_response

log = logging.getLogger(__name__)

SCHEMES = ("bare", "one-sided", "self-consistent")
MIXING_WARNING = 0.3


@dataclass(frozen=True, eq=False)
class SelfEnergyMatrix:
    """Real symmetric N x N self-energy in J at separation ``r``."""

    entries: np.ndarray
    r: float
    partner: str = ""

    def scaled(self, factor) -> "SelfEnergyMatrix":
        return SelfEnergyMatrix(factor * self.entries, self.r, self.partner)

    @classmethod
    def zero(cls, n, r=np.inf):
        return cls(np.zeros((n, n)), r, "none")


def self_energy_matrix(sys_a: LevelSystem, alpha_b: Callable, r: float,
                       spec: QuadratureSpec | None = None, direction=None,
                       near_field=False, check=True) -> SelfEnergyMatrix:
    """Self-energy matrix of ``sys_a`` in the field scattered by a partner.

    ``alpha_b`` is the partner's xi-resolved polarisability.  All N(N+1)/2
    independent entries are integrated together on one node set.

    Raises
    ------
    PerturbativeValidityError
        If ``check`` and some |Sigma_cm| exceeds the smallest level gap.
    """
    spec = spec or QuadratureSpec()
    r_vec = separation_vector(r, direction)
    n = sys_a.n_levels
    pairs = [(c, m) for c in range(n) for m in range(c, n)]
    live = [p for p in pairs if np.any(sys_a.dipoles[p[0]]) and np.any(sys_a.dipoles[:, p[1]])]
    entries = np.zeros((n, n))
    if live:
        def integrand(xi):
            k = coupling_tensor(alpha_b, r_vec, xi, near_field)
            return np.stack(
                [np.einsum("nij,nji->n", alpha_transition(sys_a, c, m, xi), k) for c, m in live],
                axis=1)

        scale = default_xi_scale(r, sys_a.omega_max, getattr(alpha_b, "omega_max", 0.0))
        res = integrate_semi_infinite(integrand, spec, xi_c=scale)
        for (c, m), v in zip(live, PREFACTOR * res.value):
            entries[c, m] = entries[m, c] = v
    sigma = SelfEnergyMatrix(entries, r, getattr(alpha_b, "label", ""))
    if check:
        gap = sys_a.min_gap()
        worst = np.unravel_index(np.argmax(np.abs(entries)), entries.shape)
        if abs(entries[worst]) > gap:
            raise PerturbativeValidityError(
                f"|Sigma{worst}| = {abs(entries[worst]):.3e} J exceeds the smallest level gap {gap:.3e} J",
                pair=tuple(int(i) for i in worst), value=float(entries[worst]))
    return sigma


@dataclass(frozen=True, eq=False)
class DressedSystem:
    """A level system with first-order environment dressing applied.

    ``frequencies[k, m]`` and ``dipoles[k, m]`` are the dressed omega_km and
    d^{km}; ``mixing[c, m]`` is the admixture of |c> into |m>.
    """

    base: LevelSystem
    sigma: np.ndarray
    frequencies: np.ndarray
    dipoles: np.ndarray
    mixing: np.ndarray
    max_mixing: float
    dipole_ratio_sq: float
    warnings: tuple = ()

    def polarisability(self, xi, m=0):
        """Polarisability of dressed state ``m`` rebuilt from dressed parameters."""
        return alpha_from_parameters(self.frequencies, self.dipoles, m, xi, self.base.isotropic)

    def response(self, m=0) -> Response:
        w = float(np.max(np.abs(self.frequencies)))
        return Response(lambda xi: self.polarisability(xi, m), w, "dressed")

    def same_as(self, other) -> bool:
        """Bitwise equality of every dressed field."""
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("sigma", "frequencies", "dipoles", "mixing")
        ) and self.base == other.base

    @classmethod
    def undressed(cls, system):
        n = system.n_levels
        return dress(system, SelfEnergyMatrix.zero(n))


def dress(system: LevelSystem, sigma) -> DressedSystem:
    """Apply a self-energy to first order in Sigma.

    Mixing ``c_cm = Sigma_cm / (E_m - E_c)`` (c != m), frequencies
    ``omega_km + (Sigma_kk - Sigma_mm)/hbar`` and dipoles
    ``<k~| d |m~>`` with ``|m~> = |m> + sum_c c_cm |c>``.
    """
    s = np.asarray(getattr(sigma, "entries", sigma), dtype=float)
    n = system.n_levels
    e = system.energies
    gap = e[None, :] - e[:, None]  # gap[c, m] = E_m - E_c
    off = ~np.eye(n, dtype=bool)
    mix = np.zeros((n, n))
    mix[off] = s[off] / gap[off]
    worst = np.unravel_index(np.argmax(np.abs(mix)), mix.shape)
    max_mix = float(abs(mix[worst]))
    if max_mix >= 1.0:
        raise PerturbativeValidityError(
            f"perturbative validity exceeded: |c{worst}| = {max_mix:.3g}",
            pair=tuple(int(i) for i in worst), value=max_mix)
    warnings = ()
    if max_mix > MIXING_WARNING:
        warnings = (f"mixing |c{worst}| = {max_mix:.3g} exceeds {MIXING_WARNING}",)
        log.warning(warnings[0])

    diag = np.diag(s)
    frequencies = system.omega + (diag[:, None] - diag[None, :]) / HBAR
    d = system.dipoles
    # d~[k, m] = d[k, m] + sum_c d[k, c] c[c, m] + sum_c c[c, k] d[c, m]
    delta = np.einsum("kci,cm->kmi", d, mix) + np.einsum("ck,cmi->kmi", mix, d)
    dipoles = d + delta

    d01 = float(np.dot(d[0, 1], d[0, 1]))
    ratio = float(np.dot(dipoles[0, 1], dipoles[0, 1])) / d01 if d01 > 0.0 else float("nan")
    return DressedSystem(system, s, frequencies, dipoles, mix, max_mix, ratio, warnings)


@dataclass
class SolveResult:
    scheme: str
    dressed_a: DressedSystem
    dressed_b: DressedSystem
    iterations: int
    residual: float
    history: list = field(default_factory=list)
    trajectory: list = field(default_factory=list)
    damping: float = 1.0

    @property
    def max_mixing(self) -> float:
        return max(self.dressed_a.max_mixing, self.dressed_b.max_mixing)


def _observables(dressed):
    """Dressed omega_k0 and |d~^{k0}| for k >= 1."""
    w = dressed.frequencies[1:, 0]
    d = np.linalg.norm(dressed.dipoles[1:, 0], axis=-1)
    return np.concatenate([w, d])


def _relative_change(new, old):
    a, b = _observables(new), _observables(old)
    diff = np.abs(a - b)
    scale = np.abs(b)
    rel = np.where(scale > 0.0, diff / np.where(scale > 0.0, scale, 1.0), diff)
    return float(np.max(rel)) if rel.size else 0.0


def self_consistent_solve(sys_a: LevelSystem, sys_b: LevelSystem, r: float,
                          scheme: str = "self-consistent", tol: float = 1e-10,
                          max_iter: int = 50, damping: float = 1.0,
                          spec: QuadratureSpec | None = None,
                          direction=None) -> SolveResult:
    """Dress both particles at separation ``r`` with the requested scheme.

    bare
        Both systems returned undressed; zero iterations.
    one-sided
        A is dressed once by the field scattered from bare B; B stays bare.
    self-consistent
        Iterate Sigma_A from B's dressed response and Sigma_B from A's,
        re-dressing the bare systems each time, until the dressed omega_k0
        and |d^{k0}| of both particles change by less than ``tol``
        (relative).  Self-energies are mixed as
        ``(1 - damping) * old + damping * new``; damping drops to 0.5 if the
        residual grows.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` iterations without convergence (carries the
        residual history and the last iterate).
    PerturbativeValidityError
        From :func:`self_energy_matrix` or :func:`dress`.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if not 0.0 < damping <= 1.0:
        raise ValueError("damping must lie in (0, 1]")
    spec = spec or QuadratureSpec()
    bare_a, bare_b = DressedSystem.undressed(sys_a), DressedSystem.undressed(sys_b)

    if scheme == "bare":
        return SolveResult(scheme, bare_a, bare_b, 0, 0.0, damping=damping)

    if scheme == "one-sided":
        sigma_a = self_energy_matrix(sys_a, bare_response(sys_b), r, spec, direction)
        dressed_a = dress(sys_a, sigma_a)
        res = _relative_change(dressed_a, bare_a)
        return SolveResult(scheme, dressed_a, bare_b, 1, res, [res],
                           [(dressed_a, bare_b)], damping)

    eta = damping
    state_a, state_b = bare_a, bare_b
    resp_a, resp_b = bare_response(sys_a), bare_response(sys_b)
    sig_a = np.zeros((sys_a.n_levels,) * 2)
    sig_b = np.zeros((sys_b.n_levels,) * 2)
    history, trajectory = [], []
    for it in range(1, max_iter + 1):
        cand_a = self_energy_matrix(sys_a, resp_b, r, spec, direction).entries
        cand_b = self_energy_matrix(sys_b, resp_a, r, spec, direction).entries
        if eta == 1.0:
            sig_a, sig_b = cand_a, cand_b
        else:
            sig_a = (1.0 - eta) * sig_a + eta * cand_a
            sig_b = (1.0 - eta) * sig_b + eta * cand_b
        new_a = dress(sys_a, SelfEnergyMatrix(sig_a, r, "dressed partner"))
        new_b = dress(sys_b, SelfEnergyMatrix(sig_b, r, "dressed partner"))
        residual = max(_relative_change(new_a, state_a), _relative_change(new_b, state_b))
        if history and residual > history[-1] and eta > 0.5:
            log.info("residual grew at iteration %d; damping -> 0.5", it)
            eta = 0.5
        history.append(residual)
        trajectory.append((new_a, new_b))
        state_a, state_b = new_a, new_b
        resp_a, resp_b = new_a.response(), new_b.response()
        if residual < tol:
            return SolveResult(scheme, state_a, state_b, it, residual, history, trajectory, eta)
    result = SolveResult(scheme, state_a, state_b, max_iter, history[-1], history, trajectory, eta)
    raise ConvergenceError(
        f"self-consistent iteration not converged after {max_iter} iterations "
        f"(residual {history[-1]:.3e}, tol {tol:.1e})", history, result)
