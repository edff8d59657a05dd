"""Few-level emitter models.

A :class:`LevelSystem` holds a discrete, non-degenerate spectrum (energies in
J, ground state at zero) and the real transition-dipole matrix ``d[n, m]``
(3-vectors in C m).  Isotropic systems keep their dipoles along a common
molecular axis; every response tensor built from them is orientation
averaged as a whole (``Tr(alpha)/3 * I``), which is what a freely rotating
particle sees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .quantities import DEBYE, EV, HBAR

DEFAULT_AXIS = np.array([0.0, 0.0, 1.0])


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LevelSystem:
    """Discrete internal spectrum plus transition dipoles.

    Attributes
    ----------
    energies : ndarray, shape (N,)
        Level energies E_n in J; E_0 = 0 for a valid system.
    dipoles : ndarray, shape (N, N, 3)
        ``dipoles[n, m]`` is the transition dipole d^{nm} in C m.
    isotropic : bool
        Orientation-average every response tensor built from this system.
    label : str
        Free-form name.
    """

    energies: np.ndarray
    dipoles: np.ndarray
    isotropic: bool = True
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "energies", _frozen(self.energies))
        object.__setattr__(self, "dipoles", _frozen(self.dipoles))

    @classmethod
    def from_units(cls, energies_ev, transitions, isotropic=True, label="",
                   directions=None):
        """Build a system from eV energies and Debye dipole magnitudes.

        ``transitions`` maps index pairs ``(n, m)`` to |d^{nm}| in Debye.
        Every dipole points along +z unless ``directions`` gives a vector for
        that pair.  The matrix is filled symmetrically.
        """
        energies = np.asarray(energies_ev, dtype=float) * EV
        n = energies.size
        dipoles = np.zeros((n, n, 3))
        directions = directions or {}
        for (a, b), magnitude in transitions.items():
            u = np.asarray(directions.get((a, b), DEFAULT_AXIS), dtype=float)
            u = u / np.linalg.norm(u)
            dipoles[a, b] = dipoles[b, a] = magnitude * DEBYE * u
        return cls(energies, dipoles, isotropic=isotropic, label=label)

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @property
    def omega(self) -> np.ndarray:
        """Transition frequencies ``omega[k, m] = (E_k - E_m) / hbar``."""
        e = self.energies
        return (e[:, None] - e[None, :]) / HBAR

    @property
    def omega_max(self) -> float:
        return float(np.max(np.abs(self.omega)))

    def min_gap(self) -> float:
        """Smallest separation between adjacent levels, in J."""
        return float(np.min(np.diff(self.energies)))

    def excitation_gap(self) -> float:
        """Lowest excitation energy E_1 - E_0, in J."""
        return float(self.energies[1] - self.energies[0])

    def dipole_magnitudes(self) -> np.ndarray:
        return np.linalg.norm(self.dipoles, axis=-1)

    def __eq__(self, other):
        if not isinstance(other, LevelSystem):
            return NotImplemented
        return (
            self.isotropic == other.isotropic
            and self.label == other.label
            and self.energies.shape == other.energies.shape
            and np.array_equal(self.energies, other.energies)
            and np.array_equal(self.dipoles, other.dipoles)
        )

    __hash__ = None

    def isclose(self, other, rtol=1e-14) -> bool:
        """Field-wise comparison up to floating-point round-off."""
        if self.energies.shape != other.energies.shape:
            return False
        scale_d = max(float(np.max(np.abs(self.dipoles))), 1e-300)
        scale_e = max(float(np.max(np.abs(self.energies))), 1e-300)
        return (
            self.isotropic == other.isotropic
            and self.label == other.label
            and np.allclose(self.energies, other.energies, rtol=rtol, atol=rtol * scale_e)
            and np.allclose(self.dipoles, other.dipoles, rtol=rtol, atol=rtol * scale_d)
        )


class Violation(NamedTuple):
    invariant: str
    indices: tuple
    message: str


def validate(system: LevelSystem) -> list[Violation]:
    """Check every LevelSystem invariant; an empty list means valid."""
    out: list[Violation] = []
    e = system.energies
    d = system.dipoles
    n = e.size
    if e.ndim != 1 or n < 2:
        return [Violation("level count", (), f"need at least 2 levels, got {n}")]
    if d.shape != (n, n, 3):
        return [Violation("dipole shape", (), f"dipoles must have shape {(n, n, 3)}, got {d.shape}")]
    if not (np.all(np.isfinite(e)) and np.all(np.isfinite(d))):
        out.append(Violation("finite values", (), "energies and dipoles must be finite"))
        return out
    if e[0] != 0.0:
        out.append(Violation("ground energy", (0,), f"E_0 must be 0, got {e[0]!r} J"))
    for i in range(n - 1):
        if not e[i + 1] - e[i] > 0.0:
            out.append(Violation(
                "non-degenerate energies", (i, i + 1),
                f"levels {i} and {i + 1} are not strictly increasing"))
    for i in range(n):
        if np.any(d[i, i] != 0.0):
            out.append(Violation(
                "no permanent dipoles", (i, i), f"diagonal dipole d^{{{i}{i}}} must vanish"))
        for j in range(i + 1, n):
            if np.any(d[i, j] != d[j, i]):
                out.append(Violation(
                    "Hermiticity", (i, j), f"d^{{{i}{j}}} != d^{{{j}{i}}}"))
    w = system.omega
    if not np.array_equal(w, -w.T):
        out.append(Violation("frequency antisymmetry", (), "omega_km != -omega_mk"))
    return out


def three_level_default() -> LevelSystem:
    """Reference three-level emitter: 2.0 / 3.0 eV levels, 3.0 / 2.2 / 1.0 D."""
    return LevelSystem.from_units(
        [0.0, 2.0, 3.0],
        {(0, 1): 3.0, (0, 2): 2.2, (1, 2): 1.0},
        isotropic=True,
        label="three-level",
    )


def two_level(energy_ev=2.0, dipole_debye=3.0, isotropic=True) -> LevelSystem:
    return LevelSystem.from_units(
        [0.0, energy_ev], {(0, 1): dipole_debye}, isotropic=isotropic, label="two-level")
