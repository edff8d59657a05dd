"""Physical constants (CODATA 2018) and unit conversions.

All internal computations are in SI. User-facing quantities are given in
eV, Debye and nm and converted at the boundary with the helpers below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    c: float = 299792458.0  # m / s
    eps0: float = 8.8541878128e-12  # C^2 J^-1 m^-1
    mu0: float = 1.25663706212e-6  # N A^-2
    debye: float = 3.335640952e-30  # C m
    electronvolt: float = 1.602176634e-19  # J


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
C = CONSTANTS.c
EPS0 = CONSTANTS.eps0
MU0 = CONSTANTS.mu0
DEBYE = CONSTANTS.debye
EV = CONSTANTS.electronvolt
NM = 1e-9

FOUR_PI_EPS0 = 4.0 * math.pi * EPS0


def energy_to_angular_frequency(energy_ev):
    """Convert an energy in eV to an angular frequency in rad/s."""
    return energy_ev * EV / HBAR


def angular_frequency_to_energy(omega):
    """Convert an angular frequency in rad/s to an energy in eV."""
    return omega * HBAR / EV


def ev_to_joule(energy_ev):
    return energy_ev * EV


def joule_to_ev(energy):
    return energy / EV


def dipole_to_si(d_debye):
    """Convert a dipole moment from Debye to C m."""
    return d_debye * DEBYE


def dipole_to_debye(d):
    return d / DEBYE


def nm_to_m(length_nm):
    return length_nm * NM


def m_to_nm(length):
    return length / NM
