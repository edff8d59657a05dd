"""JSON run configuration: emitter pair, separation sweep and solver settings.

Schema (unknown keys are rejected at every level)::

    {
      "system": {
        "label": "three-level",                      # optional
        "states": [{"energy_eV": 0.0}, {"energy_eV": 2.0}, ...],
        "dipoles": [{"from": 0, "to": 1, "magnitude_D": 3.0,
                     "direction": [0, 0, 1]}, ...],  # direction optional
        "isotropic": true
      },
      "particle_B": "same_as_A",                     # or a full system block
      "sweep": {"r_min_nm": 0.3, "r_max_nm": 30.0, "points": 200, "spacing": "log"},
      "solver": {"scheme": "all", "tol": 1e-10, "max_iter": 50, "damping": 1.0},
      "quadrature": {"rel_tol": 1e-8, "initial_nodes": 64, "max_nodes": 4096}
    }

Only ``system`` is required; the other blocks fall back to the defaults
shown.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError
from .levels import DEFAULT_AXIS, LevelSystem, validate
from .quad import QuadratureSpec
from .quantities import DEBYE, EV, NM

SAME_AS_A = "same_as_A"
SCHEME_CHOICES = ("bare", "one-sided", "self-consistent", "all")
SPACINGS = ("log", "linear")


@dataclass(frozen=True)
class SweepSettings:
    r_min_nm: float = 0.3
    r_max_nm: float = 30.0
    points: int = 200
    spacing: str = "log"

    def separations(self) -> np.ndarray:
        """Separations in m, ascending."""
        lo, hi = self.r_min_nm * NM, self.r_max_nm * NM
        if self.points == 1:
            return np.array([lo])
        if self.spacing == "log":
            return np.geomspace(lo, hi, self.points)
        return np.linspace(lo, hi, self.points)


@dataclass(frozen=True)
class SolverSettings:
    scheme: str = "all"
    tol: float = 1e-10
    max_iter: int = 50
    damping: float = 1.0

    @property
    def schemes(self) -> tuple:
        if self.scheme == "all":
            return ("bare", "one-sided", "self-consistent")
        return (self.scheme,)


@dataclass(frozen=True, eq=False)
class RunConfig:
    system_a: LevelSystem
    system_b: LevelSystem
    sweep: SweepSettings = field(default_factory=SweepSettings)
    solver: SolverSettings = field(default_factory=SolverSettings)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    identical: bool = True


def _check_keys(block, allowed, required, where):
    if not isinstance(block, dict):
        raise ConfigError("expected an object", where)
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown field {key!r}", where)
    for key in required:
        if key not in block:
            raise ConfigError(f"missing required field {key!r}", where)


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", where)
    if integer and not (isinstance(value, int) or float(value).is_integer()):
        raise ConfigError(f"expected an integer, got {value!r}", where)
    if not math.isfinite(value):
        raise ConfigError("value must be finite", where)
    return int(value) if integer else float(value)


def _parse_system(block, where) -> LevelSystem:
    _check_keys(block, {"label", "states", "dipoles", "isotropic"}, ("states",), where)
    states = block["states"]
    if not isinstance(states, list) or len(states) < 2:
        raise ConfigError("'states' must list at least two levels", where)
    energies = []
    for i, st in enumerate(states):
        loc = f"{where}.states[{i}]"
        _check_keys(st, {"energy_eV"}, ("energy_eV",), loc)
        energies.append(_number(st["energy_eV"], f"{loc}.energy_eV"))
    n = len(energies)
    transitions, directions = {}, {}
    dip_block = block.get("dipoles", [])
    if not isinstance(dip_block, list):
        raise ConfigError("'dipoles' must be a list", where)
    for i, dp in enumerate(dip_block):
        loc = f"{where}.dipoles[{i}]"
        _check_keys(dp, {"from", "to", "magnitude_D", "direction"}, ("from", "to", "magnitude_D"), loc)
        a = _number(dp["from"], f"{loc}.from", integer=True)
        b = _number(dp["to"], f"{loc}.to", integer=True)
        mag = _number(dp["magnitude_D"], f"{loc}.magnitude_D")
        if not (0 <= a < n and 0 <= b < n):
            raise ConfigError(f"state index out of range for {n} levels", loc)
        if a == b:
            raise ConfigError("permanent dipoles (from == to) are not supported", loc)
        if mag < 0.0:
            raise ConfigError("magnitude_D must be >= 0", f"{loc}.magnitude_D")
        key = (min(a, b), max(a, b))
        if key in transitions:
            raise ConfigError(f"duplicate transition {key}", loc)
        transitions[key] = mag
        if "direction" in dp:
            u = dp["direction"]
            if not (isinstance(u, list) and len(u) == 3):
                raise ConfigError("direction must be a 3-vector", f"{loc}.direction")
            u = [_number(x, f"{loc}.direction") for x in u]
            if not any(u):
                raise ConfigError("direction must be non-zero", f"{loc}.direction")
            directions[key] = u
    isotropic = block.get("isotropic", True)
    if not isinstance(isotropic, bool):
        raise ConfigError("'isotropic' must be true or false", where)
    label = block.get("label", "")
    if not isinstance(label, str):
        raise ConfigError("'label' must be a string", where)
    system = LevelSystem.from_units(energies, transitions, isotropic, label, directions)
    problems = validate(system)
    if problems:
        details = "; ".join(f"{v.invariant} {v.indices}: {v.message}" for v in problems)
        raise ConfigError(f"invalid level system: {details}", where)
    return system


def _parse_sweep(block) -> SweepSettings:
    where = "sweep"
    _check_keys(block, {"r_min_nm", "r_max_nm", "points", "spacing"}, (), where)
    d = SweepSettings()
    r_min = _number(block.get("r_min_nm", d.r_min_nm), f"{where}.r_min_nm")
    r_max = _number(block.get("r_max_nm", d.r_max_nm), f"{where}.r_max_nm")
    points = _number(block.get("points", d.points), f"{where}.points", integer=True)
    spacing = block.get("spacing", d.spacing)
    return make_sweep(r_min, r_max, points, spacing)


def make_sweep(r_min_nm, r_max_nm, points, spacing) -> SweepSettings:
    if not 0.0 < r_min_nm <= r_max_nm:
        raise ConfigError("need 0 < r_min_nm <= r_max_nm", "sweep")
    if points < 1:
        raise ConfigError("points must be >= 1", "sweep.points")
    if spacing not in SPACINGS:
        raise ConfigError(f"spacing must be one of {SPACINGS}", "sweep.spacing")
    return SweepSettings(float(r_min_nm), float(r_max_nm), int(points), spacing)


def _parse_solver(block) -> SolverSettings:
    where = "solver"
    _check_keys(block, {"scheme", "tol", "max_iter", "damping"}, (), where)
    d = SolverSettings()
    return make_solver(
        block.get("scheme", d.scheme),
        _number(block.get("tol", d.tol), f"{where}.tol"),
        _number(block.get("max_iter", d.max_iter), f"{where}.max_iter", integer=True),
        _number(block.get("damping", d.damping), f"{where}.damping"),
    )


def make_solver(scheme, tol, max_iter, damping) -> SolverSettings:
    if scheme not in SCHEME_CHOICES:
        raise ConfigError(f"scheme must be one of {SCHEME_CHOICES}", "solver.scheme")
    if not tol > 0.0:
        raise ConfigError("tol must be positive", "solver.tol")
    if max_iter < 1:
        raise ConfigError("max_iter must be >= 1", "solver.max_iter")
    if not 0.0 < damping <= 1.0:
        raise ConfigError("damping must lie in (0, 1]", "solver.damping")
    return SolverSettings(scheme, float(tol), int(max_iter), float(damping))


def _parse_quadrature(block) -> QuadratureSpec:
    where = "quadrature"
    _check_keys(block, {"rel_tol", "initial_nodes", "max_nodes"}, (), where)
    d = QuadratureSpec()
    try:
        return QuadratureSpec(
            rel_tol=_number(block.get("rel_tol", d.rel_tol), f"{where}.rel_tol"),
            initial_nodes=_number(block.get("initial_nodes", d.initial_nodes),
                                  f"{where}.initial_nodes", integer=True),
            max_nodes=_number(block.get("max_nodes", d.max_nodes), f"{where}.max_nodes", integer=True),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), where) from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration document.

    Raises
    ------
    ConfigError
        On JSON syntax errors (with line and column), schema violations
        (naming the offending field) or invalid level systems.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"syntax error: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    _check_keys(doc, {"system", "particle_B", "sweep", "solver", "quadrature"}, ("system",), "document")
    sys_a = _parse_system(doc["system"], "system")
    b_block = doc.get("particle_B", SAME_AS_A)
    if b_block == SAME_AS_A:
        sys_b, identical = sys_a, True
    elif isinstance(b_block, dict):
        sys_b, identical = _parse_system(b_block, "particle_B"), False
    else:
        raise ConfigError(f"expected {SAME_AS_A!r} or a system block", "particle_B")
    return RunConfig(
        sys_a, sys_b,
        sweep=_parse_sweep(doc.get("sweep", {})),
        solver=_parse_solver(doc.get("solver", {})),
        quadrature=_parse_quadrature(doc.get("quadrature", {})),
        identical=identical,
    )


def system_to_dict(system: LevelSystem) -> dict:
    n = system.n_levels
    dipoles = []
    for a in range(n):
        for b in range(a + 1, n):
            vec = system.dipoles[a, b]
            peak = float(np.max(np.abs(vec)))
            if peak == 0.0:
                continue
            # rescaled so tiny magnitudes do not underflow when squared
            mag = peak * float(np.linalg.norm(vec / peak))
            entry = {"from": a, "to": b, "magnitude_D": mag / DEBYE}
            u = vec / mag
            if not np.allclose(u, DEFAULT_AXIS, rtol=0.0, atol=1e-15):
                entry["direction"] = [float(x) for x in u]
            dipoles.append(entry)
    out = {
        "states": [{"energy_eV": float(e) / EV} for e in system.energies],
        "dipoles": dipoles,
        "isotropic": bool(system.isotropic),
    }
    if system.label:
        out = {"label": system.label, **out}
    return out


def serialize(config: RunConfig) -> str:
    """Inverse of :func:`parse_config` (JSON text)."""
    q = config.quadrature
    doc = {
        "system": system_to_dict(config.system_a),
        "particle_B": SAME_AS_A if config.identical else system_to_dict(config.system_b),
        "sweep": asdict(config.sweep),
        "solver": asdict(config.solver),
        "quadrature": {"rel_tol": q.rel_tol, "initial_nodes": q.initial_nodes,
                       "max_nodes": q.max_nodes},
    }
    return json.dumps(doc, indent=2)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc.strerror}", str(path)) from None
    return parse_config(text)
