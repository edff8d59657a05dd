"""Separation sweeps over the three approximation schemes."""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .backaction import SCHEMES, self_consistent_solve
from .config import RunConfig, serialize
from .errors import ConvergenceError, PerturbativeValidityError, QuadratureError
from .potential import c6_eff, vdw_potential
from .quantities import CONSTANTS
from .response import bare_response

NAN = float("nan")


@dataclass(frozen=True)
class PotentialPoint:
    """One (r, scheme) row.

    ``C6_ratio`` is ``U / U_bare`` at the same separation, i.e. the effective
    coefficient relative to the bare free-space interaction including
    retardation.
    """

    r: float
    scheme: str
    U: float
    C6_eff: float
    C6_ratio: float
    dipole_ratio_sq: float
    iterations: int
    max_mixing: float
    status: str = "ok"


@dataclass
class SweepResult:
    rows: list
    metadata: dict = field(default_factory=dict)

    def by_scheme(self, scheme) -> list:
        return [p for p in self.rows if p.scheme == scheme]


def _failed(r, scheme, status):
    return PotentialPoint(r, scheme, NAN, NAN, NAN, NAN, 0, NAN, status)


def evaluate_separation(config: RunConfig, r: float, schemes=None) -> list:
    """Rows for every requested scheme at one separation, in canonical order."""
    schemes = schemes or config.solver.schemes
    spec = config.quadrature
    solver = config.solver
    a, b = config.system_a, config.system_b
    resp_a, resp_b = bare_response(a), bare_response(b)
    try:
        u_bare = vdw_potential(resp_a, resp_b, r, spec)
    except QuadratureError:
        return [_failed(r, s, "quadrature-failed") for s in SCHEMES if s in schemes]

    rows = []
    for scheme in SCHEMES:
        if scheme not in schemes:
            continue
        if scheme == "bare":
            rows.append(PotentialPoint(r, scheme, u_bare, c6_eff(u_bare, r), 1.0, 1.0, 0, 0.0))
            continue
        status = "ok"
        try:
            res = self_consistent_solve(a, b, r, scheme, solver.tol, solver.max_iter,
                                        solver.damping, spec)
        except ConvergenceError as exc:
            res, status = exc.result, "non-converged"
        except PerturbativeValidityError:
            rows.append(_failed(r, scheme, "invalid"))
            continue
        except QuadratureError:
            rows.append(_failed(r, scheme, "quadrature-failed"))
            continue
        partner = res.dressed_b.response() if scheme == "self-consistent" else resp_b
        try:
            u = vdw_potential(res.dressed_a.response(), partner, r, spec)
        except QuadratureError:
            rows.append(_failed(r, scheme, "quadrature-failed"))
            continue
        rows.append(PotentialPoint(
            r, scheme, u, c6_eff(u, r), u / u_bare, res.dressed_a.dipole_ratio_sq,
            res.iterations, res.max_mixing, status))
    return rows


def _worker(args):
    config, r = args
    return evaluate_separation(config, r)


def run_sweep(config: RunConfig, workers: int = 1) -> SweepResult:
    """Evaluate the configured sweep; rows ordered by (r, scheme).

    Points are independent, so ``workers > 1`` farms them out to processes.
    Output does not depend on the worker count.
    """
    t0 = time.perf_counter()
    radii = [float(r) for r in config.sweep.separations()]
    if workers > 1 and len(radii) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_worker, [(config, r) for r in radii],
                                   chunksize=max(1, len(radii) // (4 * workers))))
    else:
        chunks = [evaluate_separation(config, r) for r in radii]
    rows = [row for chunk in chunks for row in chunk]
    text = serialize(config)
    metadata = {
        "config_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "constants": asdict(CONSTANTS),
        "quadrature": asdict(config.quadrature),
        "solver": asdict(config.solver),
        "wall_time_s": time.perf_counter() - t0,
    }
    return SweepResult(rows, metadata)


def summarize(result: SweepResult) -> list:
    """One line per scheme: C6_ratio range, r range and failure count."""
    lines = []
    for scheme in SCHEMES:
        rows = result.by_scheme(scheme)
        if not rows:
            continue
        ok = [p for p in rows if p.status == "ok" and math.isfinite(p.C6_ratio)]
        bad = len(rows) - len(ok)
        if ok:
            lo = min(p.C6_ratio for p in ok)
            hi = max(p.C6_ratio for p in ok)
            lines.append(
                f"{scheme}: C6_ratio in [{lo:.6g}, {hi:.6g}] over r = "
                f"{rows[0].r * 1e9:.4g}-{rows[-1].r * 1e9:.4g} nm ({len(ok)} ok, {bad} failed)")
        else:
            lines.append(f"{scheme}: no converged points ({bad} failed)")
    return lines
