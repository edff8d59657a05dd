"""Command-line entry point: ``dressedvdw --config run.json``.

Exit codes: 0 success, 1 config or usage error, 2 some points not ok.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace

from .config import SCHEME_CHOICES, SPACINGS, load_config, make_solver, make_sweep
from .errors import ConfigError
from .quantities import EV, NM
from .sweep import SweepResult, run_sweep, summarize

HEADER = ("r_nm", "scheme", "U_eV", "C6_eff_eVnm6", "C6_ratio",
          "dipole_ratio_sq", "max_mixing", "iterations", "status")
HEADER_SI = ("r_m", "scheme", "U_J", "C6_eff_Jm6", "C6_ratio",
             "dipole_ratio_sq", "max_mixing", "iterations", "status")


def _num(x):
    return repr(float(x))


def _row_values(p, si):
    if si:
        r, u = p.r, p.U
    else:
        r, u = p.r / NM, p.U / EV
    # C6 from the emitted fields so the file is self-consistent bit for bit
    c6 = -u * r**6
    return [r, p.scheme, u, c6, p.C6_ratio, p.dipole_ratio_sq, p.max_mixing, p.iterations, p.status]


def emit_csv(result: SweepResult, stream, si=False):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER_SI if si else HEADER)
    for p in result.rows:
        vals = _row_values(p, si)
        writer.writerow([v if isinstance(v, (str, int)) else _num(v) for v in vals])


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def emit_json(result: SweepResult, stream, si=False):
    keys = HEADER_SI if si else HEADER
    rows = [{k: _json_safe(v) for k, v in zip(keys, _row_values(p, si))} for p in result.rows]
    json.dump({"metadata": result.metadata, "rows": rows}, stream, indent=2)
    stream.write("\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dressedvdw",
        description="Van der Waals interaction of two few-level emitters with "
                    "bare, one-sided and self-consistent radiative dressing.")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--scheme", choices=SCHEME_CHOICES)
    p.add_argument("--rmin-nm", type=float)
    p.add_argument("--rmax-nm", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--spacing", choices=SPACINGS)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--damping", type=float)
    p.add_argument("--workers", type=int, default=1, help="worker processes for the sweep")
    p.add_argument("--si", action="store_true", help="emit SI units (m, J, J m^6)")
    p.add_argument("--quiet", action="store_true", help="suppress the summary lines")
    return p


def _apply_overrides(config, args):
    sw, so = config.sweep, config.solver
    sweep = make_sweep(
        args.rmin_nm if args.rmin_nm is not None else sw.r_min_nm,
        args.rmax_nm if args.rmax_nm is not None else sw.r_max_nm,
        args.points if args.points is not None else sw.points,
        args.spacing or sw.spacing,
    )
    solver = make_solver(
        args.scheme or so.scheme,
        args.tol if args.tol is not None else so.tol,
        args.max_iter if args.max_iter is not None else so.max_iter,
        args.damping if args.damping is not None else so.damping,
    )
    return replace(config, sweep=sweep, solver=solver)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        config = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"dressedvdw: config error: {exc}", file=sys.stderr)
        return 1
    if args.workers < 1:
        print("dressedvdw: --workers must be >= 1", file=sys.stderr)
        return 1

    result = run_sweep(config, workers=args.workers)
    emit = emit_json if args.format == "json" else emit_csv
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                emit(result, fh, si=args.si)
        except OSError as exc:
            print(f"dressedvdw: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return 1
    else:
        emit(result, sys.stdout, si=args.si)
    if not args.quiet:
        for line in summarize(result):
            print(line, file=sys.stderr)
    return 0 if all(p.status == "ok" for p in result.rows) else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
