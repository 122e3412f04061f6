"""Command-line front end.

Subcommands: ``algebra-check``, ``casimir``, ``classify``, ``simulate``,
``compare`` and ``defaults``. Every command exits 0 iff all its enabled
checks pass.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import checks
from .casimir_orbits import ChartError, chart_project, classify, eval_casimirs, kernel_residual
from .config import FIELD_TYPES, SEED_ENV, ConfigError, RunConfig, load_config
from .extended_phase import moment_map
from .lie_core import BASIS
from .lorentz_sim import equivalence_report, integrate_lorentz
from .orbit_dynamics import IntegrationError, orbit_flow
from .report import CheckResult, all_passed, format_float, format_report, write_csv

LORENTZ_COLUMNS = ("t", "x", "y", "Px", "Py", "Ex", "Ey", "pix", "piy", "B", "beta", "H", "vx", "vy")
ORBIT_COLUMNS = ("t", "Ex", "Ey", "Px", "Py", "Kx", "Ky", "H", "C0", "C1", "C2")
MOMENT_COLUMNS = ("t",) + BASIS + ("Px_closed", "Py_closed", "Kx_closed", "Ky_closed")

ENERGY_TOL = 1e-9
ORBIT_TOL = 1e-8
CASIMIR_TOL = 1e-9


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _emit(results, out=None) -> int:
    text = format_report(results)
    sys.stdout.write(text)
    if out is not None:
        Path(out).write_text(text)
    return 0 if all_passed(results) else 1


def cmd_algebra_check(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    return _emit(checks.algebra_suite(seed, args.samples, corrupt=args.corrupt_constants))


def _xi(values):
    xi = np.array(values, dtype=float)
    if xi.shape != (9,):
        raise SystemExit("expected 9 coalgebra coordinates (B Ex Ey H Px Py Kx Ky J)")
    return xi


def cmd_casimir(args) -> int:
    xi = _xi(args.xi)
    cas = eval_casimirs(xi, args.c)
    cls = classify(xi, args.c, args.tol)
    res = kernel_residual(xi, args.c)
    print(f"C0 {format_float(cas.C0)}")
    print(f"C1 {format_float(cas.C1)}")
    print(f"C2 {format_float(cas.C2)}")
    print(f"class {cls.tag}")
    scale = 1.0 + xi @ xi
    results = [CheckResult(f"kernel_C{k}", float(r / scale), checks.KERNEL_TOL) for k, r in enumerate(res)]
    return _emit(results)


def cmd_classify(args) -> int:
    xi = _xi(args.xi)
    cls = classify(xi, args.c, args.tol)
    print(f"class {cls.tag}")
    print(f"family {cls.family}")
    print(f"sign {cls.sign}")
    print(f"chart_valid {'true' if cls.chart_valid else 'false'}")
    return 0


def _config_from_args(args) -> RunConfig:
    overrides = {k: v for k in FIELD_TYPES if (v := getattr(args, k, None)) is not None}
    return load_config(args.config, overrides)


def run_simulation(cfg: RunConfig, mode: str, outdir: Path) -> list[CheckResult]:
    """Run one simulation mode, write its CSV files and return the checks."""
    outdir.mkdir(parents=True, exist_ok=True)
    pp = cfg.particle
    s0 = cfg.initial_state
    results: list[CheckResult] = []

    if mode in ("lorentz", "compare"):
        traj = integrate_lorentz(s0, pp, cfg.t_end, cfg.integrator)
        rows = np.column_stack([traj.t, traj.states, traj.energy(), traj.velocities()])
        write_csv(outdir / "lorentz.csv", LORENTZ_COLUMNS, rows)
        v = traj.velocities()
        if cfg.check_energy:
            results.append(CheckResult("energy_drift", traj.diagnostics["energy_drift"], ENERGY_TOL))
        results.append(CheckResult("speed_bound", float(np.max(np.sum(v * v, axis=1))) / cfg.c**2, 1.0))
        results.append(CheckResult("field_drift", traj.diagnostics["field_drift"], 0.0))

    if mode in ("orbit", "compare"):
        p0 = chart_project(moment_map(s0.at_time(0.0), pp), cfg.c)
        orb = orbit_flow(p0, cfg.t_end, cfg.integrator, cfg.c)
        C = orb.casimir_series()
        rows = np.column_stack([orb.t, orb.numeric, orb.hamiltonian(), C])
        write_csv(outdir / "orbit.csv", ORBIT_COLUMNS, rows)
        results.append(CheckResult("orbit_closed_form", orb.max_deviation, ORBIT_TOL))
        if cfg.check_energy:
            results.append(CheckResult("orbit_hamiltonian_drift", orb.diagnostics["hamiltonian_drift"], CASIMIR_TOL))
        if cfg.check_casimirs:
            results.append(CheckResult("orbit_casimir_drift", orb.diagnostics["casimir_drift"], CASIMIR_TOL))

    if mode == "compare":
        xi = traj.moments(frozen_time=True)
        exact = orb.exact
        rows = np.column_stack([traj.t, xi, exact[:, 2:6]])
        write_csv(outdir / "moments.csv", MOMENT_COLUMNS, rows)
        if cfg.check_equivalence:
            rep = equivalence_report(traj)
            results.append(CheckResult("equivalence_orbit", rep.orbit_deviation, cfg.threshold))
            results.append(CheckResult("equivalence_conserved", rep.conserved_drift, cfg.threshold))
            results.append(CheckResult("equivalence_moment_map", rep.moment_drift, cfg.threshold))
            if cfg.check_casimirs:
                results.append(CheckResult("equivalence_casimirs", rep.casimir_drift, cfg.threshold))
    return results


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    mode = getattr(args, "mode", "compare")
    outdir = Path(args.out)
    try:
        results = run_simulation(cfg, mode, outdir)
    except (ChartError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _emit(results, outdir / "report.txt")


def cmd_defaults(args) -> int:
    sys.stdout.write(RunConfig().to_text())
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", default=".", help="output directory for CSV files and report")
    group = p.add_argument_group("config overrides")
    for key in FIELD_TYPES:
        group.add_argument(f"--{key}", dest=key, metavar="VALUE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pm21", description="Poincare-Maxwell group PM(2+1) toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra-check", help="structure constants, exponentials, coadjoint action")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--corrupt-constants", action="store_true", help="negative control: perturb [Kx, Ky]")
    p.set_defaults(func=cmd_algebra_check)

    for name, func in (("casimir", cmd_casimir), ("classify", cmd_classify)):
        p = sub.add_parser(name, help=f"{name} of a coalgebra point B Ex Ey H Px Py Kx Ky J")
        p.add_argument("xi", nargs=9, type=float)
        p.add_argument("--c", type=float, default=1.0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="integrate and write CSV trajectories")
    p.add_argument("--mode", choices=("lorentz", "orbit", "compare"), default="lorentz")
    _add_run_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="simulate --mode compare")
    _add_run_options(p)
    p.set_defaults(func=cmd_simulate, mode="compare")

    p = sub.add_parser("defaults", help="print the default configuration")
    p.set_defaults(func=cmd_defaults)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
