"""Command line entry point: ``solve``, ``check`` and ``invariants``."""
import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .config import load_config
from .dirset import slab_quadrature, waveguide_modes
from .errors import ParseError, SolverError, ValidationError
from .invariants import Check, normalization_check, quadrature_checks, solution_checks
from .qb import qb_gen_fun, qb_residual, qb_solve
from .ray import Grid
from .saddle1d import Profile1D, solve_1d
from .sc import SolveSettings, Transport, solve
from .spectrum import CSV_HEADER, scan, t_grid, table_from_points

QFIELD_HEADER = ("x_over_lambda", "Q11_re", "Q11_im", "Q12_re", "Q12_im", "Q21_re", "Q21_im")
REFERENCE_T = 0.5


def direction_set(cfg):
    if cfg.mode == "waveguide" or (cfg.mode == "quasiballistic" and cfg.W_over_lambda is not None):
        return waveguide_modes(cfg.d, cfg.W_over_lambda, drop_cutoff=cfg.drop_cutoff_modes)
    return slab_quadrature(cfg.d, cfg.N_mu, cfg.contour_a)


def settings_of(cfg):
    return SolveSettings(tol=cfg.tol, max_iter=cfg.max_iter, mixing=cfg.mixing, eta=cfg.eta)


def grid_of(cfg):
    return t_grid(cfg.T_count, cfg.T_grid, cfg.T_min, cfg.T_max, cfg.T_power)


def profile_of(cfg):
    L = cfg.L_over_lambda
    return Profile1D(L=L, L_over_ell=cfg.L_over_ell, varsigma=cfg.varsigma_over_L * L,
                     gamma_a=complex(cfg.gamma_a_re, cfg.gamma_a_im),
                     gamma_b=complex(cfg.gamma_b_re, cfg.gamma_b_im),
                     points_per_wavelength=cfg.points_per_wavelength,
                     padding=cfg.padding_over_lambda, obstacle_gamma0=cfg.obstacle_gamma0,
                     obstacle_sigma=cfg.obstacle_sigma_over_L * L,
                     obstacle_x0=cfg.obstacle_x0_over_L * L)


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_spectrum(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in table.rows():
            w.writerow([_fmt(v) for v in row])


def write_qfield(x, Q, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(QFIELD_HEADER)
        for xi, q in zip(x, Q):
            w.writerow([_fmt(v) for v in (xi, q[0, 0].real, q[0, 0].imag, q[0, 1].real,
                                          q[0, 1].imag, q[1, 0].real, q[1, 0].imag)])


def qb_scan(cfg, dset):
    T = grid_of(cfg)
    out = []
    for t in T:
        gamma = 1 / t + 1j * cfg.eta
        try:
            st = qb_solve(dset, cfg.L_over_ell, gamma, cfg.damping)
            out.append((gamma, qb_gen_fun(st, dset), st.iterations, qb_residual(st, dset), ""))
        except SolverError as exc:
            out.append((gamma, complex(math.nan, math.nan), 0, math.nan, f"{type(exc).__name__}: {exc}"))
    return table_from_points(T, out)


def reference_checks(cfg, dset):
    """Invariants of one converged solve at the reference transmission."""
    if cfg.mode not in ("waveguide", "slab"):
        return []
    params = Transport.from_T(cfg.L_over_ell, REFERENCE_T, cfg.eta, convention=cfg.convention)
    qf = solve(params, dset, Grid(cfg.N_x), settings_of(cfg))
    return solution_checks(qf, params)


def point_diagnostics(table):
    return [{"T": float(t), "iters": int(i), "residual": float(r), "error": e}
            for t, i, r, e in zip(table.T, table.iterations, table.residual, table.errors)]


def run(cfg, output_dir=None, threads=1):
    """Execute the configured pipeline; returns the exit code (0, 2 partial, 1 fatal)."""
    out = output_dir or cfg.output_dir
    os.makedirs(out, exist_ok=True)
    start = time.perf_counter()
    summary = {"version": __version__, "config": cfg.as_dict(), "status": "ok"}
    code = 0
    try:
        if cfg.mode == "saddle1d":
            f = solve_1d(profile_of(cfg), cfg.tol, cfg.max_iter)
            write_qfield(f.x, f.Qtilde, os.path.join(out, "qfield.csv"))
            summary["oscillation_metric"] = f.oscillation_metric
            summary["iterations"] = len(f.residual_history)
            summary["residual"] = f.residual_history[-1]
        else:
            dset = direction_set(cfg)
            if cfg.mode == "quasiballistic":
                table = qb_scan(cfg, dset)
            else:
                table = scan(grid_of(cfg), cfg.L_over_ell, dset, Grid(cfg.N_x), settings_of(cfg),
                             cfg.convention, threads=threads)
            write_spectrum(table, os.path.join(out, "spectrum.csv"))
            summary["points"] = point_diagnostics(table)
            summary["normalization"] = table.normalization()
            summary["mean_T"] = table.mean_T()
            checks = quadrature_checks() + [normalization_check(table)]
            if cfg.mode in ("waveguide", "slab"):
                try:
                    checks += reference_checks(cfg, dset)
                except SolverError as exc:
                    summary["invariant_error"] = f"{type(exc).__name__}: {exc}"
            summary["invariants"] = [c.as_dict() for c in checks]
            if table.failed:
                summary["status"] = "partial"
                code = 2
    except (SolverError, ValueError) as exc:
        summary["status"] = "failed"
        summary["error"] = f"{type(exc).__name__}: {exc}"
        code = 1
    summary["wall_time_s"] = time.perf_counter() - start
    with open(os.path.join(out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, default=str)
    return code


def run_invariants(cfg):
    checks = quadrature_checks()
    if cfg.mode in ("waveguide", "slab"):
        dset = direction_set(cfg)
        checks += reference_checks(cfg, dset)
    elif cfg.mode == "quasiballistic":
        dset = direction_set(cfg)
        st = qb_solve(dset, cfg.L_over_ell, 1 / REFERENCE_T + 1j * cfg.eta, cfg.damping)
        checks.append(Check("closed equation residual", qb_residual(st, dset), 1e-12))
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 1


def main(argv=None):
    parser = argparse.ArgumentParser(prog="rftsolve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="run the configured scan")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--threads", type=int, default=1)
    p = sub.add_parser("check", help="validate a config file")
    p.add_argument("--config", required=True)
    p = sub.add_parser("invariants", help="run the invariant suite")
    p.add_argument("--config", required=True)
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ValidationError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command == "check":
        print("config ok")
        return 0
    if args.command == "invariants":
        try:
            return run_invariants(cfg)
        except SolverError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 1
    return run(cfg, args.output_dir, max(1, args.threads))


if __name__ == "__main__":
    sys.exit(main())
