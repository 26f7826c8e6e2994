"""Command line entry point: ``solve``, ``compare`` and ``track``.

Exit codes: 0 success, 2 invalid configuration, 3 solver did not converge,
4 I/O problem (unreadable config or nominal, busy or unwritable output dir).
"""

from __future__ import annotations

import argparse
import io as _stringio
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np
from filelock import FileLock, Timeout

from . import kernels
from .config import ConfigError, RunConfig, load_config
from .dubins import optimal_controls, trajectory_cost
from .io import load_unknowns, unknowns_to_dict, write_csv, write_json
from .mesh import build_mesh, build_quadrature
from .mpc import nominal_from_unknowns, simulate_tracking
from .residual import Unknowns, assemble_hamiltonian, sample_solution
from .scp import scp_iterate
from .seeding import build_initial_unknowns
from .shooting import guess_from_heuristics, shoot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4

log = logging.getLogger("galerkin_toc")


def _locked(out_dir: Path) -> FileLock:
    out_dir.mkdir(parents=True, exist_ok=True)
    return FileLock(str(out_dir / ".lock"), timeout=0)


def _solve(cfg: RunConfig):
    mesh = build_mesh(cfg.n_el)
    quad = build_quadrature(mesh, cfg.quad_points)
    init = build_initial_unknowns(cfg.problem, mesh)
    trace = _stringio.StringIO()
    result = scp_iterate(init, mesh, quad, cfg.problem, cfg.scp, trace=trace)
    for line in trace.getvalue().splitlines():
        log.info(line)
    return mesh, result


def _solution_rows(u: Unknowns, cfg: RunConfig, tau: np.ndarray) -> np.ndarray:
    table = sample_solution(u, tau)
    v, w = optimal_controls(table[:, 2], u.lambda_xy[0], u.lambda_xy[1], table[:, 3], cfg.problem)
    return np.column_stack([tau, tau * u.T, table, v, w])


_TRAJ_HEADER = ["tau", "t", "x", "y", "theta", "lambda_theta", "v_star", "omega_star"]


def _gwrm_cost(u: Unknowns, cfg: RunConfig) -> float:
    tau = np.linspace(0.0, 1.0, 2001)
    table = sample_solution(u, tau)
    return trajectory_cost(tau, table[:, 2], table[:, 3], u.lambda_xy[0], u.lambda_xy[1], u.T, cfg.problem)


def run_solve(cfg: RunConfig, out_dir: Path) -> int:
    with _locked(out_dir):
        mesh, result = _solve(cfg)
        u = result.unknowns
        write_csv(out_dir / "scp_trace.csv", ["iteration", "b_l1", "d_l1", "step_inf", "T"],
                  [(r.iteration, r.b_l1, r.d_l1, r.step_inf, r.T) for r in result.residual_history])
        write_csv(out_dir / "trajectory.csv", _TRAJ_HEADER, _solution_rows(u, cfg, mesh.nodes))
        if cfg.dense_samples:
            dense_tau = np.linspace(0.0, 1.0, cfg.dense_samples)
            write_csv(out_dir / "trajectory_dense.csv", _TRAJ_HEADER, _solution_rows(u, cfg, dense_tau))
        write_json(out_dir / "unknowns.json", unknowns_to_dict(u))
        d = assemble_hamiltonian(u, mesh, cfg.problem)
        write_json(out_dir / "summary.json", {
            "config": cfg.to_dict(),
            "converged": result.converged,
            "iterations": result.iterations,
            "T_star": u.T,
            "lambda_x": u.lambda_xy[0],
            "lambda_y": u.lambda_xy[1],
            "cost": _gwrm_cost(u, cfg),
            "b_l1": float(np.abs(result.b_final).sum()),
            "b_inf": float(np.abs(result.b_final).max()),
            "d_inf": float(np.abs(d).max()),
            "d_std": float(np.std(d)),
            "wall_time": result.wall_time,
            "backend": kernels.BACKEND,
        })
    log.info("solve: converged=%s T*=%.6f iterations=%d", result.converged, u.T, result.iterations)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _method_summary(converged: bool, T: float, iterations: int, wall: float, cost: float, **extra) -> dict:
    return {"converged": bool(converged), "T_star": float(T), "iterations": int(iterations),
            "wall_time": float(wall), "cost": float(cost), **extra}


def run_compare(cfg: RunConfig, out_dir: Path) -> int:
    with _locked(out_dir):
        mesh, gw = _solve(cfg)
        u = gw.unknowns
        gw_nodes = sample_solution(u, mesh.nodes)

        # round the step count up so every mesh node is an integration point
        per_el = math.ceil(cfg.shooting.steps / cfg.n_el)
        steps = per_el * cfg.n_el
        start = time.perf_counter()
        sh = shoot(cfg.problem.X0, cfg.problem.XT, guess_from_heuristics(cfg.problem), cfg.problem,
                   tol=cfg.shooting.tol, max_iters=cfg.shooting.max_iters, steps=steps)
        sh_wall = time.perf_counter() - start

        if sh.trajectory.shape[0] == steps + 1:
            sh_nodes = sh.trajectory[::per_el, 1:4]
            g = sh.guess
            sh_cost = trajectory_cost(sh.trajectory[:, 0], sh.trajectory[:, 3], sh.trajectory[:, 4],
                                      g.lam_x, g.lam_y, g.T, cfg.problem)
        else:
            sh_nodes = np.full((mesh.n_nodes, 3), np.nan)
            sh_cost = float("nan")
        gap = np.hypot(gw_nodes[:, 0] - sh_nodes[:, 0], gw_nodes[:, 1] - sh_nodes[:, 1])
        write_csv(out_dir / "compare.csv",
                  ["tau", "x_gwrm", "y_gwrm", "theta_gwrm", "x_shoot", "y_shoot", "theta_shoot", "position_gap"],
                  np.column_stack([mesh.nodes, gw_nodes[:, :3], sh_nodes, gap]))
        write_json(out_dir / "compare_summary.json", {
            "config": cfg.to_dict(),
            "gwrm": _method_summary(gw.converged, u.T, gw.iterations, gw.wall_time, _gwrm_cost(u, cfg)),
            "shooting": _method_summary(sh.converged, sh.guess.T, sh.iterations, sh_wall, sh_cost,
                                        mismatch_inf=sh.mismatch_norm, message=sh.message,
                                        lambda_x=sh.guess.lam_x, lambda_y=sh.guess.lam_y,
                                        lambda_theta0=sh.guess.lam_theta0, steps=steps),
            "max_position_gap": float(np.max(gap)) if np.all(np.isfinite(gap)) else None,
            "relative_T_gap": abs(u.T - sh.guess.T) / sh.guess.T,
            "shooting_failed": not sh.converged,
            "backend": kernels.BACKEND,
        })
    log.info("compare: gwrm converged=%s T*=%.6f; shooting converged=%s T*=%.6f (%s)",
             gw.converged, u.T, sh.converged, sh.guess.T, sh.message)
    return EXIT_OK


def run_track(cfg: RunConfig, out_dir: Path, nominal_path: Path | None = None) -> int:
    if nominal_path is not None:
        if not nominal_path.is_file():
            raise FileNotFoundError(f"nominal file not found: {nominal_path}")
        u = load_unknowns(nominal_path)
    else:
        _, result = _solve(cfg)
        if not result.converged:
            log.error("track: in-line solve did not converge; no nominal to track")
            return EXIT_NOT_CONVERGED
        u = result.unknowns
    nominal = nominal_from_unknowns(u, cfg.problem, cfg.mpc.step_for(u.T))
    with _locked(out_dir):
        tr = simulate_tracking(nominal, cfg.mpc, noise=cfg.mpc_noise)
        write_csv(out_dir / "tracking.csv",
                  ["t", "x", "y", "theta", "v", "omega", "x_ref", "y_ref", "theta_ref", "v_ref", "omega_ref",
                   "err_norm"],
                  np.column_stack([tr.t, tr.states, tr.controls, tr.ref_states, tr.ref_controls, tr.err_norm]))
        write_json(out_dir / "tracking_summary.json", {
            "config": cfg.to_dict(),
            "steps": len(tr),
            "dt": float(nominal.t[1]),
            "T_star": u.T,
            "noise": cfg.mpc_noise,
            "seed": tr.seed,
            "terminal_error": tr.terminal_error,
            "rms_error": tr.rms_error,
            "max_error": float(tr.err_norm.max()),
            "final_state": tr.final_state.tolist(),
        })
    log.info("track: steps=%d rms=%.3e terminal=%.3e", len(tr), tr.rms_error, tr.terminal_error)
    return EXIT_OK


def _configure_logging(verbose: bool) -> None:
    # replace our handler on every call so it writes to the current sys.stderr
    for h in [h for h in log.handlers if getattr(h, "_cli_handler", False)]:
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler._cli_handler = True
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, default=None, help="override output_dir from the config")
    common.add_argument("--verbose", "-v", action="store_true", help="log solver progress to stderr")
    parser = argparse.ArgumentParser(prog="galerkin-toc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve the time-optimal problem by Galerkin/SCP")
    sub.add_parser("compare", parents=[common], help="compare Galerkin/SCP with single shooting")
    track = sub.add_parser("track", parents=[common], help="MPC tracking of the optimal trajectory")
    track.add_argument("--nominal", type=Path, default=None, help="unknowns.json from a previous solve")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    out_dir = args.out if args.out is not None else cfg.output_dir
    try:
        if args.command == "solve":
            return run_solve(cfg, out_dir)
        if args.command == "compare":
            return run_compare(cfg, out_dir)
        return run_track(cfg, out_dir, args.nominal)
    except Timeout:
        print(f"error: output directory {out_dir} is locked by another run", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # malformed nominal file contents
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
