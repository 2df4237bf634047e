"""Experiment orchestration and file output for the CLI."""

from __future__ import annotations

import os
import sys

import numpy as np

from .config import RunConfig, converge_scale
from .diagnostics import convergence_study, l2_error
from .field import DGField
from .mesh import make_uniform_mesh
from .operator import FluxParam, Nonlinearity, SpatialOperator
from .projections import projection_order_study
from .solutions import InitialCondition, soliton_components_at
from .stepping import EvolveError, StepperConfig, Trajectory, evolve

__all__ = ["run", "write_csv", "format_convergence_table"]

FLOAT_FORMAT = "{:.17g}"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) or isinstance(value, np.floating):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def write_csv(path: str, stamp: str, columns: list[str], rows) -> None:
    """CSV with a reproducibility header comment and full-precision floats."""
    with open(path, "w") as fh:
        fh.write(f"# config: {stamp}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_snapshot(path: str, stamp: str, field: DGField, points_per_cell: int):
    data = field.sample(points_per_cell)
    rows = zip(data["x"], data["r"], data["s"], data["abs"])
    write_csv(path, stamp, ["x", "r", "s", "abs"], rows)


def _write_charge_series(path: str, stamp: str, traj: Trajectory):
    rows = zip(traj.times, traj.charges, traj.drift, traj.relative_drift)
    write_csv(path, stamp, ["t", "charge", "drift", "relative_drift"], rows)


def format_convergence_table(records) -> str:
    """Aligned text table: N, L2-error, observed order."""
    lines = [f"{'N':>6}  {'L2-error':>12}  {'Order':>6}"]
    for rec in records:
        order = f"{rec.order:.2f}" if rec.order is not None else "-"
        err = f"{rec.l2_error:.3e}" if np.isfinite(rec.l2_error) else "failed"
        lines.append(f"{rec.n_cells:>6}  {err:>12}  {order:>6}")
    return "\n".join(lines) + "\n"


def _emit(summary: dict):
    for key, value in summary.items():
        print(f"{key}={_fmt(value)}")


def _initial_condition(cfg: RunConfig) -> InitialCondition:
    if cfg.experiment in ("soliton", "conserve_check"):
        return InitialCondition.single_soliton(cfg.x0)
    if cfg.experiment == "double_soliton":
        return InitialCondition.double_soliton(cfg.c1, cfg.c2, cfg.x1, cfg.x2)
    if cfg.experiment == "gaussian":
        return InitialCondition.gaussian_pulse(cfg.A)
    raise ValueError(f"no initial condition for experiment {cfg.experiment!r}")


def _run_evolving(cfg: RunConfig, out_dir: str) -> dict:
    mesh = make_uniform_mesh(cfg.domain[0], cfg.domain[1], cfg.n_cells)
    op = SpatialOperator(
        mesh, cfg.k, FluxParam(cfg.theta), Nonlinearity.cubic(cfg.lam),
        n_quad=cfg.n_quad, n_quad_error=cfg.n_quad_error,
    )
    stepper = StepperConfig(
        tau=cfg.tau, fp_tolerance=cfg.fp_tolerance,
        max_iterations=cfg.max_iterations, initial_data=cfg.initial_data,
    )
    ic = _initial_condition(cfg)
    traj = evolve(op, ic.component_functions(), cfg.T, stepper,
                  snapshot_times=cfg.snapshot_times)
    stamp = cfg.stamp()
    _write_charge_series(os.path.join(out_dir, "charge.csv"), stamp, traj)
    for t_snap, field in traj.snapshots:
        path = os.path.join(out_dir, f"snapshot_t{t_snap:g}.csv")
        _write_snapshot(path, stamp, field, cfg.k + 2)

    summary = {
        "experiment": cfg.experiment,
        "n_steps": traj.times.size - 1,
        "charge_initial": traj.charge0,
        "max_relative_drift": traj.max_relative_drift,
        "charge_check": "PASS" if traj.max_relative_drift <= cfg.drift_tolerance else "FAIL",
        "snapshots_written": len(traj.snapshots),
    }
    if cfg.experiment in ("soliton", "conserve_check"):
        exact = soliton_components_at(cfg.T, cfg.x0)
        summary["final_l2_error"] = l2_error(traj.final, exact, cfg.T, op)
    return summary


def _run_converge(cfg: RunConfig, out_dir: str, paper_scale: bool) -> dict:
    tau, T = converge_scale(cfg, paper_scale)
    records = convergence_study(
        theta=cfg.theta, k=cfg.k, n_list=cfg.n_list, T=T, tau=tau,
        domain=cfg.domain, x0=cfg.x0, lam=cfg.lam,
        fp_tolerance=cfg.fp_tolerance, initial_data=cfg.initial_data,
        workers=cfg.workers,
    )
    stamp = cfg.stamp() + f" resolved_tau={_fmt(tau)} resolved_T={_fmt(T)}"
    rows = [
        (rec.theta, rec.k, rec.n_cells, rec.h, rec.l2_error, rec.order)
        for rec in records
    ]
    write_csv(os.path.join(out_dir, "convergence.csv"), stamp,
              ["theta", "k", "N", "h", "l2_error", "order"], rows)
    with open(os.path.join(out_dir, "convergence.txt"), "w") as fh:
        fh.write(f"# config: {stamp}\n")
        fh.write(format_convergence_table(records))

    orders = [rec.order for rec in records if rec.order is not None]
    summary = {
        "experiment": "converge",
        "rows": len(records),
        "failed_rows": sum(rec.failed for rec in records),
        "final_order": orders[-1] if orders else "",
        "finest_l2_error": records[-1].l2_error,
    }
    return summary


def _run_project_study(cfg: RunConfig, out_dir: str) -> dict:
    u = lambda x: np.sin(2 * np.pi * x)
    rows = projection_order_study(
        u, theta=cfg.theta, k=cfg.k, n_list=cfg.n_list,
        domain=cfg.domain, kind=cfg.projection_kind,
    )
    stamp = cfg.stamp()
    write_csv(
        os.path.join(out_dir, "projection_study.csv"), stamp,
        ["theta", "k", "N", "h", "l2_error", "slope"],
        [(r["theta"], r["k"], r["N"], r["h"], r["l2_error"], r["slope"]) for r in rows],
    )
    slopes = [r["slope"] for r in rows if r["slope"] is not None]
    return {
        "experiment": "project_study",
        "rows": len(rows),
        "final_slope": slopes[-1] if slopes else "",
    }


def run(cfg: RunConfig, out_dir: str | None = None, paper_scale: bool = False) -> int:
    """Execute one experiment; write CSVs; print a key=value summary.

    Returns the process exit status (0 on success). Failures name the
    stage that failed on stderr.
    """
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    try:
        if cfg.experiment == "converge":
            summary = _run_converge(cfg, out_dir, paper_scale)
        elif cfg.experiment == "project_study":
            summary = _run_project_study(cfg, out_dir)
        else:
            summary = _run_evolving(cfg, out_dir)
    except EvolveError as exc:
        print(f"stage=evolve error={exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"stage=setup error={exc}", file=sys.stderr)
        return 1
    summary["output_dir"] = out_dir
    _emit(summary)
    if summary.get("charge_check") == "FAIL":
        return 2
    return 0
