"""Implicit midpoint time stepping with a fixed-point nonlinear solver.

The midpoint rule u^{n+1} = u^n + tau * F((u^n + u^{n+1})/2) is symmetric,
second order, and conserves quadratic invariants of charge-neutral flows,
so the discrete charge drifts only at the solver tolerance. The midpoint
system is solved by fixed-point iteration: for the tau values used here
tau * Lipschitz(F) is well below one, so a Jacobian is never assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .field import DGField, project_l2
from .operator import NonFiniteFieldError, SpatialOperator
from .projections import ProjectionSpec, generalized_project

__all__ = [
    "StepperConfig",
    "Trajectory",
    "NonConvergenceError",
    "EvolveError",
    "step",
    "discretize_initial_data",
    "evolve",
]


class NonConvergenceError(RuntimeError):
    """Fixed-point solver ran out of iterations."""

    def __init__(self, iterations: int, last_increment: float):
        self.iterations = iterations
        self.last_increment = last_increment
        super().__init__(
            f"midpoint fixed-point solve did not converge after {iterations} "
            f"iterations (last increment {last_increment:.3e})"
        )


class EvolveError(RuntimeError):
    """A time step failed; carries the step index and time."""

    def __init__(self, step_index: int, time: float, cause: Exception):
        self.step_index = step_index
        self.time = time
        super().__init__(f"step {step_index} at t = {time:.6g} failed: {cause}")


@dataclass(frozen=True)
class StepperConfig:
    tau: float
    fp_tolerance: float = 1e-13
    max_iterations: int = 100
    initial_data: str = "l2_projection"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not self.fp_tolerance > 0:
            raise ValueError(f"fp_tolerance must be positive, got {self.fp_tolerance}")
        if self.initial_data not in ("l2_projection", "generalized_P"):
            raise ValueError(f"unknown initial_data choice {self.initial_data!r}")


def step(op: SpatialOperator, field: DGField, cfg: StepperConfig,
         tau: float | None = None) -> DGField:
    """One implicit midpoint step; tau may override cfg.tau (e.g. final step).

    Iterates u_(m+1) = u^n + tau * F((u^n + u_(m))/2) from u_(0) = u^n
    until the coefficient increment max-norm drops to fp_tolerance.
    """
    if tau is None:
        tau = cfg.tau
    r0 = field.component("r")
    s0 = field.component("s")
    r = r0
    s = s0
    for _ in range(cfg.max_iterations):
        r_dot, s_dot = op.rhs_arrays(0.5 * (r0 + r), 0.5 * (s0 + s))
        r_new = r0 + tau * r_dot
        s_new = s0 + tau * s_dot
        increment = max(
            float(np.max(np.abs(r_new - r))), float(np.max(np.abs(s_new - s)))
        )
        if not np.isfinite(increment):
            for name, arr in (("r", r_new), ("s", s_new)):
                if not np.all(np.isfinite(arr)):
                    cell, mode = np.argwhere(~np.isfinite(arr))[0]
                    raise NonFiniteFieldError(name, int(cell), int(mode))
        r, s = r_new, s_new
        if increment <= cfg.fp_tolerance:
            return field.with_components(r, s, field.time + tau)
    raise NonConvergenceError(cfg.max_iterations, increment)


def discretize_initial_data(op: SpatialOperator, r0, s0, cfg: StepperConfig) -> DGField:
    """Initial field per cfg.initial_data: plain L2 or generalized P projection."""
    if cfg.initial_data == "l2_projection":
        return project_l2(op.mesh, op.degree, r0, s0, n_points=op.n_quad)
    spec_kwargs = dict(theta=op.theta, degree=op.degree, mesh=op.mesh)
    return DGField(
        mesh=op.mesh,
        degree=op.degree,
        components={
            "r": generalized_project(r0, ProjectionSpec(kind="P", **spec_kwargs)),
            "s": generalized_project(s0, ProjectionSpec(kind="P", **spec_kwargs)),
        },
    )


@dataclass
class Trajectory:
    """Evolution record: final field, requested snapshots, per-step charge."""

    final: DGField
    snapshots: list[tuple[float, DGField]]
    times: np.ndarray
    charges: np.ndarray
    config_note: str = ""
    failures: list = dataclass_field(default_factory=list)

    @property
    def charge0(self) -> float:
        return float(self.charges[0])

    @property
    def drift(self) -> np.ndarray:
        return self.charges - self.charge0

    @property
    def relative_drift(self) -> np.ndarray:
        return self.drift / self.charge0

    @property
    def max_relative_drift(self) -> float:
        return float(np.max(np.abs(self.relative_drift)))


def evolve(op: SpatialOperator, u0, T: float, cfg: StepperConfig,
           snapshot_times=()) -> Trajectory:
    """Discretize (r0, s0), march to T, record the charge at every step.

    The last step is shortened so the final field sits exactly at t = T.
    Snapshots are taken at the step times closest to the requested
    instants. Step failures propagate as EvolveError with index and time.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    r0, s0 = u0
    field = discretize_initial_data(op, r0, s0, cfg)

    n_full = int(np.floor(T / cfg.tau + 1e-12))
    times = [i * cfg.tau for i in range(n_full + 1)]
    if times[-1] < T - 1e-12 * max(T, 1.0):
        times.append(T)
    times[-1] = T
    times = np.asarray(times)

    snap_index = {}
    for t_req in snapshot_times:
        snap_index.setdefault(int(np.argmin(np.abs(times - t_req))), None)

    charges = np.empty(times.size)
    charges[0] = field.l2_norm_squared()
    snapshots = []
    if 0 in snap_index:
        snapshots.append((0.0, field))
    for i in range(1, times.size):
        tau_i = float(times[i] - times[i - 1])
        try:
            field = step(op, field, cfg, tau=tau_i)
        except Exception as exc:
            raise EvolveError(step_index=i, time=float(times[i]), cause=exc) from exc
        charges[i] = field.l2_norm_squared()
        if i in snap_index:
            snapshots.append((float(times[i]), field))
    return Trajectory(final=field, snapshots=snapshots, times=times, charges=charges)
