"""Piecewise-polynomial fields: storage, evaluation, traces, norms.

A DGField stores the named real components of the discrete solution
(r = Re u_h, s = Im u_h) as N x (k+1) Legendre coefficient arrays.
Auxiliary quantities (p ~ s_x, q ~ r_x) travel as bare coefficient
arrays of the same shape; see :mod:`cldg.operator`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .basis import gauss_rule, legendre_table
from .mesh import Mesh1D, map_from_reference

__all__ = ["DGField", "component_traces", "project_component", "project_l2"]

SOLUTION_COMPONENTS = ("r", "s")


@dataclass(frozen=True, eq=False)
class DGField:
    """Solution snapshot in V_h^k: components 'r' and 's' plus a time label."""

    mesh: Mesh1D
    degree: int
    components: dict[str, np.ndarray] = field(default_factory=dict)
    time: float = 0.0

    def __post_init__(self):
        shape = (self.mesh.n_cells, self.degree + 1)
        for name in SOLUTION_COMPONENTS:
            self.components.setdefault(name, np.zeros(shape))
        for name, coeffs in self.components.items():
            coeffs = np.asarray(coeffs, dtype=float)
            if coeffs.shape != shape:
                raise ValueError(
                    f"component {name!r} has shape {coeffs.shape}, expected {shape}"
                )
            if not np.all(np.isfinite(coeffs)):
                bad = np.argwhere(~np.isfinite(coeffs))[0]
                raise ValueError(
                    f"component {name!r} non-finite in cell {bad[0]}, mode {bad[1]}"
                )
            self.components[name] = coeffs

    @classmethod
    def zeros(cls, mesh: Mesh1D, degree: int, time: float = 0.0) -> "DGField":
        return cls(mesh=mesh, degree=degree, time=time)

    def with_components(self, r: np.ndarray, s: np.ndarray, time: float) -> "DGField":
        return replace(self, components={"r": r, "s": s}, time=time)

    def component(self, name: str) -> np.ndarray:
        try:
            return self.components[name]
        except KeyError:
            raise KeyError(f"unknown component {name!r}") from None

    def eval(self, name: str, cell: int, xi) -> np.ndarray | float:
        """Evaluate sum_l c_{j,l} P_l(xi) in one cell."""
        coeffs = self.component(name)
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
        values, _ = legendre_table(self.degree, xi_arr)
        out = coeffs[cell] @ values
        return float(out[0]) if np.isscalar(xi) else out

    def traces(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        """One-sided traces at the N interfaces (interface i = right face of cell i)."""
        return component_traces(self.component(name))

    def l2_norm_squared(self, names: tuple[str, ...] = SOLUTION_COMPONENTS) -> float:
        """int |u_h|^2 dx, closed form via Legendre orthogonality."""
        widths = self.mesh.widths
        mode_weight = 1.0 / (2.0 * np.arange(self.degree + 1) + 1.0)
        total = 0.0
        for name in names:
            coeffs = self.component(name)
            total += float(np.einsum("jl,j,l->", coeffs**2, widths, mode_weight))
        return total

    def sample(self, points_per_cell: int) -> dict[str, np.ndarray]:
        """Uniform per-cell samples for snapshot output: x, r, s, abs.

        Includes both cell endpoints so interface jumps are rendered
        honestly (duplicate x values carry the two one-sided limits).
        """
        xi = np.linspace(-1.0, 1.0, points_per_cell)
        values, _ = legendre_table(self.degree, xi)
        r = self.component("r") @ values
        s = self.component("s") @ values
        x = np.concatenate(
            [map_from_reference(self.mesh, j, xi) for j in range(self.mesh.n_cells)]
        )
        r = r.ravel()
        s = s.ravel()
        return {"x": x, "r": r, "s": s, "abs": np.hypot(r, s)}


def component_traces(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Interface traces of one coefficient array.

    minus[i] comes from cell i at xi = +1 (so sum_l c_{i,l}); plus[i]
    from cell (i+1) mod N at xi = -1 (so sum_l c_{i+1,l} (-1)^l).
    """
    signs = (-1.0) ** np.arange(coeffs.shape[1])
    minus = coeffs.sum(axis=1)
    plus = np.roll(coeffs @ signs, -1)
    return minus, plus


def project_component(mesh: Mesh1D, degree: int, f, n_points: int | None = None) -> np.ndarray:
    """L2 projection of a pointwise function onto V_h^k (moments against all P_l).

    c_{j,l} = (2l+1)/2 * int f(x(xi)) P_l(xi) dxi, by Gauss quadrature.
    """
    if n_points is None:
        n_points = 2 * degree + 2
    rule = gauss_rule(n_points)
    values, _ = legendre_table(degree, rule.nodes)
    x = mesh.centers[:, None] + 0.5 * mesh.widths[:, None] * rule.nodes[None, :]
    samples = np.asarray(f(x), dtype=float)
    scale = (2.0 * np.arange(degree + 1) + 1.0) / 2.0
    return (samples * rule.weights[None, :]) @ values.T * scale[None, :]


def project_l2(mesh: Mesh1D, degree: int, r0, s0, n_points: int | None = None,
               time: float = 0.0) -> DGField:
    """Componentwise L2 projection of initial data (r0, s0) onto V_h^k."""
    return DGField(
        mesh=mesh,
        degree=degree,
        components={
            "r": project_component(mesh, degree, r0, n_points),
            "s": project_component(mesh, degree, s0, n_points),
        },
        time=time,
    )
