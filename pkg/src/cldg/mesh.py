"""Periodic 1D meshes: cell geometry, interface indexing, quasi-uniformity.

Cells are numbered 0..N-1 left to right. Interface i sits at the right
face of cell i, so interface N-1 is the periodic wrap joining cell N-1
back to cell 0. Cell-local coordinates use the affine map
xi = 2*(x - center_j) / width_j onto the reference element [-1, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Mesh1D", "make_uniform_mesh", "map_to_reference", "map_from_reference"]

_mesh_tokens = itertools.count()


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Partition of a periodic interval (a, b) into N cells.

    Immutable after construction; downstream operators cache tables
    against ``token``, so never mutate ``boundaries`` in place.
    ``cell_widths`` may be supplied when the widths are known exactly
    (the uniform factory does this: differencing large boundary values
    would cost several ulps of width accuracy); it defaults to the
    boundary differences.
    """

    boundaries: np.ndarray
    cell_widths: np.ndarray | None = None
    token: int = field(default_factory=lambda: next(_mesh_tokens))

    def __post_init__(self):
        bnd = np.asarray(self.boundaries, dtype=float)
        object.__setattr__(self, "boundaries", bnd)
        if bnd.ndim != 1 or bnd.size < 3:
            raise ValueError("mesh needs at least 2 cells (3 boundary points)")
        if not np.all(np.isfinite(bnd)):
            raise ValueError("mesh boundaries must be finite")
        diffs = np.diff(bnd)
        if np.any(diffs <= 0):
            raise ValueError("mesh boundaries must be strictly increasing")
        widths = self.cell_widths
        if widths is None:
            widths = diffs
        else:
            widths = np.asarray(widths, dtype=float)
            scale = np.abs(bnd).max()
            if widths.shape != diffs.shape or np.any(
                np.abs(widths - diffs) > 8 * np.spacing(scale)
            ):
                raise ValueError("cell_widths inconsistent with boundaries")
        object.__setattr__(self, "cell_widths", widths)
        extent = bnd[-1] - bnd[0]
        if abs(widths.sum() - extent) > 8 * np.spacing(extent):
            raise ValueError("cell widths do not telescope to b - a")

    @property
    def a(self) -> float:
        return float(self.boundaries[0])

    @property
    def b(self) -> float:
        return float(self.boundaries[-1])

    @property
    def n_cells(self) -> int:
        return self.boundaries.size - 1

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.boundaries[:-1] + self.boundaries[1:])

    @property
    def widths(self) -> np.ndarray:
        return self.cell_widths

    @property
    def h(self) -> float:
        """Largest cell width."""
        return float(self.widths.max())

    @property
    def gamma(self) -> float:
        """Quasi-uniformity ratio min_j h_j / h, always > 0."""
        return float(self.widths.min() / self.h)

    def right_neighbor(self, cell: int) -> int:
        return (cell + 1) % self.n_cells

    def left_neighbor(self, cell: int) -> int:
        return (cell - 1) % self.n_cells


def make_uniform_mesh(a: float, b: float, n_cells: int) -> Mesh1D:
    """Uniform periodic mesh of (a, b): all widths exactly (b - a) / N."""
    if n_cells < 2:
        raise ValueError(f"n_cells must be >= 2, got {n_cells}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    width = (b - a) / n_cells
    return Mesh1D(np.linspace(a, b, n_cells + 1), np.full(n_cells, width))


def map_to_reference(mesh: Mesh1D, cell: int, x) -> np.ndarray | float:
    """Map physical x in cell ``cell`` to xi = 2*(x - x_j)/h_j in [-1, 1].

    Points outside the closed cell beyond a 4-ulp tolerance are rejected;
    points within tolerance are clamped onto [-1, 1].
    """
    xl = mesh.boundaries[cell]
    xr = mesh.boundaries[cell + 1]
    tol = 4 * np.spacing(max(abs(xl), abs(xr), xr - xl))
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < xl - tol) or np.any(x_arr > xr + tol):
        raise ValueError(f"x={x} outside cell {cell} = [{xl}, {xr}]")
    xi = np.clip(2.0 * (x_arr - mesh.centers[cell]) / mesh.widths[cell], -1.0, 1.0)
    return float(xi) if np.isscalar(x) else xi


def map_from_reference(mesh: Mesh1D, cell: int, xi) -> np.ndarray | float:
    """Inverse of :func:`map_to_reference`."""
    x = mesh.centers[cell] + 0.5 * mesh.widths[cell] * np.asarray(xi, dtype=float)
    return float(x) if np.isscalar(xi) else x
