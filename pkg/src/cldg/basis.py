"""Legendre basis on [-1, 1] and Gauss-Legendre quadrature.

Uses the standard unnormalized Legendre polynomials P_l with P_l(1) = 1,
P_l(-1) = (-1)^l and orthogonality int P_l P_m = 2/(2l+1) delta_lm, so a
per-cell mass matrix is diagonal with entries h_j/(2l+1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LegendreBasis",
    "QuadratureRule",
    "legendre_eval",
    "legendre_table",
    "gauss_rule",
    "cell_mass_inverse",
    "stiffness_matrix",
]

MAX_QUAD_POINTS = 64


def legendre_eval(l: int, xi: float) -> tuple[float, float]:
    """Value and derivative of P_l at a single point xi in [-1, 1].

    Three-term recurrence for values, derivative recurrence
    P'_{l+1} = (2l+1) P_l + P'_{l-1} (stable at the endpoints).
    """
    if l < 0:
        raise ValueError("mode index must be nonnegative")
    if abs(xi) > 1 + 4 * np.spacing(1.0):
        raise ValueError(f"xi={xi} outside [-1, 1]")
    values, derivs = legendre_table(l, np.asarray([xi], dtype=float))
    return float(values[l, 0]), float(derivs[l, 0])


def legendre_table(degree: int, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Tables P_l(xi_q) and P'_l(xi_q), shape (degree+1, len(xi))."""
    xi = np.asarray(xi, dtype=float)
    values = np.empty((degree + 1, xi.size))
    derivs = np.empty((degree + 1, xi.size))
    values[0] = 1.0
    derivs[0] = 0.0
    if degree >= 1:
        values[1] = xi
        derivs[1] = 1.0
    for l in range(1, degree):
        values[l + 1] = ((2 * l + 1) * xi * values[l] - l * values[l - 1]) / (l + 1)
        derivs[l + 1] = (2 * l + 1) * values[l] + derivs[l - 1]
    return values, derivs


@dataclass(frozen=True)
class LegendreBasis:
    """Modal Legendre basis of degree k on the reference element."""

    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")

    @property
    def n_modes(self) -> int:
        return self.degree + 1

    def eval_table(self, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return legendre_table(self.degree, xi)

    @property
    def at_plus_one(self) -> np.ndarray:
        """P_l(+1) = 1 for every mode."""
        return np.ones(self.n_modes)

    @property
    def at_minus_one(self) -> np.ndarray:
        """P_l(-1) = (-1)^l."""
        return (-1.0) ** np.arange(self.n_modes)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_points(self) -> int:
        return self.nodes.size


def gauss_rule(n_points: int) -> QuadratureRule:
    """Gauss-Legendre rule with n_points nodes, exact through degree 2n-1.

    Roots of P_n by Newton iteration from the Chebyshev-like initial
    guess, converged to 1e-15; weights w = 2 / ((1 - x^2) P'_n(x)^2).
    """
    if not 1 <= n_points <= MAX_QUAD_POINTS:
        raise ValueError(f"n_points must be in [1, {MAX_QUAD_POINTS}], got {n_points}")
    n = n_points
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        values, derivs = legendre_table(n, x)
        dx = values[n] / derivs[n]
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    else:
        raise RuntimeError("Gauss-Legendre Newton iteration did not converge")
    # two polishing sweeps, then symmetrize so the rule is exactly even
    for _ in range(2):
        values, derivs = legendre_table(n, x)
        x = x - values[n] / derivs[n]
    x = 0.5 * (x - x[::-1])
    _, derivs = legendre_table(n, x)
    w = 2.0 / ((1.0 - x * x) * derivs[n] ** 2)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(nodes=x[::-1].copy(), weights=w[::-1].copy())


def cell_mass_inverse(basis: LegendreBasis, cell_width: float) -> np.ndarray:
    """Diagonal of the inverse cell mass matrix: entry l is (2l+1)/h_j."""
    if cell_width <= 0:
        raise ValueError("cell width must be positive")
    return (2.0 * np.arange(basis.n_modes) + 1.0) / cell_width


def stiffness_matrix(degree: int) -> np.ndarray:
    """S[l, m] = int_{-1}^{1} P_m(xi) P'_l(xi) dxi.

    Equals 2 when l > m and l - m is odd, else 0. Width-independent:
    the h_j/2 Jacobian cancels the 2/h_j chain-rule factor.
    """
    n = degree + 1
    s = np.zeros((n, n))
    for l in range(n):
        for m in range(n):
            if l > m and (l - m) % 2 == 1:
                s[l, m] = 2.0
    return s
