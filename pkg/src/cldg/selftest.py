"""Fast invariant suite behind `cldg selftest`: one line per check, exit 0 iff all pass.

Each check exercises a structural identity of the discretization at
round-off level; together they take a few seconds. The heavyweight
convergence sweeps live in the acceptance test suite, not here.
"""

from __future__ import annotations

import numpy as np

from .basis import LegendreBasis, cell_mass_inverse, gauss_rule, legendre_table
from .diagnostics import cell_charge_rate, entropy_balance_residual
from .field import DGField, project_l2
from .mesh import make_uniform_mesh
from .operator import FluxParam, Nonlinearity, SpatialOperator
from .projections import (
    SingularSystemError,
    circulant_determinant,
    solve_periodic_bidiagonal,
)
from .stepping import StepperConfig, step

__all__ = ["run_selftest", "CHECKS"]


def check_quadrature_exactness():
    worst = 0.0
    for n in range(1, 21):
        rule = gauss_rule(n)
        for m in range(0, 2 * n):
            exact = 0.0 if m % 2 else 2.0 / (m + 1)
            got = float(np.sum(rule.weights * rule.nodes**m))
            worst = max(worst, abs(got - exact) / max(1.0, abs(exact)))
    return worst <= 1e-13, f"worst monomial error {worst:.2e}"


def check_mass_matrix():
    worst = 0.0
    for k in (1, 2, 3):
        rule = gauss_rule(k + 1)
        values, _ = legendre_table(k, rule.nodes)
        for width in (0.5, 2.0):
            gram = (values * rule.weights[None, :]) @ values.T * (width / 2.0)
            inv = cell_mass_inverse(LegendreBasis(k), width)
            worst = max(worst, np.abs(gram @ np.diag(inv) - np.eye(k + 1)).max())
    return worst <= 1e-13, f"worst deviation from identity {worst:.2e}"


def _random_setup(rng, theta, k, n_cells=12, lam=2.0):
    mesh = make_uniform_mesh(-1.0, 2.0, n_cells)
    op = SpatialOperator(mesh, k, FluxParam(theta), Nonlinearity.cubic(lam))
    fld = DGField(
        mesh=mesh, degree=k,
        components={
            "r": rng.standard_normal((n_cells, k + 1)),
            "s": rng.standard_normal((n_cells, k + 1)),
        },
    )
    return op, fld


def check_charge_neutrality():
    rng = np.random.default_rng(101)
    worst = 0.0
    for theta in (0.0, 0.3, 0.5, 1.0):
        for k in (1, 2, 3):
            op, fld = _random_setup(rng, theta, k)
            total = float(cell_charge_rate(op, fld).sum())
            worst = max(worst, abs(total) / fld.l2_norm_squared())
    return worst <= 1e-12, f"worst |d/dt charge| / charge {worst:.2e}"


def check_entropy_balance():
    rng = np.random.default_rng(202)
    worst = 0.0
    for theta in (0.3, 0.5, 1.0):
        for k in (1, 2, 3):
            op, fld = _random_setup(rng, theta, k)
            res = float(np.max(np.abs(entropy_balance_residual(op, fld))))
            worst = max(worst, res / max(fld.l2_norm_squared(), 1.0))
    return worst <= 1e-11, f"worst cell residual / scale {worst:.2e}"


def check_flux_alternating():
    rng = np.random.default_rng(303)
    from .operator import flux_u_hat, flux_v_hat

    a, b = rng.standard_normal(2)
    worst = 0.0
    for theta in np.linspace(0, 1, 11):
        worst = max(
            worst,
            abs(flux_u_hat(a, b, theta) + flux_v_hat(a, b, theta) - (a + b)),
        )
    return worst <= 1e-15, f"worst weight-sum defect {worst:.2e}"


def check_circulant_oracle():
    rng = np.random.default_rng(404)
    worst = 0.0
    for theta in (0.1, 0.4, 0.7, 1.0):
        for k in (1, 2, 3):
            for n in range(3, 13):
                diag, off = theta, (1.0 - theta) * (-1.0) ** k
                a_mat = np.zeros((n, n))
                for i in range(n):
                    a_mat[i, i] = diag
                    a_mat[i, (i + 1) % n] = off
                rhs = rng.standard_normal(n)
                try:
                    x = solve_periodic_bidiagonal(diag, off, rhs)
                except SingularSystemError:
                    continue
                worst = max(worst, float(np.abs(x - np.linalg.solve(a_mat, rhs)).max()))
                det = circulant_determinant(diag, off, n)
                worst = max(worst, abs(det - np.linalg.det(a_mat)) / max(1e-30, abs(det)))
    return worst <= 1e-12, f"worst solve/det deviation {worst:.2e}"


def check_rhs_linearity():
    rng = np.random.default_rng(505)
    op, f1 = _random_setup(rng, 0.4, 2, lam=0.0)
    _, f2 = _random_setup(rng, 0.4, 2, lam=0.0)
    f2 = DGField(mesh=op.mesh, degree=2, components={
        "r": rng.standard_normal((12, 3)), "s": rng.standard_normal((12, 3))})
    a, b = 0.7, -1.3
    combo = DGField(mesh=op.mesh, degree=2, components={
        "r": a * f1.component("r") + b * f2.component("r"),
        "s": a * f1.component("s") + b * f2.component("s")})
    r1, s1 = op.rhs(f1)
    r2, s2 = op.rhs(f2)
    rc, sc = op.rhs(combo)
    worst = max(
        float(np.abs(rc - a * r1 - b * r2).max()),
        float(np.abs(sc - a * s1 - b * s2).max()),
    )
    return worst <= 1e-12, f"worst linearity defect {worst:.2e}"


def check_reversibility():
    mesh = make_uniform_mesh(-10.0, 10.0, 20)
    op = SpatialOperator(mesh, 2, FluxParam(1.0), Nonlinearity.cubic(2.0))
    fld = project_l2(mesh, 2, lambda x: np.exp(-(x**2)), lambda x: 0.2 * np.exp(-(x**2)))
    cfg = StepperConfig(tau=0.002)
    fwd = step(op, fld, cfg)
    back = step(op, fwd, cfg, tau=-cfg.tau)
    worst = max(
        float(np.abs(back.component("r") - fld.component("r")).max()),
        float(np.abs(back.component("s") - fld.component("s")).max()),
    )
    return worst <= 100 * cfg.fp_tolerance, f"round-trip defect {worst:.2e}"


CHECKS = [
    ("quadrature exactness", check_quadrature_exactness),
    ("closed-form mass inverse", check_mass_matrix),
    ("semidiscrete charge neutrality", check_charge_neutrality),
    ("per-cell entropy balance", check_entropy_balance),
    ("alternating flux weights", check_flux_alternating),
    ("circulant solver vs dense oracle", check_circulant_oracle),
    ("rhs linearity at lambda=0", check_rhs_linearity),
    ("midpoint time reversibility", check_reversibility),
]


def run_selftest() -> int:
    failures = 0
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += not ok
    return 0 if failures == 0 else 1
