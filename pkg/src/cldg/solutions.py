"""Closed-form solutions and initial data for the experiment suite.

All formulas target i u_t + u_xx + 2|u|^2 u = 0 (cubic coefficient 2)
and return the real/imaginary component pair (r, s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "soliton_exact",
    "soliton_components_at",
    "double_soliton_ic",
    "gaussian_ic",
    "InitialCondition",
]


def soliton_exact(t: float, x, x0: float):
    """Traveling single soliton: sech(x + x0 - 4t) * exp(2i(x + x0 - 3t/2)).

    Speed 4, unit amplitude; |u| = sech(x + x0 - 4t).
    """
    x = np.asarray(x, dtype=float)
    zeta = x + x0 - 4.0 * t
    phase = 2.0 * (x + x0 - 1.5 * t)
    amp = 1.0 / np.cosh(zeta)
    return amp * np.cos(phase), amp * np.sin(phase)


def soliton_components_at(t: float, x0: float):
    """(r, s) callables of x at a fixed time, for projection and error norms."""
    return (
        lambda x: soliton_exact(t, x, x0)[0],
        lambda x: soliton_exact(t, x, x0)[1],
    )


def double_soliton_ic(x, c1: float, c2: float, x1: float, x2: float):
    """Two sech pulses with linear phases: collision initial data."""
    x = np.asarray(x, dtype=float)
    r = np.zeros_like(x)
    s = np.zeros_like(x)
    for c, xc in ((c1, x1), (c2, x2)):
        amp = 1.0 / np.cosh(x - xc)
        phase = 2.0 * c * (x - xc)
        r += amp * np.cos(phase)
        s += amp * np.sin(phase)
    return r, s


def gaussian_ic(x, amplitude: float):
    """Gaussian pulse A * exp(-x^2 + 2ix): mobile-soliton-birth initial data."""
    x = np.asarray(x, dtype=float)
    amp = amplitude * np.exp(-(x**2))
    return amp * np.cos(2.0 * x), amp * np.sin(2.0 * x)


@dataclass(frozen=True)
class InitialCondition:
    """Named initial-data family; call to get the (r0, s0) component pair."""

    kind: str
    params: dict

    @classmethod
    def single_soliton(cls, x0: float) -> "InitialCondition":
        return cls("single_soliton", {"x0": x0})

    @classmethod
    def double_soliton(cls, c1, c2, x1, x2) -> "InitialCondition":
        return cls("double_soliton", {"c1": c1, "c2": c2, "x1": x1, "x2": x2})

    @classmethod
    def gaussian_pulse(cls, amplitude: float) -> "InitialCondition":
        return cls("gaussian_pulse", {"A": amplitude})

    def component_functions(self):
        if self.kind == "single_soliton":
            return soliton_components_at(0.0, self.params["x0"])
        if self.kind == "double_soliton":
            p = self.params
            return (
                lambda x: double_soliton_ic(x, p["c1"], p["c2"], p["x1"], p["x2"])[0],
                lambda x: double_soliton_ic(x, p["c1"], p["c2"], p["x1"], p["x2"])[1],
            )
        if self.kind == "gaussian_pulse":
            amp = self.params["A"]
            return (
                lambda x: gaussian_ic(x, amp)[0],
                lambda x: gaussian_ic(x, amp)[1],
            )
        raise ValueError(f"unknown initial condition kind {self.kind!r}")
