"""Rendering: solver CSVs to profile/surface plots, drift plots, and tables.

Rendering is read-only over its inputs and deterministic: re-running a
spec overwrites the output with identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import (
    CHARGE_COLUMNS,
    CONVERGENCE_COLUMNS,
    SNAPSHOT_COLUMNS,
    SchemaError,
    read_table,
    require_columns,
)
from .specfile import FigureSpec

__all__ = ["render"]


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=110)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _finish(fig, ax, spec: FigureSpec, default_xlabel: str, default_ylabel: str):
    ax.set_xlabel(spec.xlabel or default_xlabel)
    ax.set_ylabel(spec.ylabel or default_ylabel)
    ax.grid(True, linestyle=":", alpha=0.6)
    fig.tight_layout()
    fig.savefig(spec.output, metadata={"Software": "cldg-figures"})
    plt.close(fig)


def _render_profile(spec: FigureSpec) -> str:
    table = read_table(spec.inputs[0])
    require_columns(table, SNAPSHOT_COLUMNS, "snapshot CSV")
    if spec.component not in SNAPSHOT_COLUMNS[1:]:
        raise SchemaError(f"unknown snapshot component {spec.component!r}")
    fig, ax = _new_axes(spec)
    ax.plot(table["x"], table[spec.component], lw=1.2)
    label = "|u|" if spec.component == "abs" else spec.component
    _finish(fig, ax, spec, "x", label)
    return spec.output


def _render_surface(spec: FigureSpec) -> str:
    """Waterfall of snapshot profiles, one offset line per time."""
    tables = [read_table(path) for path in spec.inputs]
    for table in tables:
        require_columns(table, SNAPSHOT_COLUMNS, "snapshot CSV")
    times = spec.times if len(spec.times) == len(tables) else list(range(len(tables)))
    peak = max(float(np.max(t[spec.component])) for t in tables) or 1.0
    spacing = np.min(np.diff(times)) if len(times) > 1 else 1.0
    scale = 0.9 * spacing / peak
    fig, ax = _new_axes(spec)
    for t_val, table in sorted(zip(times, tables)):
        ax.plot(table["x"], t_val + scale * table[spec.component], lw=1.0)
    _finish(fig, ax, spec, "x", "t (profiles offset by |u|)")
    return spec.output


def _render_charge_drift(spec: FigureSpec) -> str:
    table = read_table(spec.inputs[0])
    require_columns(table, CHARGE_COLUMNS, "charge series CSV")
    fig, ax = _new_axes(spec)
    # log scale needs a floor: exactly conserved series would hit zero
    drift = np.maximum(np.abs(table["drift"]), spec.drift_floor)
    ax.semilogy(table["t"], drift, lw=1.0)
    _finish(fig, ax, spec, "t", "|charge(t) - charge(0)|")
    return spec.output


def _format_block(theta: float, rows: list[tuple[int, float, float]]) -> str:
    lines = [f"theta = {theta:g}", f"{'N':>6}  {'L2-error':>10}  {'Order':>6}"]
    for n, err, order in rows:
        err_text = f"{err:.2E}" if np.isfinite(err) else "failed"
        order_text = f"{order:.2f}" if np.isfinite(order) else "-"
        lines.append(f"{n:>6}  {err_text:>10}  {order_text:>6}")
    return "\n".join(lines)


def _render_accuracy_table(spec: FigureSpec) -> str:
    blocks = []
    for path in spec.inputs:
        table = read_table(path)
        require_columns(table, CONVERGENCE_COLUMNS, "convergence CSV")
        for theta in dict.fromkeys(table["theta"]):  # preserve order
            mask = table["theta"] == theta
            rows = list(
                zip(
                    table["N"][mask].astype(int),
                    table["l2_error"][mask],
                    table["order"][mask],
                )
            )
            blocks.append(_format_block(float(theta), rows))
    text = ("\n\n".join(blocks)) + "\n"
    if spec.title:
        text = spec.title + "\n\n" + text
    with open(spec.output, "w") as fh:
        fh.write(text)
    return spec.output


_RENDERERS = {
    "profile": _render_profile,
    "surface": _render_surface,
    "charge_drift": _render_charge_drift,
    "accuracy_table": _render_accuracy_table,
}


def render(spec: FigureSpec) -> str:
    """Produce the image or text table named by the spec; returns its path."""
    return _RENDERERS[spec.kind](spec)
