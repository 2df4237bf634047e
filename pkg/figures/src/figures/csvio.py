"""Reading the solver's documented CSV outputs, with loud schema checks."""

from __future__ import annotations

import numpy as np

__all__ = ["SchemaError", "Table", "read_table", "require_columns"]

CHARGE_COLUMNS = ("t", "charge", "drift", "relative_drift")
SNAPSHOT_COLUMNS = ("x", "r", "s", "abs")
CONVERGENCE_COLUMNS = ("theta", "k", "N", "h", "l2_error", "order")
PROJECTION_COLUMNS = ("theta", "k", "N", "h", "l2_error", "slope")


class SchemaError(ValueError):
    """A CSV does not match the schema documented by the producing module."""


class Table:
    """Parsed CSV: named numeric columns plus the producer's config stamp."""

    def __init__(self, path: str, columns: list[str], rows: list[list[float]],
                 stamp: str):
        self.path = path
        self.columns = columns
        self.stamp = stamp
        data = np.asarray(rows, dtype=float) if rows else np.empty((0, len(columns)))
        self._by_name = {name: data[:, i] for i, name in enumerate(columns)}

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self._by_name[name]
        except KeyError:
            raise SchemaError(
                f"{self.path}: missing column {name!r} (has {', '.join(self.columns)})"
            ) from None

    @property
    def n_rows(self) -> int:
        return next(iter(self._by_name.values())).size if self._by_name else 0


def read_table(path: str) -> Table:
    """Parse one solver CSV: optional '# config:' comment, header, rows.

    Empty cells parse as nan (the convergence CSV leaves the first row's
    order blank).
    """
    stamp = ""
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                comment = line.lstrip("#").strip()
                if comment.startswith("config:"):
                    stamp = comment[len("config:"):].strip()
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(header)} cells, got {len(cells)}"
                )
            rows.append([float(c) if c.strip() else float("nan") for c in cells])
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    return Table(path, header, rows, stamp)


def require_columns(table: Table, columns, what: str):
    missing = [c for c in columns if c not in table.columns]
    if missing:
        raise SchemaError(
            f"{table.path}: {what} is missing column {missing[0]!r} "
            f"(has {', '.join(table.columns)})"
        )
