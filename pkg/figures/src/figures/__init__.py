"""Figure and table generation for the CLDG solver's CSV outputs."""

from .csvio import SchemaError, Table, read_table
from .render import render
from .specfile import FigureSpec, SpecError, parse_spec

__version__ = "0.1.0"

__all__ = [
    "SchemaError",
    "Table",
    "read_table",
    "render",
    "FigureSpec",
    "SpecError",
    "parse_spec",
    "__version__",
]
