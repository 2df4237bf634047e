"""make_figure entry point: render one figure spec."""

from __future__ import annotations

import argparse
import sys

from .csvio import SchemaError
from .render import render
from .specfile import SpecError, parse_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="make_figure",
        description="Render a solver CSV into a figure or text table",
    )
    parser.add_argument("spec", help="flat key=value figure spec file")
    args = parser.parse_args(argv)
    try:
        with open(args.spec) as fh:
            spec = parse_spec(fh.read())
        path = render(spec)
    except (OSError, SpecError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
