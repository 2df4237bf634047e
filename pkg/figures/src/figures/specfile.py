"""Flat key=value figure-spec files, same format as the solver configs."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["FigureSpec", "SpecError", "parse_spec"]

KINDS = ("profile", "surface", "charge_drift", "accuracy_table")

KNOWN_KEYS = {
    "kind", "input", "output", "title", "xlabel", "ylabel",
    "component", "times", "drift_floor",
}


class SpecError(ValueError):
    pass


@dataclass
class FigureSpec:
    kind: str
    inputs: list[str]
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    component: str = "abs"
    times: list[float] = field(default_factory=list)
    drift_floor: float = 1e-17


def parse_spec(text: str) -> FigureSpec:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise SpecError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise SpecError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()

    for required in ("kind", "input", "output"):
        if required not in pairs:
            raise SpecError(f"missing required key {required!r}")
    kind = pairs["kind"]
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}")

    spec = FigureSpec(
        kind=kind,
        inputs=[p.strip() for p in pairs["input"].split(",") if p.strip()],
        output=pairs["output"],
        title=pairs.get("title", ""),
        xlabel=pairs.get("xlabel", ""),
        ylabel=pairs.get("ylabel", ""),
        component=pairs.get("component", "abs"),
    )
    if "times" in pairs:
        spec.times = [float(p) for p in pairs["times"].split(",") if p.strip()]
    if "drift_floor" in pairs:
        spec.drift_floor = float(pairs["drift_floor"])
        if spec.drift_floor <= 0:
            raise SpecError("drift_floor must be positive")
    if not spec.inputs:
        raise SpecError("input must name at least one CSV")
    return spec
