"""Flat key=value experiment configuration: parsing, defaults, validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

__all__ = ["RunConfig", "ConfigError", "parse_config", "EXPERIMENTS"]

EXPERIMENTS = (
    "soliton",
    "double_soliton",
    "gaussian",
    "converge",
    "project_study",
    "conserve_check",
)

# experiments that march in time and therefore need tau, T, a mesh, ...
_EVOLVING = ("soliton", "double_soliton", "gaussian", "conserve_check")

# full-scale sweep values behind --paper-scale; desk scale is the default
CONVERGE_DESK_TAU = 1e-4
CONVERGE_DESK_T = 0.5
CONVERGE_PAPER_TAU = 1e-5
CONVERGE_PAPER_T = 1.0


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    experiment: str
    domain: Optional[tuple[float, float]] = None
    n_cells: Optional[int] = None
    n_list: list[int] = field(default_factory=list)
    k: Optional[int] = None
    theta: Optional[float] = None
    lam: float = 2.0
    tau: Optional[float] = None
    T: Optional[float] = None
    x0: float = 10.0
    c1: float = 1.0
    c2: float = -1.0
    x1: float = -10.0
    x2: float = 10.0
    A: float = 2.0
    snapshot_times: list[float] = field(default_factory=list)
    output_dir: str = "out"
    fp_tolerance: float = 1e-13
    max_iterations: int = 100
    n_quad: Optional[int] = None
    n_quad_error: Optional[int] = None
    initial_data: str = "l2_projection"
    projection_kind: str = "P"
    drift_tolerance: float = 1e-10
    workers: int = 1

    def resolved_items(self) -> list[tuple[str, str]]:
        """All settings as sorted (key, rendered value) pairs: the stamp
        embedded in every CSV header for reproducibility."""
        names = {"lam": "lambda", "n_list": "N_list"}
        out = []
        for attr, value in self.__dict__.items():
            if value is None or value == []:
                continue
            if isinstance(value, (list, tuple)):
                rendered = ",".join(_render(v) for v in value)
            else:
                rendered = _render(value)
            out.append((names.get(attr, attr), rendered))
        return sorted(out)

    def stamp(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.resolved_items())


def _render(value) -> str:
    # repr is the shortest exact round-trip form: keeps the stamp readable
    return repr(value) if isinstance(value, float) else str(value)


_FLOAT_KEYS = {
    "theta", "lambda", "tau", "T", "x0", "c1", "c2", "x1", "x2", "A",
    "fp_tolerance", "drift_tolerance",
}
_INT_KEYS = {"n_cells", "k", "max_iterations", "n_quad", "n_quad_error", "workers"}
_ATTR_FOR_KEY = {"lambda": "lam", "N_list": "n_list"}


def _parse_pairs(text: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = (value, lineno)
    return pairs


def parse_config(text: str, experiment: str | None = None) -> RunConfig:
    """Parse and validate a flat key=value config.

    ``experiment`` supplies the experiment kind when the caller (a CLI
    subcommand) fixes it; a conflicting key in the text is an error.
    Unknown keys are rejected with their line number.
    """
    pairs = _parse_pairs(text)

    known = set(_FLOAT_KEYS) | set(_INT_KEYS) | {
        "experiment", "domain", "N_list", "snapshot_times", "output_dir",
        "initial_data", "projection_kind",
    }
    for key, (_, lineno) in pairs.items():
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    def take(key):
        return pairs.pop(key, (None, None))[0]

    exp_value = take("experiment")
    if experiment is not None and exp_value is not None and exp_value != experiment:
        raise ConfigError(
            f"config says experiment={exp_value!r} but {experiment!r} was requested"
        )
    experiment = experiment or exp_value
    if experiment is None:
        raise ConfigError("missing required key 'experiment'")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; expected one of {', '.join(EXPERIMENTS)}"
        )

    cfg = RunConfig(experiment=experiment)

    domain = take("domain")
    if domain is not None:
        parts = domain.split(",")
        if len(parts) != 2:
            raise ConfigError(f"domain must be 'a,b', got {domain!r}")
        a, b = (_to_float("domain", p) for p in parts)
        if not a < b:
            raise ConfigError(f"domain needs a < b, got {domain!r}")
        cfg.domain = (a, b)

    n_list = take("N_list")
    if n_list is not None:
        cfg.n_list = [_to_int("N_list", p) for p in n_list.split(",")]
        if any(b <= a for a, b in zip(cfg.n_list, cfg.n_list[1:])):
            raise ConfigError("N_list must be strictly increasing")

    snapshot_times = take("snapshot_times")
    if snapshot_times is not None and snapshot_times != "":
        cfg.snapshot_times = [_to_float("snapshot_times", p) for p in snapshot_times.split(",")]

    for key in ("output_dir", "initial_data", "projection_kind"):
        value = take(key)
        if value is not None:
            setattr(cfg, key, value)

    for key, (value, _) in pairs.items():
        attr = _ATTR_FOR_KEY.get(key, key)
        if key in _FLOAT_KEYS:
            setattr(cfg, attr, _to_float(key, value))
        elif key in _INT_KEYS:
            setattr(cfg, attr, _to_int(key, value))

    _validate(cfg)
    return cfg


def _to_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"key {key!r}: not a number: {value!r}") from None


def _to_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"key {key!r}: not an integer: {value!r}") from None


def _require(cfg: RunConfig, *keys: str):
    for key in keys:
        attr = _ATTR_FOR_KEY.get(key, key)
        value = getattr(cfg, attr)
        missing = value is None or (key == "N_list" and not value)
        if missing:
            raise ConfigError(
                f"experiment {cfg.experiment!r} requires key {key!r}"
            )


def _validate(cfg: RunConfig):
    exp = cfg.experiment
    if cfg.domain is None:
        # paper defaults: the accuracy sweep and soliton birth live on
        # [-30, 30], the qualitative soliton runs on [-25, 25],
        # the projection study on the unit interval
        if exp in ("converge", "gaussian"):
            cfg.domain = (-30.0, 30.0)
        elif exp == "project_study":
            cfg.domain = (0.0, 1.0)
        else:
            cfg.domain = (-25.0, 25.0)
    if exp in _EVOLVING:
        _require(cfg, "n_cells", "k", "theta", "tau", "T")
    elif exp == "converge":
        _require(cfg, "k", "theta")
        if not cfg.n_list:
            raise ConfigError("experiment 'converge' requires key 'N_list'")
        if cfg.tau is None:
            cfg.tau = CONVERGE_DESK_TAU
        if cfg.T is None:
            cfg.T = CONVERGE_DESK_T
    elif exp == "project_study":
        _require(cfg, "k", "theta")
        if not cfg.n_list:
            raise ConfigError("experiment 'project_study' requires key 'N_list'")

    if cfg.theta is not None and not 0.0 <= cfg.theta <= 1.0:
        raise ConfigError(f"theta must lie in [0, 1], got {cfg.theta}")
    if cfg.k is not None and cfg.k < 1:
        raise ConfigError(f"k must be >= 1, got {cfg.k}")
    if cfg.n_cells is not None and cfg.n_cells < 2:
        raise ConfigError(f"n_cells must be >= 2, got {cfg.n_cells}")
    if cfg.tau is not None and not cfg.tau > 0:
        raise ConfigError(f"tau must be positive, got {cfg.tau}")
    if cfg.T is not None and not cfg.T > 0:
        raise ConfigError(f"T must be positive, got {cfg.T}")
    if not cfg.fp_tolerance > 0:
        raise ConfigError(f"fp_tolerance must be positive, got {cfg.fp_tolerance}")
    if cfg.initial_data not in ("l2_projection", "generalized_P"):
        raise ConfigError(f"unknown initial_data {cfg.initial_data!r}")
    if cfg.projection_kind not in ("P", "Q"):
        raise ConfigError(f"projection_kind must be 'P' or 'Q', got {cfg.projection_kind!r}")
    if cfg.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {cfg.workers}")


def converge_scale(cfg: RunConfig, paper_scale: bool) -> tuple[float, float]:
    """(tau, T) for the accuracy sweep; paper_scale restores the printed values."""
    if paper_scale:
        return CONVERGE_PAPER_TAU, CONVERGE_PAPER_T
    return cfg.tau, cfg.T
