"""Case configuration: defaults, validation, and file/flag merging."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


class ConfigError(ValueError):
    """A configuration value is missing, malformed, or out of range."""


CASES = ("advection", "burgers", "sod", "shu_osher", "explosion")

DEFAULT_GRIDS = (64, 96, 128, 192, 256)

_DEFAULTS = {
    "advection": dict(n=128, m=3, k=8, n_d=13.0, dt=1e-4, t_final=1.0, probe_x=0.28),
    "burgers": dict(n=128, m=3, k=8, n_d=2.5, dt=1e-5, t_final=1.0),
    "sod": dict(n=128, m=3, k=8, n_d=2.5, dt=1e-5, t_final=0.4),
    "shu_osher": dict(n=256, m=5, k=8, n_d=6.5, dt=1e-5, t_final=0.36),
    "explosion": dict(nx=96, ny=96, m=3, k=8, n_d=2.5, dt=1e-5, t_final=0.25),
}

# conservative signal-speed bounds used by the time-step sanity check
_SPEED_BOUND = {
    "advection": 1.0,
    "burgers": 1.0,
    "sod": 3.0,
    "shu_osher": 5.0,
    "explosion": 3.0,
}


@dataclass
class CaseConfig:
    """Parameters of one benchmark run; unset fields take case defaults."""

    case: str
    n: int | None = None
    nx: int | None = None
    ny: int | None = None
    m: int | None = None
    k: int | None = None
    n_d: float | None = None
    dt: float | None = None
    t_final: float | None = None
    probe_x: float | None = None
    epsilon: float | None = None  # overrides the grid-proportional support rule
    grids: tuple[int, ...] | None = None
    out: str | None = None
    workers: int | None = None

    def resolved(self) -> "CaseConfig":
        """Fill per-case defaults and validate; raises ConfigError."""
        if self.case not in CASES:
            raise ConfigError(f"unknown case {self.case!r}; expected one of {', '.join(CASES)}")
        cfg = dataclasses.replace(self)
        for field, value in _DEFAULTS[self.case].items():
            if getattr(cfg, field) is None:
                setattr(cfg, field, value)
        if cfg.case == "explosion":
            cfg.nx = int(cfg.n) if cfg.n is not None else int(cfg.nx)
            cfg.ny = int(cfg.ny) if cfg.ny is not None else cfg.nx
            cfg.n = None
            for name in ("nx", "ny"):
                _check_grid_order(name, getattr(cfg, name))
        else:
            if cfg.nx is not None or cfg.ny is not None:
                raise ConfigError("Nx/Ny apply only to the explosion case; use N")
            cfg.n = int(cfg.n)
            _check_grid_order("N", cfg.n)
        for name in ("m", "k"):
            v = getattr(cfg, name)
            if int(v) != v:
                raise ConfigError(f"{name} must be an integer")
            setattr(cfg, name, int(v))
        if cfg.m < 1:
            raise ConfigError("m must be >= 1")
        if cfg.k < 0:
            raise ConfigError("k must be >= 0")
        n_min = min(v for v in (cfg.n, cfg.nx, cfg.ny) if v is not None)
        if not 0 < cfg.n_d < n_min:
            raise ConfigError("Nd must satisfy 0 < Nd < N")
        if cfg.epsilon is not None and not 0.0 < cfg.epsilon < 1.0:
            raise ConfigError("epsilon override must lie in (0, 1)")
        if cfg.dt <= 0:
            raise ConfigError("dt must be positive")
        if cfg.t_final <= 0:
            raise ConfigError("tfinal must be positive")
        step_count(cfg.dt, cfg.t_final)
        _check_time_step(cfg)
        if cfg.grids is not None:
            cfg.grids = tuple(int(g) for g in cfg.grids)
            for g in cfg.grids:
                _check_grid_order("grids", g)
                if not 0 < cfg.n_d < g:
                    raise ConfigError("Nd must satisfy 0 < Nd < N for every sweep grid")
        if cfg.workers is not None and cfg.workers < 1:
            raise ConfigError("workers must be >= 1")
        return cfg

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d.get("grids") is not None:
            d["grids"] = list(d["grids"])
        return d


def _check_grid_order(name: str, n) -> None:
    if n is None or int(n) != n or n < 4 or n % 2:
        raise ConfigError(f"{name} must be an even integer >= 4")


def step_count(dt: float, t_final: float) -> int:
    """Number of fixed steps covering t_final; must divide evenly."""
    n = round(t_final / dt)
    if n < 1 or abs(n * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise ConfigError("tfinal must be a whole number of dt steps")
    return n


def _check_time_step(cfg: CaseConfig) -> None:
    """Explicit-stability sanity bound: the collocation derivative spectrum
    grows like 0.089 N^2, and the three-stage integrator covers |z| <~ 2.5."""
    n_max = max(v for v in (cfg.n, cfg.nx, cfg.ny) if v is not None)
    lam = 0.089 * n_max**2 * _SPEED_BOUND[cfg.case]
    if cfg.dt > 2.5 / lam:
        raise ConfigError(
            f"dt={cfg.dt:g} exceeds the explicit stability estimate {2.5 / lam:.3g} "
            f"for N={n_max}"
        )


def load_config_file(path) -> dict:
    """Read a TOML or JSON config file into a flat dict of fields."""
    text_mode_json = str(path).endswith(".json")
    try:
        if text_mode_json:
            with open(path) as fh:
                data = json.load(fh)
        else:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"config file {path} is not well formed: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a table/object at top level")
    return data
