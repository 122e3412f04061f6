"""Run configuration: flat ``key = value`` text with embedded defaults."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Mapping

from .extended_phase import ExtendedPhaseState, ParticleParams
from .orbit_dynamics import IntegratorConfig

SEED_ENV = "PM21_SEED"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # particle
    q: float = 1.0
    m0: float = 1.0
    c: float = 1.0
    # fields
    Ex: float = 0.0
    Ey: float = 0.0
    B: float = 1.0
    # initial state
    x: float = 0.0
    y: float = 0.0
    Px: float = 1.0
    Py: float = 0.0
    pix: float = 0.0
    piy: float = 0.0
    beta: float = 0.0
    # time
    t_end: float = 10.0
    samples: int = 1001
    # integrator
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    seed: int = 20240601
    # checks
    check_energy: bool = True
    check_casimirs: bool = True
    check_equivalence: bool = True
    threshold: float = 1e-7

    def __post_init__(self):
        if self.m0 <= 0 or self.c <= 0:
            raise ConfigError("m0 and c must be positive")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.samples < 2:
            raise ConfigError("samples must be >= 2")
        if self.t_end <= 0:
            raise ConfigError("t_end must be positive")

    @property
    def particle(self) -> ParticleParams:
        return ParticleParams(self.q, self.m0, self.c)

    @property
    def initial_state(self) -> ExtendedPhaseState:
        return ExtendedPhaseState(
            self.x, self.y, self.Px, self.Py, self.Ex, self.Ey, self.pix, self.piy, self.B, self.beta
        )

    @property
    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(rtol=self.rel_tol, atol=self.abs_tol, samples=self.samples)

    def to_text(self) -> str:
        return "".join(f"{k} = {_format(v)}\n" for k, v in asdict(self).items())


FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _format(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _convert(key: str, raw: str):
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_lines(lines: Iterable[str]) -> dict:
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in FIELD_TYPES:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        out[key] = _convert(key, val)
    return out


def load_config(
    path: str | Path | None = None,
    overrides: Mapping[str, str] | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """Defaults, then the file, then the environment seed, then explicit overrides."""
    values = {}
    if path is not None:
        values.update(parse_lines(Path(path).read_text().splitlines()))
    env = os.environ if environ is None else environ
    if SEED_ENV in env:
        values["seed"] = _convert("seed", env[SEED_ENV])
    for key, raw in (overrides or {}).items():
        if key not in FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _convert(key, raw)
    return replace(RunConfig(), **values)
