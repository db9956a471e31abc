"""Run configuration: one JSON document, unknown keys rejected."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ParamsSpec:
    alpha: float = 1.0
    beta: float = 0.6
    delta: float = 0.25


@dataclass(frozen=True)
class DatumSpec:
    kind: str = "tanh_step"
    width: float = 1.0
    path: str | None = None


@dataclass(frozen=True)
class GridSpec:
    K_max: float | None = None
    dk: float = 0.02
    refine_floor: float = 1e-4
    step_factor: float = 0.1


@dataclass(frozen=True)
class EvolutionSpec:
    L_left: float = 300.0
    L_right: float = 400.0
    dx: float = 0.05
    t_end: float = 40.0
    record_times: tuple = (20.0, 40.0)
    dt: float | None = None


@dataclass(frozen=True)
class SweepSpec:
    xi: tuple = (-4.0, 3.0, 10.0)
    t: tuple = (20.0, 40.0)


@dataclass(frozen=True)
class HalflineSpec:
    alpha: float = 1.0
    omega: float = -4.0


@dataclass(frozen=True)
class RunConfig:
    params: ParamsSpec = field(default_factory=ParamsSpec)
    datum: DatumSpec = field(default_factory=DatumSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    evolution: EvolutionSpec = field(default_factory=EvolutionSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    halfline: HalflineSpec = field(default_factory=HalflineSpec)


DATUM_KINDS = ("pure_step", "tanh_step", "file")
_SECTIONS = {f.name: f.default_factory for f in fields(RunConfig)}


def _number(section: str, key: str, value, *, positive=False, optional=False, integer_ok=True):
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be a finite number")
    if positive and value <= 0:
        raise ConfigError(f"{section}.{key} must be positive")
    return float(value)


def _number_list(section: str, key: str, value, *, positive=False):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{section}.{key} must be a non-empty list")
    return tuple(_number(section, key, v, positive=positive) for v in value)


def _build(section: str, cls, raw):
    if not isinstance(raw, dict):
        raise ConfigError(f"section '{section}' must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown key(s) in '{section}': {sorted(unknown)}")
    base = cls()
    vals = {f.name: getattr(base, f.name) for f in fields(cls)}
    vals.update(raw)
    return vals


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {sorted(unknown)}")
    v = _build("params", ParamsSpec, doc.get("params", {}))
    params = ParamsSpec(_number("params", "alpha", v["alpha"], positive=True),
                        _number("params", "beta", v["beta"]),
                        _number("params", "delta", v["delta"], positive=True))
    if params.delta >= params.alpha:
        raise ConfigError("params.delta must be smaller than params.alpha")

    v = _build("datum", DatumSpec, doc.get("datum", {}))
    if v["kind"] not in DATUM_KINDS:
        raise ConfigError(f"datum.kind must be one of {DATUM_KINDS}")
    if v["kind"] == "file" and not isinstance(v["path"], str):
        raise ConfigError("datum.path is required for kind 'file'")
    datum = DatumSpec(v["kind"], _number("datum", "width", v["width"], positive=True), v["path"])

    v = _build("grid", GridSpec, doc.get("grid", {}))
    grid = GridSpec(_number("grid", "K_max", v["K_max"], positive=True, optional=True),
                    _number("grid", "dk", v["dk"], positive=True),
                    _number("grid", "refine_floor", v["refine_floor"], positive=True),
                    _number("grid", "step_factor", v["step_factor"], positive=True))

    v = _build("evolution", EvolutionSpec, doc.get("evolution", {}))
    rec = v["record_times"]
    rec = _number_list("evolution", "record_times", list(rec), positive=True)
    if list(rec) != sorted(rec):
        raise ConfigError("evolution.record_times must be sorted ascending")
    evo = EvolutionSpec(_number("evolution", "L_left", v["L_left"], positive=True),
                        _number("evolution", "L_right", v["L_right"], positive=True),
                        _number("evolution", "dx", v["dx"], positive=True),
                        _number("evolution", "t_end", v["t_end"], positive=True),
                        rec,
                        _number("evolution", "dt", v["dt"], positive=True, optional=True))
    if rec[-1] > evo.t_end:
        raise ConfigError("evolution.record_times exceed t_end")

    v = _build("sweep", SweepSpec, doc.get("sweep", {}))
    sweep = SweepSpec(_number_list("sweep", "xi", list(v["xi"])),
                      _number_list("sweep", "t", list(v["t"]), positive=True))

    v = _build("halfline", HalflineSpec, doc.get("halfline", {}))
    half = HalflineSpec(_number("halfline", "alpha", v["alpha"], positive=True),
                        _number("halfline", "omega", v["omega"]))
    return RunConfig(params, datum, grid, evo, sweep, half)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return parse_config(doc)
