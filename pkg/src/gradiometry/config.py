"""
Structured run configuration (YAML).

Physical quantities use unit-suffixed keys. A full example::

    seed: 7
    output_dir: out
    model:
      background_density_kg_m3: 1025.0
      bodies:
        - {kind: point_mass, center_m: [0, 0, -100], mass_kg: 1.0e7}
        - {kind: sphere, center_m: [50, 0, -40], density_kg_m3: 2700, radius_m: 10}
        - kind: composite
          children:
            - {kind: point_mass, center_m: [0, 0, -5], mass_kg: 1.0e5}
    interferometer:
      atom_mass_kg: 1.443160648e-25
      launch_point_m: [0, 0, 0]
      v_x_mps: 0.01
      v_z_mps: 0.0058
      pulse_interval_s: 0.1
    gradiometer: {baseline_m: 1.0, phase_noise_rad: 0.001}
    phase: {field: {uniform_g_mps2: 9.8}, tolerance_rad: 1.0e-6}
    field: {points_m: [[0, 0, 10], [0, 0, 20]]}
    instrument: {reference: Birmingham}
    route:
      setup_time_s: 900
      csv: route.csv            # x_m, y_m, z_m, dwell_s
    detect: {standoff_min_m: 10, standoff_max_m: 1000, samples: 200, dwell_s: 100}
    cow_scan: {g_mps2: 9.8, n_angles: 32}
    noise: {operation: resolution, density_E_rtHz: 470, tau_s: 600}

Every parser raises :class:`ConfigError` naming the dotted key at fault.
"""
import csv
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import yaml

from .constants import EOTVOS
from .errors import ConfigError
from .field import Composite, DensityModel, PointMass, UniformSphere
from .interferometer import (
    GradiometerConfig,
    InterferometerConfig,
    linear_gradient_potential,
    uniform_field_potential,
)
from .io import parse_instruments_csv
from .noise import InstrumentSpec, find_instrument
from .survey import Route

SCENARIOS = ("field", "phase", "gradiometer", "noise", "survey", "detect", "cow-scan", "instruments")


def load_config(path) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a mapping")
    data.setdefault("_base_dir", os.path.dirname(os.path.abspath(path)))
    return data


def section(cfg, key):
    if key not in cfg or cfg[key] is None:
        raise ConfigError(key, "required section is missing")
    value = cfg[key]
    if not isinstance(value, dict):
        raise ConfigError(key, "must be a mapping")
    return value


def _number(sec, key, prefix, default=None, required=True, positive=False, nonneg=False):
    name = f"{prefix}.{key}"
    if key not in sec or sec[key] is None:
        if required and default is None:
            raise ConfigError(name, "required key is missing")
        return default
    value = sec[key]
    if isinstance(value, bool):
        raise ConfigError(name, "must be a number")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"must be a number, got {value!r}") from None
    if not np.isfinite(value):
        raise ConfigError(name, "must be finite")
    if positive and not value > 0:
        raise ConfigError(name, "must be > 0")
    if nonneg and not value >= 0:
        raise ConfigError(name, "must be >= 0")
    return value


def _vector(sec, key, prefix, default=None):
    name = f"{prefix}.{key}"
    if key not in sec:
        if default is None:
            raise ConfigError(name, "required key is missing")
        return np.asarray(default, dtype=float)
    try:
        arr = np.asarray(sec[key], dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(name, "must be a list of 3 numbers") from None
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ConfigError(name, "must be a list of 3 finite numbers")
    return arr


def parse_body(spec, prefix):
    if not isinstance(spec, dict):
        raise ConfigError(prefix, "body must be a mapping")
    kind = spec.get("kind")
    if kind == "point_mass":
        return PointMass(_vector(spec, "center_m", prefix), _number(spec, "mass_kg", prefix))
    if kind in ("sphere", "uniform_sphere"):
        center = _vector(spec, "center_m", prefix)
        radius = _number(spec, "radius_m", prefix, positive=True)
        if "density_kg_m3" in spec:
            density = _number(spec, "density_kg_m3", prefix)
        elif "mass_kg" in spec:
            density = _number(spec, "mass_kg", prefix) / (4.0 / 3.0 * np.pi * radius**3)
        else:
            raise ConfigError(f"{prefix}.density_kg_m3", "sphere needs density_kg_m3 or mass_kg")
        return UniformSphere(center, density, radius)
    if kind == "composite":
        children = spec.get("children")
        if not isinstance(children, list) or not children:
            raise ConfigError(f"{prefix}.children", "composite needs a non-empty list")
        return Composite(tuple(parse_body(c, f"{prefix}.children[{i}]") for i, c in enumerate(children)))
    raise ConfigError(f"{prefix}.kind", f"unknown body kind {kind!r}")


def parse_model(cfg) -> DensityModel:
    sec = section(cfg, "model")
    bodies = sec.get("bodies", [])
    if not isinstance(bodies, list):
        raise ConfigError("model.bodies", "must be a list")
    parsed = tuple(parse_body(b, f"model.bodies[{i}]") for i, b in enumerate(bodies))
    bg = _number(sec, "background_density_kg_m3", "model", default=0.0, required=False)
    return DensityModel(parsed, background_density=bg or 0.0)


def parse_interferometer(cfg) -> InterferometerConfig:
    sec = section(cfg, "interferometer")
    p = "interferometer"
    mass = _number(sec, "atom_mass_kg", p, positive=True)
    launch = _vector(sec, "launch_point_m", p, default=(0.0, 0.0, 0.0))
    v_x = _number(sec, "v_x_mps", p, positive=True)
    T = _number(sec, "pulse_interval_s", p, positive=True)
    if "k_eff_per_m" in sec and "v_z_mps" not in sec:
        k = _number(sec, "k_eff_per_m", p, positive=True)
        return InterferometerConfig.from_k_eff(k, mass, launch, v_x, T)
    v_z = _number(sec, "v_z_mps", p)
    if v_z == 0:
        raise ConfigError(f"{p}.v_z_mps", "must be non-zero")
    return InterferometerConfig(mass, launch, v_x, v_z, T)


def parse_gradiometer(cfg) -> GradiometerConfig:
    lower = parse_interferometer(cfg)
    sec = section(cfg, "gradiometer")
    baseline = _number(sec, "baseline_m", "gradiometer", positive=True)
    return GradiometerConfig.from_lower(lower, baseline)


def parse_potential(cfg, sec, prefix):
    """Field used by the phase scenarios: uniform, linear-gradient or the model."""
    spec = sec.get("field", {"model": True})
    if not isinstance(spec, dict):
        raise ConfigError(f"{prefix}.field", "must be a mapping")
    if "uniform_g_mps2" in spec:
        g = _number(spec, "uniform_g_mps2", f"{prefix}.field")
        return uniform_field_potential(g), g
    if "linear_gradient" in spec:
        lin = spec["linear_gradient"]
        if not isinstance(lin, dict):
            raise ConfigError(f"{prefix}.field.linear_gradient", "must be a mapping")
        q = f"{prefix}.field.linear_gradient"
        g0 = _number(lin, "g0_mps2", q)
        grad = _number(lin, "gradient_E", q) * EOTVOS
        z_ref = _number(lin, "z_ref_m", q, default=0.0, required=False) or 0.0
        return linear_gradient_potential(g0, grad, z_ref), None
    if spec.get("model"):
        return parse_model(cfg), None
    raise ConfigError(f"{prefix}.field", "expected uniform_g_mps2, linear_gradient or model: true")


def parse_instrument(cfg) -> InstrumentSpec:
    sec = section(cfg, "instrument")
    p = "instrument"
    if "reference" in sec:
        try:
            return find_instrument(str(sec["reference"]))
        except KeyError:
            raise ConfigError(f"{p}.reference", f"unknown instrument {sec['reference']!r}") from None
    if "csv" in sec:
        path = os.path.join(cfg.get("_base_dir", "."), str(sec["csv"]))
        try:
            with open(path, encoding="utf-8") as fh:
                specs = parse_instruments_csv(fh.read())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"{p}.csv", str(exc)) from exc
        name = sec.get("name")
        for s in specs:
            if s.name == name:
                return s
        raise ConfigError(f"{p}.name", f"no instrument named {name!r} in {path}")
    grad = _number(sec, "gradient_noise_E_rtHz", p, required=False, nonneg=True)
    accel = _number(sec, "accel_noise_g_rtHz", p, required=False, nonneg=True)
    if grad is None and accel is None:
        raise ConfigError(f"{p}.gradient_noise_E_rtHz", "need gradient_noise_E_rtHz or accel_noise_g_rtHz")
    baseline = _number(sec, "baseline_m", p, required=False, positive=True)
    if grad is None and baseline is None:
        raise ConfigError(f"{p}.baseline_m", "required with accel_noise_g_rtHz")
    return InstrumentSpec(
        name=str(sec.get("name", "custom")),
        baseline=baseline,
        gradient_noise_density=grad,
        accel_noise_density=accel,
        source_note=str(sec.get("source_note", "")),
    )


def read_route_csv(path, setup_time=0.0, prefix="route.csv"):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(prefix, f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(prefix, "route CSV has no waypoints")
    missing = {"x_m", "y_m", "z_m", "dwell_s"} - set(rows[0])
    if missing:
        raise ConfigError(prefix, f"route CSV lacks columns {sorted(missing)}")
    try:
        pos = [[float(r["x_m"]), float(r["y_m"]), float(r["z_m"])] for r in rows]
        dwell = [float(r["dwell_s"]) for r in rows]
        return Route.from_arrays(pos, dwell, setup_time)
    except ValueError as exc:
        raise ConfigError(prefix, str(exc)) from exc


def parse_route(cfg) -> Route:
    sec = section(cfg, "route")
    setup = _number(sec, "setup_time_s", "route", default=0.0, required=False, nonneg=True) or 0.0
    if "csv" in sec:
        path = os.path.join(cfg.get("_base_dir", "."), str(sec["csv"]))
        return read_route_csv(path, setup)
    wps = sec.get("waypoints")
    if not isinstance(wps, list) or not wps:
        raise ConfigError("route.waypoints", "need a non-empty list or a csv path")
    pos, dwell = [], []
    for i, w in enumerate(wps):
        p = f"route.waypoints[{i}]"
        if not isinstance(w, dict):
            raise ConfigError(p, "must be a mapping")
        pos.append(_vector(w, "position_m", p))
        dwell.append(_number(w, "dwell_s", p, positive=True))
    return Route.from_arrays(pos, dwell, setup)


@dataclass
class RunConfig:
    scenario: str
    data: Dict[str, Any] = field(default_factory=dict)
    output_dir: str = "out"
    seed: int = 0
    tolerance: Optional[float] = None


def apply_override(data, assignment):
    """Apply ``a.b.c=value`` to a nested config mapping (scalar fields only)."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like key.path=value")
    path, raw = assignment.split("=", 1)
    keys = path.strip().split(".")
    target = data
    for k in keys[:-1]:
        node = target.get(k)
        if node is None:
            node = target[k] = {}
        if not isinstance(node, dict):
            raise ConfigError(path, f"{k} is not a section")
        target = node
    value = yaml.safe_load(raw)
    if isinstance(value, (dict, list)):
        raise ConfigError(path, "overrides may only set scalar values")
    target[keys[-1]] = value
    return data
