"""
Stop-and-measure survey simulation and anomaly detectability.

The gravity observable is the downward component ``-g_z`` (m/s^2) and the
gradient observable is ``Gamma_zz`` (Eotvos). Noise is white and Gaussian
per waypoint, drawn from a generator seeded by ``(seed, waypoint index)``
so serial and parallel evaluation agree.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .constants import EOTVOS, STANDARD_GRAVITY
from .errors import MissingNoiseDensity
from .field import DensityModel, evaluate_acceleration, evaluate_tensor
from .io import key_value_text
from .noise import Combination, InstrumentSpec, resolution_after_averaging

OBSERVABLES = ("g", "gamma_zz")


@dataclass(frozen=True)
class Waypoint:
    position: np.ndarray  # m
    dwell_time: float  # s

    def __post_init__(self):
        p = np.array(self.position, dtype=float).reshape(-1)
        if p.shape != (3,) or not np.all(np.isfinite(p)):
            raise ValueError("waypoint position must be a finite 3-vector")
        p.setflags(write=False)
        object.__setattr__(self, "position", p)
        if not self.dwell_time > 0:
            raise ValueError("dwell_time must be > 0")

    @property
    def elevation(self):
        return float(self.position[2])


@dataclass(frozen=True)
class Route:
    waypoints: Tuple[Waypoint, ...]
    setup_time: float = 0.0  # s

    def __post_init__(self):
        wps = tuple(self.waypoints)
        if not wps:
            raise ValueError("a route needs at least one waypoint")
        if not self.setup_time >= 0:
            raise ValueError("setup_time must be >= 0")
        object.__setattr__(self, "waypoints", wps)

    @classmethod
    def from_arrays(cls, positions, dwell_times, setup_time=0.0):
        positions = np.asarray(positions, dtype=float).reshape(-1, 3)
        dwell = np.broadcast_to(np.asarray(dwell_times, dtype=float), positions.shape[:1])
        return cls(tuple(Waypoint(p, float(d)) for p, d in zip(positions, dwell)), setup_time)

    @property
    def positions(self):
        return np.array([w.position for w in self.waypoints])

    @property
    def dwell_times(self):
        return np.array([w.dwell_time for w in self.waypoints])

    @property
    def timestamps(self):
        """End time of each measurement, counting setup before every stop."""
        return np.cumsum(self.setup_time + self.dwell_times)


@dataclass(frozen=True)
class MeasurementSeries:
    elevation: np.ndarray
    timestamp: np.ndarray
    true_g: np.ndarray
    true_gamma_zz: np.ndarray
    measured_g: np.ndarray
    measured_gamma_zz: np.ndarray
    sigma_g: np.ndarray
    sigma_gamma: np.ndarray

    COLUMNS = (
        "index",
        "elevation_m",
        "timestamp_s",
        "true_g_mps2",
        "true_gamma_zz_E",
        "measured_g_mps2",
        "measured_gamma_zz_E",
        "sigma_g_mps2",
        "sigma_gamma_E",
    )

    def rows(self):
        for i in range(len(self.elevation)):
            yield (
                i,
                self.elevation[i],
                self.timestamp[i],
                self.true_g[i],
                self.true_gamma_zz[i],
                self.measured_g[i],
                self.measured_gamma_zz[i],
                self.sigma_g[i],
                self.sigma_gamma[i],
            )


def _true_values(route, model):
    pts = route.positions
    g_down = -evaluate_acceleration(model, pts)[:, 2]
    gzz = evaluate_tensor(model, pts)[:, 2, 2] / EOTVOS
    return g_down, gzz


def simulate_survey(
    route: Route,
    model: DensityModel,
    instrument: InstrumentSpec,
    seed: int,
    observables: Optional[Sequence[str]] = None,
    combination: Combination = Combination.SINGLE_SENSOR_EQUIVALENT,
) -> MeasurementSeries:
    """
    Noisy measurements of gravity and Gamma_zz at every waypoint.

    ``observables`` defaults to whatever the instrument has a noise density
    for. The gradient noise of a gravimeter-pair instrument is derived from
    its acceleration noise and baseline. Observables that are not simulated
    have NaN measured values and sigmas.

    Raises
    ------
    MissingNoiseDensity
        If a requested observable has no noise density on the instrument.
    FieldPointInsideBody
    """
    g_density = None
    if instrument.accel_noise_density is not None:
        g_density = instrument.accel_noise_density * STANDARD_GRAVITY
    gamma_density = instrument.effective_gradient_density(combination)
    available = {"g": g_density, "gamma_zz": gamma_density}
    if observables is None:
        observables = [k for k in OBSERVABLES if available[k] is not None]
    for name in observables:
        if name not in available:
            raise ValueError(f"unknown observable {name!r}")
        if available[name] is None:
            raise MissingNoiseDensity(f"instrument {instrument.name!r} has no noise density for {name}")

    true_g, true_gzz = _true_values(route, model)
    n = len(route.waypoints)
    draws = np.array([np.random.default_rng([seed, i]).standard_normal(2) for i in range(n)])
    dwell = route.dwell_times

    def observe(name, truth, column):
        if name not in observables:
            return np.full(n, np.nan), np.full(n, np.nan)
        sigma = np.array([resolution_after_averaging(available[name], d) for d in dwell])
        return truth + sigma * draws[:, column], sigma

    measured_g, sigma_g = observe("g", true_g, 0)
    measured_gzz, sigma_gzz = observe("gamma_zz", true_gzz, 1)
    return MeasurementSeries(
        elevation=route.positions[:, 2],
        timestamp=route.timestamps,
        true_g=true_g,
        true_gamma_zz=true_gzz,
        measured_g=measured_g,
        measured_gamma_zz=measured_gzz,
        sigma_g=sigma_g,
        sigma_gamma=sigma_gzz,
    )


def anomaly_profile(route: Route, model: DensityModel):
    """Noiseless ``(elevation, g_anomaly, Gamma_zz)`` per waypoint; g relative to the first stop."""
    g_down, gzz = _true_values(route, model)
    elev = route.positions[:, 2]
    return [(float(e), float(g - g_down[0]), float(t)) for e, g, t in zip(elev, g_down, gzz)]


@dataclass(frozen=True)
class DetectabilityReport:
    anomaly_peak: float  # E
    noise_floor: float  # E
    max_detection_range: float  # m
    threshold: float
    ranges: np.ndarray
    anomaly: np.ndarray  # |Gamma_zz| per range, E

    @property
    def snr(self):
        if self.noise_floor == 0:
            return np.inf
        return self.anomaly_peak / self.noise_floor

    @property
    def snr_profile(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.anomaly / self.noise_floor

    def as_text(self):
        lines = [
            ("anomaly_peak_E", self.anomaly_peak),
            ("noise_floor_E", self.noise_floor),
            ("snr", self.snr),
            ("threshold", self.threshold),
            ("max_detection_range_m", self.max_detection_range),
            ("sweep_min_m", float(self.ranges[0])),
            ("sweep_max_m", float(self.ranges[-1])),
            ("sweep_samples", len(self.ranges)),
        ]
        return key_value_text(lines)


def crossing_range(ranges, snr, threshold=1.0):
    """
    Largest range at which the SNR profile reaches ``threshold``.

    The profile is interpolated linearly in log-log coordinates between
    samples. Returns 0 if the threshold is never reached and the last range
    if it is reached at every sample.
    """
    r = np.asarray(ranges, dtype=float)
    s = np.asarray(snr, dtype=float)
    above = s >= threshold
    if not np.any(above):
        return 0.0
    last = int(np.flatnonzero(above)[-1])
    if last == len(r) - 1:
        return float(r[-1])
    s0, s1 = s[last], s[last + 1]
    if s1 <= 0:
        return float(r[last])
    frac = (np.log(s0) - np.log(threshold)) / (np.log(s0) - np.log(s1))
    return float(np.exp(np.log(r[last]) + frac * (np.log(r[last + 1]) - np.log(r[last]))))


def detectability(
    model: DensityModel,
    instrument: InstrumentSpec,
    standoff_range: Sequence[float],
    dwell_time: float,
    threshold: float = 1.0,
    direction=(0.0, 0.0, 1.0),
    origin=None,
    combination: Combination = Combination.SINGLE_SENSOR_EQUIVALENT,
) -> DetectabilityReport:
    """
    Gamma_zz anomaly against standoff distance and the range where SNR falls to ``threshold``.

    Field points are ``origin + r * direction`` for each r in
    ``standoff_range`` (sorted ascending); ``origin`` defaults to the model
    centroid.
    """
    ranges = np.sort(np.asarray(standoff_range, dtype=float))
    if ranges.size == 0 or np.any(ranges <= 0):
        raise ValueError("standoff_range must contain positive distances")
    density = instrument.effective_gradient_density(combination)
    if density is None:
        raise MissingNoiseDensity(f"instrument {instrument.name!r} has no gradient noise density")
    floor = resolution_after_averaging(density, dwell_time)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    o = model.centroid if origin is None else np.asarray(origin, dtype=float)
    pts = o[None, :] + ranges[:, None] * u[None, :]
    anomaly = np.abs(evaluate_tensor(model, pts)[:, 2, 2]) / EOTVOS
    if np.isinf(floor):
        rmax = 0.0
    elif floor == 0:
        rmax = float(ranges[-1]) if np.any(anomaly > 0) else 0.0
    else:
        rmax = crossing_range(ranges, anomaly / floor, threshold)
    return DetectabilityReport(
        anomaly_peak=float(anomaly.max()),
        noise_floor=float(floor),
        max_detection_range=rmax,
        threshold=threshold,
        ranges=ranges,
        anomaly=anomaly,
    )


def submarine_model(
    length=100.0,
    hull_radius=5.0,
    n_segments=10,
    hull_density=900.0,
    water_density=1025.0,
    ballast_radius=2.0,
    ballast_drop=3.0,
    depth=0.0,
):
    """
    Neutrally buoyant hull: a line of light spheres, each trimmed by a keel weight.

    Every hull segment carries a ballast sphere ``ballast_drop`` m below
    its centre whose density makes the segment's net effective mass zero.
    The composite therefore has no monopole, only a vertical dipole
    moment (centre of gravity below centre of buoyancy).
    """
    from .field import Composite, UniformSphere

    hull_volume = 4.0 / 3.0 * np.pi * hull_radius**3
    ballast_volume = 4.0 / 3.0 * np.pi * ballast_radius**3
    ballast_density = water_density + hull_volume * (water_density - hull_density) / ballast_volume
    bodies = []
    for x in np.linspace(-0.5 * length, 0.5 * length, n_segments):
        bodies.append(UniformSphere((x, 0.0, depth), hull_density, hull_radius))
        bodies.append(UniformSphere((x, 0.0, depth - ballast_drop), ballast_density, ballast_radius))
    return DensityModel((Composite(tuple(bodies)),), background_density=water_density)
