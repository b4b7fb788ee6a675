"""
Gravity forward modelling for point masses, uniform spheres and composites.

Conventions: right-handed coordinates with z up. The potential is
attraction-negative (``-G m / r``), acceleration is ``g = -grad(potential)``
and the gradient tensor is ``Gamma_ij = d g_i / d x_j``. With this choice a
mass directly below the field point gives a positive ``Gamma_zz``. Beware
when comparing with survey data that uses the geodetic sign convention.

All functions are pure; models are immutable.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .constants import EOTVOS, G
from .errors import DegenerateRange, FieldPointInsideBody, StepTooLargeForGeometry

__all__ = [
    "PointMass",
    "UniformSphere",
    "Composite",
    "DensityModel",
    "GravityVector",
    "GradientTensor",
    "potential",
    "acceleration",
    "gradient_tensor",
    "finite_difference_tensor",
    "falloff_exponent",
    "evaluate_potential",
    "evaluate_acceleration",
    "evaluate_tensor",
]


def _vec3(value, name="center"):
    arr = np.array(value, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite 3-vector, got {value!r}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PointMass:
    center: np.ndarray
    mass: float
    kind = "point_mass"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center))
        if not np.isfinite(self.mass):
            raise ValueError("mass must be finite")
        object.__setattr__(self, "mass", float(self.mass))

    def sources(self, background_density=0.0):
        # point masses carry no volume, so the background does not apply
        return [(self.center, self.mass, 0.0)]


@dataclass(frozen=True, eq=False)
class UniformSphere:
    center: np.ndarray
    density: float
    radius: float
    kind = "uniform_sphere"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"sphere radius must be > 0, got {self.radius!r}")
        if not np.isfinite(self.density):
            raise ValueError("sphere density must be finite")
        object.__setattr__(self, "density", float(self.density))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def volume(self):
        return 4.0 / 3.0 * np.pi * self.radius**3

    @property
    def mass(self):
        return self.density * self.volume

    def effective_mass(self, background_density=0.0):
        return self.volume * (self.density - background_density)

    def sources(self, background_density=0.0):
        return [(self.center, self.effective_mass(background_density), self.radius)]


@dataclass(frozen=True, eq=False)
class Composite:
    """A group of bodies treated as one. Masses may be signed."""

    children: Tuple = ()
    kind = "composite"

    def __post_init__(self):
        children = tuple(self.children)
        for child in children:
            if not isinstance(child, (PointMass, UniformSphere, Composite)):
                raise TypeError(f"unsupported body {child!r}")
        object.__setattr__(self, "children", children)

    @property
    def mass(self):
        return sum(child.mass for child in self.children)

    @property
    def center(self):
        """Centroid weighted by absolute child mass."""
        if not self.children:
            return np.zeros(3)
        weights = np.array([abs(c.mass) for c in self.children])
        centers = np.array([c.center for c in self.children])
        if weights.sum() == 0:
            return centers.mean(axis=0)
        return weights @ centers / weights.sum()

    def effective_mass(self, background_density=0.0):
        return sum(m for _, m, _ in self.sources(background_density))

    def sources(self, background_density=0.0):
        out = []
        for child in self.children:
            out.extend(child.sources(background_density))
        return out


@dataclass(frozen=True, eq=False)
class DensityModel:
    """Bodies embedded in a medium of uniform ``background_density`` (kg/m^3).

    Sphere sources contribute ``volume * (density - background_density)``;
    point masses pass through unchanged.
    """

    bodies: Tuple = ()
    background_density: float = 0.0
    _centers: np.ndarray = field(init=False, repr=False)
    _masses: np.ndarray = field(init=False, repr=False)
    _radii: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        bodies = tuple(self.bodies)
        object.__setattr__(self, "bodies", bodies)
        if not np.isfinite(self.background_density):
            raise ValueError("background_density must be finite")
        sources = []
        for body in bodies:
            sources.extend(body.sources(self.background_density))
        centers = np.array([s[0] for s in sources], dtype=float).reshape(-1, 3)
        masses = np.array([s[1] for s in sources], dtype=float)
        radii = np.array([s[2] for s in sources], dtype=float)
        for arr in (centers, masses, radii):
            arr.setflags(write=False)
        object.__setattr__(self, "_centers", centers)
        object.__setattr__(self, "_masses", masses)
        object.__setattr__(self, "_radii", radii)

    @property
    def source_centers(self):
        return self._centers

    @property
    def effective_masses(self):
        return self._masses

    @property
    def source_radii(self):
        return self._radii

    @property
    def net_effective_mass(self):
        return float(self._masses.sum())

    @property
    def gross_mass(self):
        return float(np.abs(self._masses).sum())

    @property
    def centroid(self):
        w = np.abs(self._masses)
        if w.sum() == 0:
            return np.zeros(3)
        return w @ self._centers / w.sum()

    def clearance(self, points):
        """Distance from each point to the nearest body surface (inf if no bodies)."""
        return kernels.clearance(points, self._centers, self._radii)

    def check_exterior(self, points):
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        if self._centers.shape[0] == 0:
            return points
        gap = self.clearance(points)
        bad = np.flatnonzero(~(gap > 0))
        if bad.size:
            raise FieldPointInsideBody(points[bad[0]])
        return points

    def potential_function(self):
        """Vectorized per-unit-mass potential ``f(points) -> (n,)``."""
        return lambda points: evaluate_potential(self, points)


@dataclass(frozen=True)
class GravityVector:
    components: np.ndarray  # m/s^2

    @property
    def magnitude(self):
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True)
class GradientTensor:
    """Full 3x3 gradient tensor, stored in s^-2."""

    components: np.ndarray

    INDEPENDENT = ("xx", "xy", "xz", "yy", "yz")
    _INDEX = {"x": 0, "y": 1, "z": 2}

    @property
    def eotvos(self):
        return self.components / EOTVOS

    def __getitem__(self, key):
        if isinstance(key, str):
            return float(self.components[self._INDEX[key[0]], self._INDEX[key[1]]])
        return self.components[key]

    @property
    def trace(self):
        return float(np.trace(self.components))

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.components)))

    def independent_components(self):
        """The five components that determine a symmetric trace-free tensor."""
        return {name: self[name] for name in self.INDEPENDENT}

    @classmethod
    def from_independent(cls, xx, xy, xz, yy, yz):
        c = np.array([[xx, xy, xz], [xy, yy, yz], [xz, yz, -(xx + yy)]], dtype=float)
        return cls(c)

    def row_major_eotvos(self):
        return self.eotvos.reshape(9)


def _as_points(point):
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError(f"points must have trailing dimension 3, got shape {pts.shape}")
    return pts.reshape(-1, 3)


def evaluate_potential(model: DensityModel, points) -> np.ndarray:
    """Potential (J/kg) at each of ``points`` (shape (n, 3))."""
    pts = model.check_exterior(_as_points(points))
    return G * kernels.potential(pts, model.source_centers, model.effective_masses)


def evaluate_acceleration(model: DensityModel, points) -> np.ndarray:
    pts = model.check_exterior(_as_points(points))
    return G * kernels.acceleration(pts, model.source_centers, model.effective_masses)


def evaluate_tensor(model: DensityModel, points) -> np.ndarray:
    """Gradient tensors, shape (n, 3, 3), in s^-2."""
    pts = model.check_exterior(_as_points(points))
    return G * kernels.tensor(pts, model.source_centers, model.effective_masses)


def potential(model: DensityModel, point) -> float:
    """
    Gravitational potential per unit mass at a single exterior point.

    Raises
    ------
    FieldPointInsideBody
        If the point is inside or on the surface of any body.
    """
    return float(evaluate_potential(model, point)[0])


def acceleration(model: DensityModel, point) -> GravityVector:
    return GravityVector(evaluate_acceleration(model, point)[0])


def gradient_tensor(model: DensityModel, point) -> GradientTensor:
    return GradientTensor(evaluate_tensor(model, point)[0])


# central-difference weights for offsets k*h, k = -2..2
_STENCILS = {
    2: {-1: -0.5, 1: 0.5},
    4: {-2: 1.0 / 12.0, -1: -8.0 / 12.0, 1: 8.0 / 12.0, 2: -1.0 / 12.0},
}


def finite_difference_tensor(
    model: DensityModel, point, step: Optional[float] = None, order: int = 4
) -> GradientTensor:
    """
    Gradient tensor from central differences of the analytic acceleration.

    Independent check on :func:`gradient_tensor`; meant for tests and
    cross-validation reports, not production evaluation.

    Parameters
    ----------
    step : float, optional
        Probe spacing in m. Defaults to 1e-3 times the distance to the
        nearest body surface.
    order : {2, 4}
        Accuracy order of the stencil. The fourth-order stencil keeps the
        default step below 1e-6 relative truncation error.
    """
    if order not in _STENCILS:
        raise ValueError(f"order must be 2 or 4, got {order}")
    p = model.check_exterior(_as_points(point))[0]
    if step is None:
        gap = float(model.clearance(p[None, :])[0])
        step = 1e-3 * gap if np.isfinite(gap) else 1.0
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step}")
    weights = _STENCILS[order]
    probes = []
    for j in range(3):
        for k in weights:
            q = p.copy()
            q[j] += k * step
            probes.append(q)
    probes = np.array(probes)
    if model.source_centers.shape[0]:
        gap = model.clearance(probes)
        if np.any(~(gap > 0)):
            raise StepTooLargeForGeometry(
                f"a probe at spacing {step} m from {tuple(p)} enters a body"
            )
    acc = G * kernels.acceleration(probes, model.source_centers, model.effective_masses)
    out = np.zeros((3, 3))
    idx = 0
    for j in range(3):
        for k, w in weights.items():
            out[:, j] += w * acc[idx]
            idx += 1
    return GradientTensor(out / step)


def _max_abs_tensor(model, point):
    return float(np.max(np.abs(evaluate_tensor(model, point)[0])))


def falloff_exponent(
    model: DensityModel,
    direction: Sequence[float],
    r_min: float,
    r_max: float,
    samples: int = 32,
    origin=None,
    measure: Optional[Callable] = None,
) -> float:
    """
    Log-log slope of a field measure against distance along ``direction``.

    Field points are ``origin + r * direction`` for ``samples`` values of r
    spaced logarithmically in ``[r_min, r_max]``. ``origin`` defaults to the
    model centroid and ``measure(model, point)`` to ``max |Gamma_ij|``.
    A point mass gives -3; a model with zero net effective mass gives -4
    or steeper.
    """
    if not r_max > r_min:
        raise DegenerateRange(f"r_max ({r_max}) must exceed r_min ({r_min})")
    if r_min <= 0:
        raise DegenerateRange("r_min must be positive")
    if samples < 4:
        raise ValueError("need at least 4 samples")
    if r_max / r_min < 4:
        raise DegenerateRange("r_max / r_min must be at least 4")
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    o = model.centroid if origin is None else np.asarray(origin, dtype=float)
    measure = measure or _max_abs_tensor
    radii = np.geomspace(r_min, r_max, samples)
    values = np.array([measure(model, o + r * u) for r in radii])
    if np.any(values <= 0):
        raise DegenerateRange("field measure vanishes inside the range")
    slope, _ = np.polyfit(np.log(radii), np.log(values), 1)
    return float(slope)
