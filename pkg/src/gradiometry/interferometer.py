"""
Toy-model Mach-Zehnder atom interferometer and doubled-interferometer gradiometer.

The atom cloud is split at launch point A. One wave packet follows arm
A -> C -> D and the other A -> B -> D, all in the XOZ plane, at constant
speeds ``(v_x, +/-v_z)``: ideal pulses redirect the packets at t = T and
recombine them at t = 2T. The phase is

    delta_phi = (M / hbar) * integral_0^2T [phi(r_ACD(t)) - phi(r_ABD(t))] dt

where ``phi`` is the per-unit-mass potential. In a uniform field
``phi = g z`` this is exactly ``g * k_eff * T**2`` with
``k_eff = 2 M |v_z| / hbar``.

Sign notes
----------
* Arm ACD leaves A along ``+v_z``. Reversing the sign of ``v_z`` mirrors the
  loop and negates the integrated phase. The closed form always uses
  ``|v_z|``.
* For a real mass distribution the gradiometer phase difference is
  ``upper - lower = -Gamma_zz * k_eff * T**2 * dZ``, where ``Gamma_zz`` is
  the tensor component from :mod:`gradiometry.field` (``d g_z / d z``).
  The synthetic :func:`linear_gradient_potential` is parametrised by the
  growth rate of ``|g|`` with height, so there the difference is
  ``+gradient * k_eff * T**2 * dZ``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .constants import EOTVOS, HBAR
from .errors import FieldPointInsideBody, PotentialEvaluationFailed
from .field import DensityModel
from .quadrature import gk15, integrate

PotentialFunction = Callable[[np.ndarray], np.ndarray]


class PhaseMethod(Enum):
    CLOSED_FORM = "ClosedForm"
    PATH_INTEGRAL = "PathIntegral"


@dataclass(frozen=True)
class InterferometerConfig:
    atom_mass: float  # kg
    launch_point: np.ndarray  # m
    v_x: float  # m/s
    v_z: float  # m/s
    pulse_interval: float  # s

    def __post_init__(self):
        a = np.array(self.launch_point, dtype=float).reshape(-1)
        if a.shape != (3,) or not np.all(np.isfinite(a)):
            raise ValueError("launch_point must be a finite 3-vector")
        a.setflags(write=False)
        object.__setattr__(self, "launch_point", a)
        if not self.atom_mass > 0:
            raise ValueError("atom_mass must be > 0")
        if not self.pulse_interval > 0:
            raise ValueError("pulse_interval must be > 0")
        if not self.v_x > 0:
            raise ValueError("v_x must be > 0 (zero v_x encloses no area)")
        if not (np.isfinite(self.v_z) and self.v_z != 0):
            raise ValueError("v_z must be finite and non-zero")

    @classmethod
    def from_k_eff(cls, k_eff, atom_mass, launch_point, v_x, pulse_interval):
        """Solve ``v_z`` so that ``2 M v_z / hbar == k_eff``."""
        v_z = k_eff * HBAR / (2.0 * atom_mass)
        return cls(atom_mass, launch_point, v_x, v_z, pulse_interval)

    @property
    def k_eff(self):
        return 2.0 * self.atom_mass * abs(self.v_z) / HBAR

    @property
    def area(self):
        return 2.0 * self.v_x * abs(self.v_z) * self.pulse_interval**2

    def shifted(self, dz):
        return replace(self, launch_point=self.launch_point + np.array([0.0, 0.0, dz]))


@dataclass(frozen=True)
class Trajectory:
    """Ballistic vertical motion ``z(t) = z0 + v_z t - g t^2 / 2``."""

    z0: float
    v_z: float
    g_local: float
    duration: float

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return self.z0 + self.v_z * t - 0.5 * self.g_local * t * t

    def sag(self, t):
        """Deviation from the straight constant-velocity path."""
        t = np.asarray(t, dtype=float)
        return -0.5 * self.g_local * t * t


@dataclass(frozen=True)
class LoopGeometry:
    A: np.ndarray
    C: np.ndarray
    D: np.ndarray
    B: np.ndarray
    pulse_interval: float

    @property
    def vertices(self):
        """Closed loop in A, C, D, B order."""
        return np.array([self.A, self.C, self.D, self.B])

    @property
    def area(self):
        # shoelace formula in the XOZ plane
        x = self.vertices[:, 0]
        z = self.vertices[:, 2]
        return 0.5 * abs(np.dot(x, np.roll(z, -1)) - np.dot(z, np.roll(x, -1)))

    @property
    def signed_area(self):
        """Shoelace area of A->C->D->B; negative when traversed clockwise."""
        x = self.vertices[:, 0]
        z = self.vertices[:, 2]
        return 0.5 * (np.dot(x, np.roll(z, -1)) - np.dot(z, np.roll(x, -1)))

    def _arm(self, mid, t):
        t = np.asarray(t, dtype=float)[:, None]
        T = self.pulse_interval
        first = self.A + (mid - self.A) * (t / T)
        second = mid + (self.D - mid) * ((t - T) / T)
        return np.where(t <= T, first, second)

    def upper_arm(self, t):
        """Positions along A -> C -> D at times ``t`` in [0, 2T], shape (n, 3)."""
        return self._arm(self.C, t)

    def lower_arm(self, t):
        return self._arm(self.B, t)


@dataclass(frozen=True)
class PhaseResult:
    delta_phi: float  # rad
    method: PhaseMethod
    quadrature_error_estimate: float = 0.0  # rad


@dataclass(frozen=True)
class GradiometerConfig:
    """Two identical interferometers whose launch points differ by ``baseline`` in z."""

    upper: InterferometerConfig
    lower: InterferometerConfig
    baseline: float

    def __post_init__(self):
        if not self.baseline > 0:
            raise ValueError("baseline must be > 0")
        u, lo = self.upper, self.lower
        same = (
            u.atom_mass == lo.atom_mass
            and u.v_x == lo.v_x
            and u.v_z == lo.v_z
            and u.pulse_interval == lo.pulse_interval
        )
        offset = u.launch_point - lo.launch_point
        scale = max(1.0, float(np.max(np.abs(lo.launch_point))))
        ok = np.allclose(offset, [0.0, 0.0, self.baseline], rtol=0, atol=1e-12 * scale)
        if not (same and ok):
            raise ValueError(
                "upper and lower interferometers must be identical except for "
                "a launch-point z offset equal to the baseline"
            )

    @classmethod
    def from_lower(cls, lower: InterferometerConfig, baseline: float):
        return cls(lower.shifted(baseline), lower, baseline)

    @property
    def midpoint(self):
        """Centre of the two loops: halfway between their centroids."""
        T = self.lower.pulse_interval
        return self.lower.launch_point + np.array(
            [self.lower.v_x * T, 0.0, 0.5 * self.baseline]
        )


def build_loop(config: InterferometerConfig) -> LoopGeometry:
    A = config.launch_point
    T = config.pulse_interval
    step_x = np.array([config.v_x * T, 0.0, 0.0])
    step_z = np.array([0.0, 0.0, config.v_z * T])
    return LoopGeometry(
        A=A,
        C=A + step_x + step_z,
        D=A + 2.0 * step_x,
        B=A + step_x - step_z,
        pulse_interval=T,
    )


def phase_closed_form(config: InterferometerConfig, g: float) -> PhaseResult:
    return PhaseResult(g * config.k_eff * config.pulse_interval**2, PhaseMethod.CLOSED_FORM)


def uniform_field_potential(g: float) -> PotentialFunction:
    """Per-unit-mass potential ``g z`` of a uniform downward field of strength g."""
    return lambda points: g * np.asarray(points)[:, 2]


def linear_gradient_potential(g0: float, gradient: float, z_ref: float = 0.0) -> PotentialFunction:
    """Potential whose field strength is ``|g|(z) = g0 + gradient * (z - z_ref)``."""

    def phi(points):
        dz = np.asarray(points)[:, 2] - z_ref
        return g0 * dz + 0.5 * gradient * dz * dz

    return phi


def _as_potential(source) -> PotentialFunction:
    if isinstance(source, DensityModel):
        return source.potential_function()
    if callable(source):
        return source
    raise TypeError(f"expected a DensityModel or potential function, got {source!r}")


def phase_path_integral(
    config: InterferometerConfig,
    potential: Union[PotentialFunction, DensityModel],
    tolerance: Optional[float] = None,
    max_intervals: int = 2000,
) -> PhaseResult:
    """
    Phase difference between the arms from the action integral.

    Parameters
    ----------
    potential : callable or DensityModel
        Per-unit-mass potential, vectorized over points of shape (n, 3).
    tolerance : float, optional
        Absolute tolerance in rad. Default ``1e-12 * |delta_phi| + 1e-15``
        plus the rounding floor of the potential along the arms.

    Notes
    -----
    Arm positions are absolute coordinates, so relative accuracy cannot
    beat roughly ``eps * |launch_point| / (v_z * T)``.

    Raises
    ------
    QuadratureNotConverged
    PotentialEvaluationFailed
        If the potential cannot be evaluated along an arm, e.g. an arm
        passes through a body.
    """
    if tolerance is not None and not tolerance > 0:
        raise ValueError("tolerance must be > 0")
    phi = _as_potential(potential)
    loop = build_loop(config)
    T = config.pulse_interval
    scale = config.atom_mass / HBAR

    def integrand(t):
        try:
            up = phi(loop.upper_arm(t))
            low = phi(loop.lower_arm(t))
        except FieldPointInsideBody as exc:
            raise PotentialEvaluationFailed(f"interferometer arm passes inside a body: {exc}") from exc
        return scale * (np.asarray(up, dtype=float) - np.asarray(low, dtype=float))

    floor = 1e-15
    if tolerance is None:
        # the arms' potentials nearly cancel, so rounding in phi itself bounds
        # the attainable accuracy; never ask for less than that
        def magnitude(t):
            up = np.abs(np.asarray(phi(loop.upper_arm(t)), dtype=float))
            low = np.abs(np.asarray(phi(loop.lower_arm(t)), dtype=float))
            return scale * (up + low)

        try:
            size = sum(gk15(magnitude, a, b)[0] for a, b in ((0.0, T), (T, 2.0 * T)))
        except FieldPointInsideBody as exc:
            raise PotentialEvaluationFailed(f"interferometer arm passes inside a body: {exc}") from exc
        floor += 50.0 * np.finfo(float).eps * size
    res = integrate(
        integrand, [0.0, T, 2.0 * T], abs_tol=tolerance, floor=floor, max_intervals=max_intervals
    )
    return PhaseResult(res.value, PhaseMethod.PATH_INTEGRAL, res.error)


def gradiometer_phase_difference(
    gradiometer: GradiometerConfig,
    model: Union[DensityModel, PotentialFunction],
    tolerance: Optional[float] = None,
    parallel: bool = False,
) -> float:
    """
    Raw difference ``upper - lower`` of the two integrated phases, in rad.

    Interpreting the result as a gradient is left to the caller: it equals
    ``-Gamma_zz * k_eff * T**2 * dZ`` only while the field curvature over
    the instrument is negligible.
    """
    configs = (gradiometer.upper, gradiometer.lower)
    if parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            up, low = pool.map(lambda c: phase_path_integral(c, model, tolerance), configs)
    else:
        up, low = (phase_path_integral(c, model, tolerance) for c in configs)
    return up.delta_phi - low.delta_phi


def scale_factor(gradiometer: GradiometerConfig) -> float:
    """
    Gradient per radian of differential phase, ``1 / (k_eff T^2 dZ)``, in s^-2/rad.

    Smaller means a more sensitive gradiometer.
    """
    lo = gradiometer.lower
    return 1.0 / (lo.k_eff * lo.pulse_interval**2 * gradiometer.baseline)


def min_detectable_gradient(gradiometer: GradiometerConfig, phase_noise_rms: float) -> float:
    """Smallest resolvable gradient in Eotvos for a given rms differential phase noise."""
    if phase_noise_rms < 0:
        raise ValueError("phase_noise_rms must be >= 0")
    return scale_factor(gradiometer) * phase_noise_rms / EOTVOS


def cow_rotation_scan(config: InterferometerConfig, g: float, angles: Sequence[float]):
    """
    Closed-form phase as the interferometer plane is rotated about the horizontal.

    At angle 0 the plane is horizontal and sees no gravity projection;
    at pi/2 it is vertical.
    """
    angles = np.asarray(angles, dtype=float)
    if not np.all(np.isfinite(angles)):
        raise ValueError("angles must be finite")
    return [phase_closed_form(config, g * np.sin(a)) for a in angles]
