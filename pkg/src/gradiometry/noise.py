"""
Sensitivity bookkeeping for gradiometers under white noise.

Resolution after averaging for a time tau is ``density / sqrt(tau)``; no
drift or flicker floor is modelled.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .constants import EOTVOS, STANDARD_GRAVITY


class Combination(Enum):
    """How two gravimeter noise densities combine into a gradiometer noise."""

    SINGLE_SENSOR_EQUIVALENT = "single"
    INDEPENDENT_PAIR_RSS = "rss"


@dataclass(frozen=True)
class InstrumentSpec:
    name: str
    baseline: Optional[float]  # m; None when the source gives no figure
    gradient_noise_density: Optional[float] = None  # E/sqrt(Hz)
    accel_noise_density: Optional[float] = None  # g/sqrt(Hz)
    source_note: str = ""
    short_baseline: bool = False

    def __post_init__(self):
        if self.gradient_noise_density is None and self.accel_noise_density is None:
            raise ValueError(f"{self.name}: need a gradient or acceleration noise density")
        if self.baseline is not None and not self.baseline > 0:
            raise ValueError(f"{self.name}: baseline must be > 0")
        for v in (self.gradient_noise_density, self.accel_noise_density):
            if v is not None and v < 0:
                raise ValueError(f"{self.name}: noise densities must be >= 0")

    def effective_gradient_density(self, combination=Combination.SINGLE_SENSOR_EQUIVALENT):
        """Gradient noise density, derived from the gravimeters if not given directly."""
        if self.gradient_noise_density is not None:
            return self.gradient_noise_density
        if self.baseline is None:
            return None
        return gradiometer_noise_from_gravimeters(
            self.accel_noise_density, self.baseline, combination
        )


@dataclass(frozen=True)
class NoiseBudget:
    gradient_noise_density: float
    averaging_time: float

    @property
    def resolution(self):
        return resolution_after_averaging(self.gradient_noise_density, self.averaging_time)


def resolution_after_averaging(density, tau):
    """White-noise resolution (E) of a density (E/sqrt(Hz)) averaged for tau seconds."""
    if density < 0:
        raise ValueError("density must be >= 0")
    if not tau > 0:
        raise ValueError("tau must be > 0")
    return density / np.sqrt(tau)


def gradiometer_noise_from_gravimeters(
    accel_density, baseline, combination=Combination.SINGLE_SENSOR_EQUIVALENT
):
    """
    Gradient noise density (E/sqrt(Hz)) of two gravimeters a baseline apart.

    ``accel_density`` is in units of standard gravity per sqrt(Hz).
    ``SINGLE_SENSOR_EQUIVALENT`` projects one sensor's noise over the
    baseline; ``INDEPENDENT_PAIR_RSS`` adds two independent sensors in
    quadrature, a factor sqrt(2) larger.
    """
    if accel_density < 0:
        raise ValueError("accel_density must be >= 0")
    if not baseline > 0:
        raise ValueError("baseline must be > 0")
    combination = Combination(combination)
    density = accel_density * STANDARD_GRAVITY / baseline / EOTVOS
    if combination is Combination.INDEPENDENT_PAIR_RSS:
        density *= np.sqrt(2.0)
    return density


def required_averaging_time(density, target_resolution):
    """Averaging time (s) for a density (E/sqrt(Hz)) to reach ``target_resolution`` (E)."""
    if not density > 0:
        raise ValueError("density must be > 0")
    if not target_resolution > 0:
        raise ValueError("target_resolution must be > 0")
    return (density / target_resolution) ** 2


_REFERENCE = (
    InstrumentSpec(
        name="Perrin-2019 double-loop",
        baseline=None,
        gradient_noise_density=65000.0,
        source_note="a short-term sensitivity of 65,000 E/√Hz",
        short_baseline=True,
    ),
    InstrumentSpec(
        name="HUST",
        baseline=0.3,
        gradient_noise_density=100.0,
        source_note="the sensitivity of ∼100 E/√Hz, with 0.3 metres",
    ),
    InstrumentSpec(
        name="Kasevich group",
        baseline=1.0,
        gradient_noise_density=35.0,
        source_note="∼30–40 E/√Hz at ∼1 metre; nominal 35, min 30, max 40",
    ),
    InstrumentSpec(
        name="UAV gravimeter pair",
        baseline=1.0,
        accel_noise_density=37e-9,
        source_note="37×10⁻⁹ g/√Hz",
    ),
    InstrumentSpec(
        name="Birmingham",
        baseline=1.0,
        gradient_noise_density=470.0,
        source_note="about 470 E/√Hz",
    ),
)


def reference_instruments():
    """Published instrument sensitivities, as an immutable tuple."""
    return _REFERENCE


def find_instrument(name):
    for spec in _REFERENCE:
        if spec.name.lower() == name.lower():
            return spec
    raise KeyError(name)
