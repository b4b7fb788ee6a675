"""Physical constants and unit conversions (SI, CODATA 2018)."""
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    G: float = 6.67430e-11  # m^3 kg^-1 s^-2
    hbar: float = 1.054571817e-34  # J s
    eotvos: float = 1e-9  # s^-2 per Eotvos
    standard_gravity: float = 9.80665  # m s^-2, used for "g" units


CONSTANTS = PhysicalConstants()

G = CONSTANTS.G
HBAR = CONSTANTS.hbar
EOTVOS = CONSTANTS.eotvos
STANDARD_GRAVITY = CONSTANTS.standard_gravity

#: Mass of a 87Rb atom, kg. Convenient default for interferometer configs.
RB87_MASS = 1.443160648e-25


def to_eotvos(value):
    """Convert a gradient in s^-2 to Eotvos."""
    return value / EOTVOS


def from_eotvos(value):
    """Convert a gradient in Eotvos to s^-2."""
    return value * EOTVOS
