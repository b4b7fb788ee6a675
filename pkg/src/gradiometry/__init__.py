"""Cold-atom gravity gradiometry: field forward modelling, toy-model
interferometer phases, noise bookkeeping and survey simulation."""
from .constants import CONSTANTS, EOTVOS, G, HBAR, PhysicalConstants
from .errors import (
    ConfigError,
    DegenerateRange,
    FieldPointInsideBody,
    GradiometryError,
    MissingNoiseDensity,
    PotentialEvaluationFailed,
    QuadratureNotConverged,
    StepTooLargeForGeometry,
)
from .field import (
    Composite,
    DensityModel,
    GradientTensor,
    GravityVector,
    PointMass,
    UniformSphere,
    acceleration,
    falloff_exponent,
    finite_difference_tensor,
    gradient_tensor,
    potential,
)
from .interferometer import (
    GradiometerConfig,
    InterferometerConfig,
    LoopGeometry,
    PhaseMethod,
    PhaseResult,
    Trajectory,
    build_loop,
    cow_rotation_scan,
    gradiometer_phase_difference,
    linear_gradient_potential,
    min_detectable_gradient,
    phase_closed_form,
    phase_path_integral,
    scale_factor,
    uniform_field_potential,
)
from .kernels import BACKEND
from .noise import (
    Combination,
    InstrumentSpec,
    NoiseBudget,
    gradiometer_noise_from_gravimeters,
    reference_instruments,
    required_averaging_time,
    resolution_after_averaging,
)
from .survey import (
    DetectabilityReport,
    MeasurementSeries,
    Route,
    Waypoint,
    anomaly_profile,
    detectability,
    simulate_survey,
    submarine_model,
)

__version__ = "0.1.0"
