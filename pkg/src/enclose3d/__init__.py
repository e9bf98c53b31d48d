"""3D target-enclosing guidance: engagement kinematics, barrier-constrained
range control, optimal lateral allocation, and a deterministic scenario
simulator with safety certification suites.
"""

from .engagement import (
    AccelCommandFrame,
    EngagementState,
    InertialState,
    StateDerivative,
    los_rates,
    relative_derivatives,
    step_inertial,
    step_relative,
    to_inertial,
    to_relative,
    wrap_angles,
)
from .errors import (
    ConfigError,
    DegenerateLOS,
    Enclose3dError,
    GuardViolation,
    OutOfBarrier,
    ZeroSpeedFrame,
)
from .guidance import (
    GuidanceParams,
    PursuerCommand,
    allocate_lateral,
    alpha_dot,
    barrier_value,
    effective_control,
    guidance_step,
    lead_angle,
    radial_accel,
    range_error,
    stabilizing_alpha,
)
from .scenario import (
    DisturbanceSpec,
    ScenarioConfig,
    bundled_scenario,
    load_config,
    parse_config,
    serialize_config,
)
from .simulate import (
    BatchSummary,
    MetricsSummary,
    PerturbationSpec,
    SimRecord,
    SimResult,
    inject_disturbance,
    monte_carlo,
    run_scenario,
    safety_monitor,
)
from .targets import (
    AccelBounds,
    ConstantVelocityTarget,
    SinusoidalTarget,
    StationaryTarget,
    TabulatedTarget,
    init_target_inertial,
    target_accel,
    target_velocity,
)
from .traceio import TRACE_COLUMNS, read_trace, write_metrics, write_trace

__version__ = "0.1.0"
