"""Exception types shared across the library."""


class Enclose3dError(Exception):
    """Base class for all library errors."""


class GuardViolation(Enclose3dError):
    """Relative kinematics evaluated too close to a coordinate singularity.

    Raised when the range drops below the minimum guard or the elevation
    line-of-sight angle approaches +/- pi/2, where the azimuth rate blows up.
    """


class DegenerateLOS(Enclose3dError):
    """Pursuer and target positions coincide; no line of sight exists."""


class ZeroSpeedFrame(Enclose3dError):
    """Body frame is undefined: lateral acceleration commanded at near-zero speed."""


class OutOfBarrier(Enclose3dError):
    """Range error left the open interval (-a, b).

    Under the kinematic plant this cannot happen from a valid start; seeing it
    means the run was configured outside the invariance hypothesis or the
    plant broke the guidance assumptions. Callers must abort with a safety
    report rather than continue.
    """

    def __init__(self, epsilon: float, a: float, b: float, t: float | None = None):
        self.epsilon = epsilon
        self.a = a
        self.b = b
        self.t = t
        at = f" at t={t:.6g} s" if t is not None else ""
        super().__init__(
            f"range error eps={epsilon:.6g} m outside the open interval "
            f"(-{a:.6g}, {b:.6g}){at}"
        )


class ConfigError(Enclose3dError):
    """Scenario configuration is malformed or violates a precondition."""
