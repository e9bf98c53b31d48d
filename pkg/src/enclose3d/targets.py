"""Scripted target motion profiles with analytic velocity, acceleration, position.

Profiles are defined in the inertial frame. Each model declares bounds on its
body-frame acceleration components; the sliding gain of the guidance law must
dominate their sum. Models are immutable and freely shareable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .engagement import los_basis, los_frame_velocity


@dataclass(frozen=True)
class AccelBounds:
    """Declared bounds on the target's body-frame acceleration components."""

    a_max_r: float = 0.0
    a_max_gamma: float = 0.0
    a_max_chi: float = 0.0

    @property
    def total(self) -> float:
        return abs(self.a_max_r) + abs(self.a_max_gamma) + abs(self.a_max_chi)


@dataclass(frozen=True)
class StationaryTarget:
    kind = "stationary"
    bounds: AccelBounds = field(default_factory=AccelBounds)

    def velocity(self, t: float) -> np.ndarray:
        return np.zeros(3)

    def accel(self, t: float) -> np.ndarray:
        return np.zeros(3)

    def position(self, t: float, pos0: np.ndarray) -> np.ndarray:
        return np.asarray(pos0, dtype=float).copy()


@dataclass(frozen=True)
class ConstantVelocityTarget:
    """Straight-line motion at fixed inertial velocity."""

    v0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    bounds: AccelBounds = field(default_factory=AccelBounds)
    kind = "constant-velocity"

    def __post_init__(self):
        object.__setattr__(self, "v0", np.asarray(self.v0, dtype=float))

    def velocity(self, t: float) -> np.ndarray:
        return self.v0.copy()

    def accel(self, t: float) -> np.ndarray:
        return np.zeros(3)

    def position(self, t: float, pos0: np.ndarray) -> np.ndarray:
        return np.asarray(pos0, dtype=float) + self.v0 * t


@dataclass(frozen=True)
class SinusoidalTarget:
    """Constant x drift with sinusoidal weaving in y and z.

    v(t) = [vx, amp_y sin(freq_y t), amp_z sin(freq_z t)], frequencies in
    rad/s. Velocity, acceleration, and position are all closed-form.
    """

    vx: float = 3.5
    amp_y: float = 1.5
    freq_y: float = 4.0 * math.pi / 100.0
    amp_z: float = 1.0
    freq_z: float = 8.0 * math.pi / 100.0
    bounds: AccelBounds = field(default_factory=lambda: AccelBounds(0.35, 0.35, 0.35))
    kind = "sinusoidal"

    def velocity(self, t: float) -> np.ndarray:
        return np.array(
            [
                self.vx,
                self.amp_y * math.sin(self.freq_y * t),
                self.amp_z * math.sin(self.freq_z * t),
            ]
        )

    def accel(self, t: float) -> np.ndarray:
        return np.array(
            [
                0.0,
                self.amp_y * self.freq_y * math.cos(self.freq_y * t),
                self.amp_z * self.freq_z * math.cos(self.freq_z * t),
            ]
        )

    def position(self, t: float, pos0: np.ndarray) -> np.ndarray:
        # exact integral of the velocity profile
        y = self.amp_y / self.freq_y * (1.0 - math.cos(self.freq_y * t)) if self.freq_y else 0.0
        z = self.amp_z / self.freq_z * (1.0 - math.cos(self.freq_z * t)) if self.freq_z else 0.0
        return np.asarray(pos0, dtype=float) + np.array([self.vx * t, y, z])


@dataclass(frozen=True)
class TabulatedTarget:
    """Velocity profile given as (t, vx, vy, vz) samples, cubic-interpolated.

    Declared bounds must be supplied by the user; position comes from the
    spline antiderivative, acceleration from its derivative.
    """

    times: np.ndarray
    velocities: np.ndarray
    bounds: AccelBounds
    kind = "custom-profile"

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        vels = np.asarray(self.velocities, dtype=float)
        if times.ndim != 1 or len(times) < 2:
            raise ValueError("profile needs at least two time samples")
        if vels.shape != (len(times), 3):
            raise ValueError("velocities must be (n, 3)")
        if not np.all(np.diff(times) > 0):
            raise ValueError("profile times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "velocities", vels)
        from scipy.interpolate import CubicSpline

        spline = CubicSpline(times, vels, axis=0)
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_dspline", spline.derivative())
        object.__setattr__(self, "_ispline", spline.antiderivative())

    def velocity(self, t: float) -> np.ndarray:
        return np.asarray(self._spline(t), dtype=float)

    def accel(self, t: float) -> np.ndarray:
        return np.asarray(self._dspline(t), dtype=float)

    def position(self, t: float, pos0: np.ndarray) -> np.ndarray:
        disp = self._ispline(t) - self._ispline(0.0)
        return np.asarray(pos0, dtype=float) + np.asarray(disp, dtype=float)


TargetModel = StationaryTarget | ConstantVelocityTarget | SinusoidalTarget | TabulatedTarget


def target_velocity(t: float, model: TargetModel) -> np.ndarray:
    """Inertial target velocity at time t >= 0."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return model.velocity(t)


def target_accel(t: float, model: TargetModel) -> np.ndarray:
    """Inertial target acceleration at time t >= 0 (exact profile derivative)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return model.accel(t)


def init_target_inertial(
    chi_T0: float, gamma_T0: float, V_T0: float, theta0: float, psi0: float
) -> np.ndarray:
    """Inertial velocity with the given LOS-frame angles in the initial LOS frame.

    Used to freeze a constant-velocity target's direction from its initial
    relative geometry.
    """
    basis = los_basis(theta0, psi0)
    return basis @ los_frame_velocity(V_T0, gamma_T0, chi_T0)


def check_declared_bounds(model: TargetModel, horizon: float, dt: float = 0.01) -> float:
    """Largest |accel| over a time grid; raises if any declared bound is exceeded.

    A bound on the full acceleration magnitude dominates any orthonormal
    body-frame component, so each declared component bound is checked against
    the magnitude.
    """
    t = np.arange(0.0, horizon + dt / 2, dt)
    mags = np.array([float(np.linalg.norm(model.accel(tk))) for tk in t])
    worst = float(mags.max()) if len(mags) else 0.0
    b = model.bounds
    for name, val in (("a_max_r", b.a_max_r), ("a_max_gamma", b.a_max_gamma), ("a_max_chi", b.a_max_chi)):
        if worst > val + 1e-12:
            raise ValueError(
                f"declared bound {name}={val:.6g} m/s^2 does not dominate the "
                f"profile's acceleration magnitude {worst:.6g} m/s^2"
            )
    return worst


def speed_envelope(model: TargetModel, horizon: float, dt: float = 0.01) -> tuple[float, float]:
    """Measured (min, max) target speed over a time grid."""
    t = np.arange(0.0, horizon + dt / 2, dt)
    speeds = np.array([float(np.linalg.norm(model.velocity(tk))) for tk in t])
    return float(speeds.min()), float(speeds.max())


def load_profile_csv(path: str, bounds: AccelBounds) -> TabulatedTarget:
    """Read a (t, vx, vy, vz) velocity table; header row required, SI units."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["t", "vx", "vy", "vz"]
        if header is None or [h.strip() for h in header] != expected:
            raise ValueError(f"profile header must be {','.join(expected)}, got {header}")
        rows = [[float(x) for x in row] for row in reader if row]
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        raise ValueError("profile has no samples")
    return TabulatedTarget(times=data[:, 0], velocities=data[:, 1:4], bounds=bounds)
