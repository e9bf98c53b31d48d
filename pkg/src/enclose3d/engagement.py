"""Engagement states, frame conversions, relative kinematics, and integrators.

Frames
------
Inertial frame F_I: right-handed {X, Y, Z}.

Line-of-sight frame F_L: rotate F_I through azimuth psi about Z, then raise
the first axis by elevation theta. Expressed in inertial coordinates:

    x_L = (cos t cos p, cos t sin p, sin t)      # along pursuer->target LOS
    y_L = (-sin p,      cos p,       0)
    z_L = (-sin t cos p, -sin t sin p, cos t)

with t = theta, p = psi. Each vehicle's body frame is obtained from F_L the
same way using its azimuth chi_i and elevation gamma_i, so its velocity has
LOS-frame components V_i * (cos g cos c, cos g sin c, sin g).

Body acceleration convention: a_r acts along the velocity, a_chi along the
body y axis (yaw plane), a_gamma along the body z axis (pitch plane). This
assignment makes the inertial propagation reproduce the relative-coordinate
turn-rate equations exactly; the cross-integrator test pins it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateLOS, GuardViolation, ZeroSpeedFrame

# Numerical guards: the azimuth LOS rate divides by r*cos(theta), and the
# body-frame turn rates divide by V_i.
R_MIN_GUARD = 0.01      # m
THETA_GUARD = 1e-3      # rad short of +/- pi/2
V_GUARD = 1e-3          # m/s

TWO_PI = 2.0 * math.pi


def wrap_pi(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a > math.pi:
        a -= TWO_PI
    elif a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class EngagementState:
    """Relative and vehicle state at one instant, in LOS coordinates.

    Angles in radians, SI units throughout. gamma/chi are the vehicles'
    elevation/azimuth measured in the LOS frame.
    """

    t: float
    r: float
    theta: float
    psi: float
    V_P: float
    gamma_P: float
    chi_P: float
    V_T: float = 0.0
    gamma_T: float = 0.0
    chi_T: float = 0.0

    def validate(self) -> "EngagementState":
        if not self.r > 0:
            raise ValueError(f"range must be positive, got r={self.r}")
        if abs(self.theta) > math.pi / 2:
            raise ValueError(f"theta outside [-pi/2, pi/2]: {self.theta}")
        for name in ("gamma_P", "gamma_T"):
            v = getattr(self, name)
            if abs(v) > math.pi / 2:
                raise ValueError(f"{name} outside [-pi/2, pi/2]: {v}")
        for name in ("psi", "chi_P", "chi_T"):
            v = getattr(self, name)
            if not (-math.pi < v <= math.pi):
                raise ValueError(f"{name} outside (-pi, pi]: {v}")
        if self.V_P < 0 or self.V_T < 0:
            raise ValueError("speeds must be non-negative")
        return self


@dataclass(frozen=True)
class InertialState:
    """World-frame positions and velocities of both vehicles."""

    pos_P: np.ndarray
    vel_P: np.ndarray
    pos_T: np.ndarray
    vel_T: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        for name in ("pos_P", "vel_P", "pos_T", "vel_T"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))


@dataclass(frozen=True)
class StateDerivative:
    """Time derivatives of the relative-coordinate state."""

    dr: float
    dtheta: float
    dpsi: float
    dV_P: float
    dgamma_P: float
    dchi_P: float
    dV_T: float = 0.0
    dgamma_T: float = 0.0
    dchi_T: float = 0.0


@dataclass(frozen=True)
class AccelCommandFrame:
    """Body-frame acceleration triplet (along-velocity, pitch plane, yaw plane)."""

    a_r: float = 0.0
    a_gamma: float = 0.0
    a_chi: float = 0.0


ZERO_ACCEL = AccelCommandFrame()


# ---------------------------------------------------------------------------
# frame helpers

def los_basis(theta: float, psi: float) -> np.ndarray:
    """Columns are the LOS-frame basis vectors in inertial coordinates."""
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    return np.array(
        [
            [ct * cp, -sp, -st * cp],
            [ct * sp, cp, -st * sp],
            [st, 0.0, ct],
        ]
    )


def los_frame_velocity(V: float, gamma: float, chi: float) -> np.ndarray:
    """LOS-frame components of a velocity given its LOS-frame angles."""
    cg, sg = math.cos(gamma), math.sin(gamma)
    return np.array([V * cg * math.cos(chi), V * cg * math.sin(chi), V * sg])


def velocity_angles(v_los: np.ndarray) -> tuple[float, float, float]:
    """(speed, gamma, chi) of a velocity given in LOS-frame components.

    Zero-speed vectors get gamma = chi = 0 by convention; the direction is
    unobservable through the relative kinematics at V = 0.
    """
    V = float(math.sqrt(v_los[0] ** 2 + v_los[1] ** 2 + v_los[2] ** 2))
    if V < V_GUARD:
        return V, 0.0, 0.0
    gamma = math.asin(max(-1.0, min(1.0, v_los[2] / V)))
    chi = math.atan2(v_los[1], v_los[0])
    return V, gamma, chi


def body_triad_los(v_los: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Body axes (x along velocity, y yaw-plane, z pitch-plane) in LOS components.

    Built from velocity-component ratios; requires nonzero speed and a
    velocity not parallel to the LOS z axis.
    """
    vx, vy, vz = float(v_los[0]), float(v_los[1]), float(v_los[2])
    V = math.sqrt(vx * vx + vy * vy + vz * vz)
    if V < V_GUARD:
        raise ZeroSpeedFrame(f"body frame undefined at speed {V:.3g} m/s")
    vxy = math.sqrt(vx * vx + vy * vy)
    if vxy < V_GUARD * V:
        # velocity along the LOS z axis: gamma = +/- pi/2, chi undefined
        raise ZeroSpeedFrame("body frame undefined at gamma = +/- pi/2")
    sc, cc = vy / vxy, vx / vxy          # sin/cos chi
    sg, cg = vz / V, vxy / V             # sin/cos gamma
    xb = np.array([vx / V, vy / V, vz / V])
    yb = np.array([-sc, cc, 0.0])
    zb = np.array([-sg * cc, -sg * sc, cg])
    return xb, yb, zb


def body_accel_los(v_los: np.ndarray, u: AccelCommandFrame) -> np.ndarray:
    """Inertial-equivalent acceleration (LOS components) of a body command.

    At near-zero speed a pure radial command has no defined direction and
    contributes nothing; lateral commands raise ZeroSpeedFrame.
    """
    vx, vy, vz = float(v_los[0]), float(v_los[1]), float(v_los[2])
    V = math.sqrt(vx * vx + vy * vy + vz * vz)
    if V < V_GUARD:
        if u.a_gamma != 0.0 or u.a_chi != 0.0:
            raise ZeroSpeedFrame(
                f"lateral command at speed {V:.3g} m/s below guard {V_GUARD} m/s"
            )
        return np.zeros(3)
    xb, yb, zb = body_triad_los(v_los)
    return u.a_r * xb + u.a_chi * yb + u.a_gamma * zb


# ---------------------------------------------------------------------------
# conversions

def to_relative(state: InertialState) -> EngagementState:
    """Express an inertial two-vehicle state in LOS coordinates."""
    d = state.pos_T - state.pos_P
    r = float(np.linalg.norm(d))
    if r < R_MIN_GUARD:
        raise DegenerateLOS(f"range {r:.3g} m below guard {R_MIN_GUARD} m")
    theta = math.asin(max(-1.0, min(1.0, float(d[2]) / r)))
    psi = math.atan2(float(d[1]), float(d[0]))
    basis = los_basis(theta, psi)
    vP_los = basis.T @ state.vel_P
    vT_los = basis.T @ state.vel_T
    V_P, gamma_P, chi_P = velocity_angles(vP_los)
    V_T, gamma_T, chi_T = velocity_angles(vT_los)
    return EngagementState(
        t=state.t, r=r, theta=theta, psi=psi,
        V_P=V_P, gamma_P=gamma_P, chi_P=chi_P,
        V_T=V_T, gamma_T=gamma_T, chi_T=chi_T,
    )


def to_inertial(state: EngagementState, pos_P: np.ndarray | None = None) -> InertialState:
    """Realize a relative state as inertial vectors.

    The absolute position offset is unobservable from the relative state;
    pos_P anchors it (defaults to the origin).
    """
    anchor = np.zeros(3) if pos_P is None else np.asarray(pos_P, dtype=float)
    basis = los_basis(state.theta, state.psi)
    pos_T = anchor + basis[:, 0] * state.r
    vel_P = basis @ los_frame_velocity(state.V_P, state.gamma_P, state.chi_P)
    vel_T = basis @ los_frame_velocity(state.V_T, state.gamma_T, state.chi_T)
    return InertialState(pos_P=anchor, vel_P=vel_P, pos_T=pos_T, vel_T=vel_T, t=state.t)


# ---------------------------------------------------------------------------
# relative-coordinate dynamics

def los_rates(state: EngagementState) -> tuple[float, float, float]:
    """(dr, dtheta, dpsi) from the relative-motion equations.

    These depend only on the state, not on the acceleration inputs, and serve
    as the ground-truth feedback signals for guidance.
    """
    r = state.r
    if r <= R_MIN_GUARD:
        raise GuardViolation(f"range {r:.6g} m at or below guard {R_MIN_GUARD} m")
    if abs(state.theta) >= math.pi / 2 - THETA_GUARD:
        raise GuardViolation(
            f"elevation LOS angle {state.theta:.6g} rad within guard of +/- pi/2"
        )
    cgP, sgP = math.cos(state.gamma_P), math.sin(state.gamma_P)
    ccP, scP = math.cos(state.chi_P), math.sin(state.chi_P)
    cgT, sgT = math.cos(state.gamma_T), math.sin(state.gamma_T)
    ccT, scT = math.cos(state.chi_T), math.sin(state.chi_T)
    dr = state.V_T * cgT * ccT - state.V_P * cgP * ccP
    dtheta = (state.V_T * sgT - state.V_P * sgP) / r
    dpsi = (state.V_T * cgT * scT - state.V_P * cgP * scP) / (r * math.cos(state.theta))
    return dr, dtheta, dpsi


def _vehicle_rates(
    V: float, gamma: float, chi: float, u: AccelCommandFrame,
    dtheta: float, dpsi: float, stheta: float, ctheta: float,
) -> tuple[float, float, float]:
    """(dV, dgamma, dchi) for one vehicle from its turn-rate equations."""
    if V < V_GUARD:
        if u.a_gamma != 0.0 or u.a_chi != 0.0:
            raise GuardViolation(
                f"lateral acceleration at speed {V:.3g} m/s below guard"
            )
        # zero-speed direction is unobservable; freeze the angles
        return u.a_r, 0.0, 0.0
    if abs(gamma) >= math.pi / 2 - THETA_GUARD:
        raise GuardViolation(f"gamma {gamma:.6g} rad within guard of +/- pi/2")
    sg, cg = math.sin(gamma), math.cos(gamma)
    sc, cc = math.sin(chi), math.cos(chi)
    dgamma = u.a_gamma / V - dpsi * stheta * sc - dtheta * cc
    dchi = (
        u.a_chi / (V * cg)
        + dpsi * (sg / cg) * cc * stheta
        - dpsi * ctheta
        - dtheta * (sg / cg) * sc
    )
    return u.a_r, dgamma, dchi


def relative_derivatives(
    state: EngagementState,
    u_P: AccelCommandFrame = ZERO_ACCEL,
    u_T: AccelCommandFrame = ZERO_ACCEL,
) -> StateDerivative:
    """Full state derivative of the relative-coordinate engagement."""
    dr, dtheta, dpsi = los_rates(state)
    stheta, ctheta = math.sin(state.theta), math.cos(state.theta)
    dV_P, dgamma_P, dchi_P = _vehicle_rates(
        state.V_P, state.gamma_P, state.chi_P, u_P, dtheta, dpsi, stheta, ctheta
    )
    dV_T, dgamma_T, dchi_T = _vehicle_rates(
        state.V_T, state.gamma_T, state.chi_T, u_T, dtheta, dpsi, stheta, ctheta
    )
    return StateDerivative(
        dr=dr, dtheta=dtheta, dpsi=dpsi,
        dV_P=dV_P, dgamma_P=dgamma_P, dchi_P=dchi_P,
        dV_T=dV_T, dgamma_T=dgamma_T, dchi_T=dchi_T,
    )


def wrap_angles(state: EngagementState) -> EngagementState:
    """Re-wrap all angles into their canonical ranges.

    Elevation overshoot is handled by spherical reflection, which preserves
    the physical direction vectors: reflecting theta flips the LOS y and z
    axes, so both vehicles' (gamma, chi) flip sign with it. Idempotent.
    """
    theta = wrap_pi(state.theta)
    psi = state.psi
    gamma_P, chi_P = state.gamma_P, state.chi_P
    gamma_T, chi_T = state.gamma_T, state.chi_T
    if theta > math.pi / 2:
        theta = math.pi - theta
        psi += math.pi
        gamma_P, chi_P = -gamma_P, -chi_P
        gamma_T, chi_T = -gamma_T, -chi_T
    elif theta < -math.pi / 2:
        theta = -math.pi - theta
        psi += math.pi
        gamma_P, chi_P = -gamma_P, -chi_P
        gamma_T, chi_T = -gamma_T, -chi_T

    def wrap_vehicle(gamma: float, chi: float) -> tuple[float, float]:
        g = wrap_pi(gamma)
        if g > math.pi / 2:
            g = math.pi - g
            chi = chi + math.pi
        elif g < -math.pi / 2:
            g = -math.pi - g
            chi = chi + math.pi
        return g, wrap_pi(chi)

    gamma_P, chi_P = wrap_vehicle(gamma_P, chi_P)
    gamma_T, chi_T = wrap_vehicle(gamma_T, chi_T)
    return replace(
        state,
        theta=theta, psi=wrap_pi(psi),
        gamma_P=gamma_P, chi_P=chi_P,
        gamma_T=gamma_T, chi_T=chi_T,
    )


_STATE_FIELDS = ("r", "theta", "psi", "V_P", "gamma_P", "chi_P", "V_T", "gamma_T", "chi_T")
_DERIV_FIELDS = ("dr", "dtheta", "dpsi", "dV_P", "dgamma_P", "dchi_P", "dV_T", "dgamma_T", "dchi_T")


def step_relative(
    state: EngagementState,
    u_P: AccelCommandFrame = ZERO_ACCEL,
    u_T: AccelCommandFrame = ZERO_ACCEL,
    dt: float = 0.05,
) -> EngagementState:
    """Advance the relative state one fixed RK4 step with held accelerations."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")

    def deriv(s: EngagementState) -> tuple[float, ...]:
        d = relative_derivatives(s, u_P, u_T)
        return tuple(getattr(d, f) for f in _DERIV_FIELDS)

    def offset(s: EngagementState, k: tuple[float, ...], h: float) -> EngagementState:
        vals = {f: getattr(s, f) + h * kv for f, kv in zip(_STATE_FIELDS, k)}
        return EngagementState(t=s.t, **vals)

    k1 = deriv(state)
    k2 = deriv(offset(state, k1, dt / 2))
    k3 = deriv(offset(state, k2, dt / 2))
    k4 = deriv(offset(state, k3, dt))
    vals = {
        f: getattr(state, f) + dt / 6.0 * (a + 2 * b + 2 * c + d)
        for f, a, b, c, d in zip(_STATE_FIELDS, k1, k2, k3, k4)
    }
    return wrap_angles(EngagementState(t=state.t + dt, **vals))


def _inertial_deriv(
    pos_P: np.ndarray, vel_P: np.ndarray, pos_T: np.ndarray, vel_T: np.ndarray,
    u_P: AccelCommandFrame, u_T: AccelCommandFrame,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    d = pos_T - pos_P
    r = float(np.linalg.norm(d))
    if r < R_MIN_GUARD:
        raise DegenerateLOS(f"range {r:.3g} m below guard during propagation")
    theta = math.asin(max(-1.0, min(1.0, float(d[2]) / r)))
    psi = math.atan2(float(d[1]), float(d[0]))
    basis = los_basis(theta, psi)
    acc_P = basis @ body_accel_los(basis.T @ vel_P, u_P)
    acc_T = basis @ body_accel_los(basis.T @ vel_T, u_T)
    return vel_P, acc_P, vel_T, acc_T


def step_inertial(
    state: InertialState,
    u_P: AccelCommandFrame = ZERO_ACCEL,
    u_T: AccelCommandFrame = ZERO_ACCEL,
    dt: float = 0.05,
) -> InertialState:
    """Advance the inertial state one fixed RK4 step with held body commands.

    The body axes are re-derived from the instantaneous LOS frame and
    velocities at every stage, so a held command follows the turning frame
    exactly as in the relative-coordinate equations.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    y = (state.pos_P, state.vel_P, state.pos_T, state.vel_T)

    def add(y, k, h):
        return tuple(a + h * b for a, b in zip(y, k))

    k1 = _inertial_deriv(*y, u_P, u_T)
    k2 = _inertial_deriv(*add(y, k1, dt / 2), u_P, u_T)
    k3 = _inertial_deriv(*add(y, k2, dt / 2), u_P, u_T)
    k4 = _inertial_deriv(*add(y, k3, dt), u_P, u_T)
    out = tuple(
        a + dt / 6.0 * (b + 2 * c + 2 * d + e)
        for a, b, c, d, e in zip(y, k1, k2, k3, k4)
    )
    return InertialState(pos_P=out[0], vel_P=out[1], pos_T=out[2], vel_T=out[3], t=state.t + dt)
