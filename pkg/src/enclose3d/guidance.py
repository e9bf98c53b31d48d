"""Pursuer guidance: speed regulation, barrier range control, lateral allocation.

Three commands are produced each cycle:

* a_r: proportional speed feedback toward the constant desired speed.
* an effective lateral control U that drives the range error eps = r - r_d
  to zero through a backstepping design with an asymmetric logarithmic
  barrier keeping eps inside (-a, b), plus a sliding term rejecting bounded
  target inputs.
* (a_gamma, a_chi): the pitch/yaw split of U minimizing the weighted effort
  sqrt((a_gamma/w_1)^2 + (a_chi/w_2)^2) on the constraint manifold.

All functions are pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engagement import EngagementState, los_rates
from .errors import OutOfBarrier

# Allocation denominator below this is treated as the lead-angle singularity.
D_GUARD = 1e-8

MODE_PROOF = "proof-consistent"
MODE_LITERAL = "literal-eq4"
_MODES = (MODE_PROOF, MODE_LITERAL)


@dataclass(frozen=True)
class LosRates:
    """Ground-truth LOS rates fed back to the range controller."""

    dr: float
    dtheta: float
    dpsi: float


@dataclass(frozen=True)
class GuidanceParams:
    """Gains, set-points, and barrier geometry for the pursuer.

    The shell radii follow from r_d and the error bounds: inner exclusion
    radius r_T = r_d - a, outer tether radius r_C = r_d + b. K_2 must
    dominate the sum of the target's declared acceleration bounds for the
    invariance guarantee to hold.
    """

    V_d: float = 5.0          # desired speed, m/s
    r_d: float = 8.0          # desired range, m
    a: float = 5.0            # inner range-error bound, m  (r_d - r_T)
    b: float = 15.0           # outer range-error bound, m  (r_C - r_d)
    K_v: float = 1.0          # speed gain, 1/s
    K_1: float = 0.008        # backstepping gain
    K_2: float = 30.0         # sliding gain, m/s^2
    w_1: float = 0.5          # pitch-channel effort weight
    w_2: float = 0.5          # yaw-channel effort weight
    phi_bl: float = 1.5       # sliding boundary-layer half-width, m/s (0 = pure sign)
    a_sat: float = 12.0       # lateral saturation per channel, m/s^2
    barrier_pairing: str = MODE_PROOF
    radial_comp_sign: str = MODE_PROOF

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("error bounds a, b must be positive")
        if not self.r_d > self.a:
            raise ValueError("need r_d > a so the inner radius r_d - a stays positive")
        if self.K_v <= 0 or self.K_1 <= 0:
            raise ValueError("gains K_v, K_1 must be positive")
        if self.K_2 <= 0:
            raise ValueError("sliding gain K_2 must be positive")
        if self.w_1 <= 0 or self.w_2 <= 0:
            raise ValueError("allocation weights must be positive")
        if self.phi_bl < 0 or self.a_sat <= 0:
            raise ValueError("phi_bl must be >= 0 and a_sat > 0")
        if self.barrier_pairing not in _MODES or self.radial_comp_sign not in _MODES:
            raise ValueError(f"mode flags must be one of {_MODES}")

    @property
    def r_threat(self) -> float:
        return self.r_d - self.a

    @property
    def r_connect(self) -> float:
        return self.r_d + self.b


@dataclass(frozen=True)
class PursuerCommand:
    """Acceleration commands plus every intermediate the diagnostics need."""

    a_r: float
    a_gamma: float
    a_chi: float
    epsilon: float
    q: int
    z: float
    alpha: float
    alpha_dot: float
    U: float
    sigma_P: float
    saturated: bool
    V1: float
    V2: float


def radial_accel(V_P: float, params: GuidanceParams) -> float:
    """Speed feedback -K_v (V_P - V_d); drives the speed error exponentially to zero."""
    return -params.K_v * (V_P - params.V_d)


def range_error(r: float, params: GuidanceParams) -> tuple[float, int]:
    """Range error eps = r - r_d and the branch switch q (1 iff eps > 0)."""
    eps = r - params.r_d
    return eps, (1 if eps > 0 else 0)


def _check_barrier(epsilon: float, params: GuidanceParams, t: float | None = None) -> None:
    if not (-params.a < epsilon < params.b):
        raise OutOfBarrier(epsilon, params.a, params.b, t)


def stabilizing_alpha(epsilon: float, q: int, params: GuidanceParams) -> float:
    """Desired range rate from the backstepping design.

    alpha = -[active bound^2 - eps^2] K_1 eps^3, where the active bound is b
    on the outer branch (q = 1) and a on the inner branch.
    """
    _check_barrier(epsilon, params)
    bound_sq = params.b ** 2 if q else params.a ** 2
    return -(bound_sq - epsilon ** 2) * params.K_1 * epsilon ** 3


def alpha_dot(epsilon: float, epsilon_dot: float, q: int, params: GuidanceParams) -> float:
    """Analytic chain-rule rate of the stabilizing function.

    d(alpha)/d(eps) = -K_1 (3 B^2 eps^2 - 5 eps^4) with B the active bound;
    both branches vanish at eps = 0, so the switch is continuous there.
    """
    _check_barrier(epsilon, params)
    bound_sq = params.b ** 2 if q else params.a ** 2
    slope = -params.K_1 * (3.0 * bound_sq * epsilon ** 2 - 5.0 * epsilon ** 4)
    return slope * epsilon_dot


def barrier_value(epsilon: float, q: int, params: GuidanceParams) -> float:
    """Asymmetric logarithmic barrier; finite inside (-a, b), infinite at the walls.

    Only the active branch is evaluated: the inactive one can have a negative
    log argument when |eps| exceeds its bound.
    """
    _check_barrier(epsilon, params)
    if q:
        return math.log(params.b ** 2 / (params.b ** 2 - epsilon ** 2))
    return math.log(params.a ** 2 / (params.a ** 2 - epsilon ** 2))


def _barrier_gain(epsilon: float, q: int, params: GuidanceParams) -> float:
    """Coefficient of the eps feedback term in the effective control."""
    if params.barrier_pairing == MODE_PROOF:
        bound_sq = params.b ** 2 if q else params.a ** 2
    else:
        # as printed: q paired with the inner bound
        bound_sq = params.a ** 2 if q else params.b ** 2
    return 1.0 / (bound_sq - epsilon ** 2)


def _sgn_bl(z: float, phi_bl: float) -> float:
    """Sign function, optionally smoothed inside a boundary layer."""
    if phi_bl > 0.0:
        return max(-1.0, min(1.0, z / phi_bl))
    return math.copysign(1.0, z) if z != 0.0 else 0.0


def effective_control(
    state: EngagementState,
    derivs,
    params: GuidanceParams,
) -> tuple[float, float]:
    """Effective lateral control U and the pseudo-variable z = dr - alpha.

    U collects: the centripetal terms holding a circular orbit at the current
    range, the along-LOS component of the radial acceleration, the stabilizing
    rate alpha_dot, the sliding term rejecting bounded target inputs, and the
    barrier feedback. `derivs` must carry (dr, dtheta, dpsi) consistent with
    the state (ground-truth relative measurements).
    """
    eps, q = range_error(state.r, params)
    _check_barrier(eps, params, state.t)
    dr, dtheta, dpsi = derivs.dr, derivs.dtheta, derivs.dpsi
    alpha = stabilizing_alpha(eps, q, params)
    z = dr - alpha
    adot = alpha_dot(eps, dr, q, params)
    ct = math.cos(state.theta)
    centripetal = -state.r * dtheta ** 2 - state.r * ct * ct * dpsi ** 2
    rad = params.K_v * (state.V_P - params.V_d) * math.cos(state.gamma_P) * math.cos(state.chi_P)
    if params.radial_comp_sign == MODE_LITERAL:
        rad = -rad
    U = (
        centripetal
        + rad
        + adot
        - params.K_2 * _sgn_bl(z, params.phi_bl)
        - _barrier_gain(eps, q, params) * eps
    )
    return U, z


def lead_angle(gamma_P: float, chi_P: float) -> float:
    """Angle between the pursuer velocity and the LOS: arccos(cos g cos c)."""
    c = math.cos(gamma_P) * math.cos(chi_P)
    return math.acos(max(-1.0, min(1.0, c)))


def allocate_lateral(
    U: float, gamma_P: float, chi_P: float, params: GuidanceParams
) -> tuple[float, float, bool]:
    """Split U between the pitch and yaw channels with least weighted effort.

    Near zero lead angle the constraint direction vanishes and no finite
    split exists; both channels are driven to the saturation value, which
    kicks the velocity off the LOS and restores a usable geometry.
    """
    sg_cc = math.sin(gamma_P) * math.cos(chi_P)
    sc = math.sin(chi_P)
    D = sg_cc ** 2 * params.w_1 ** 2 + sc ** 2 * params.w_2 ** 2
    if D < D_GUARD:
        esc = math.copysign(params.a_sat, U) if U != 0.0 else params.a_sat
        return esc, esc, True
    a_gamma = sg_cc * params.w_1 ** 2 * U / D
    a_chi = sc * params.w_2 ** 2 * U / D
    saturated = False
    if abs(a_gamma) > params.a_sat:
        a_gamma = math.copysign(params.a_sat, a_gamma)
        saturated = True
    if abs(a_chi) > params.a_sat:
        a_chi = math.copysign(params.a_sat, a_chi)
        saturated = True
    return a_gamma, a_chi, saturated


def guidance_step(state: EngagementState, params: GuidanceParams) -> PursuerCommand:
    """One full guidance evaluation: commands plus all logged diagnostics."""
    eps, q = range_error(state.r, params)
    _check_barrier(eps, params, state.t)
    rates = LosRates(*los_rates(state))
    a_r = radial_accel(state.V_P, params)
    U, z = effective_control(state, rates, params)
    alpha = stabilizing_alpha(eps, q, params)
    adot = alpha_dot(eps, rates.dr, q, params)
    a_gamma, a_chi, saturated = allocate_lateral(U, state.gamma_P, state.chi_P, params)
    V1 = barrier_value(eps, q, params)
    return PursuerCommand(
        a_r=a_r, a_gamma=a_gamma, a_chi=a_chi,
        epsilon=eps, q=q, z=z, alpha=alpha, alpha_dot=adot,
        U=U, sigma_P=lead_angle(state.gamma_P, state.chi_P),
        saturated=saturated, V1=V1, V2=V1 + 0.5 * z * z,
    )
