"""Closed-loop scenario execution, safety monitoring, metrics, Monte Carlo sweeps.

The guidance loop runs at the configured period with the lateral commands
held (zero-order hold) while the pursuer's plant integrates with RK4
substeps. The target is never integrated: its position and velocity come
from the profile's closed form at every stage time. The radial channel is
evaluated as continuous speed feedback inside the integrator so the speed
loop matches its exponential closed form to integration accuracy; holding it
at the guidance rate would leave a first-order discretization error that
swamps that closed form.

Runs are deterministic: identical configs (and seeds) give bit-identical
traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .engagement import (
    R_MIN_GUARD,
    V_GUARD,
    EngagementState,
    InertialState,
    los_basis,
    los_frame_velocity,
)
from .errors import (
    ConfigError,
    DegenerateLOS,
    Enclose3dError,
    GuardViolation,
    OutOfBarrier,
    ZeroSpeedFrame,
)
from .guidance import GuidanceParams, PursuerCommand, guidance_step
from .scenario import DisturbanceSpec, ScenarioConfig
from .targets import TargetModel


@dataclass(frozen=True)
class SimRecord:
    """One guidance-rate sample of the closed loop."""

    t: float
    state: EngagementState
    pos_P: tuple[float, float, float]
    vel_P: tuple[float, float, float]
    pos_T: tuple[float, float, float]
    vel_T: tuple[float, float, float]
    cmd: PursuerCommand
    delta_true: float
    in_barrier: bool
    in_safe_shell: bool


@dataclass(frozen=True)
class AbortReport:
    """Why a run stopped early, and where."""

    t: float
    reason: str
    record_index: int


@dataclass(frozen=True)
class MetricsSummary:
    final_eps: float
    max_abs_eps: float
    max_abs_eps_last20pct: float
    eps_settling_time: float        # -1 if never settled to |eps| < 0.05 r_d
    min_r: float
    max_r: float
    speed_settling_time: float      # -1 if never settled; 0 if started settled
    lateral_effort: float           # integral of |a_gamma| + |a_chi| dt
    barrier_violations: int
    saturation_duty: float
    completed: bool


@dataclass(frozen=True)
class SimResult:
    records: list[SimRecord]
    metrics: MetricsSummary
    aborted: AbortReport | None
    config: ScenarioConfig


def inject_disturbance(
    u_tuple: tuple[float, float, float], t: float, spec: DisturbanceSpec
) -> tuple[float, float, float]:
    """Add the configured sinusoid to each masked channel of (a_r, a_gamma, a_chi)."""
    if spec.amplitude == 0.0:
        return u_tuple
    d = spec.amplitude * math.sin(spec.frequency * t)
    a_r, a_gamma, a_chi = u_tuple
    if "r" in spec.channels:
        a_r += d
    if "gamma" in spec.channels:
        a_gamma += d
    if "chi" in spec.channels:
        a_chi += d
    return a_r, a_gamma, a_chi


def safety_monitor(r: float, epsilon: float, params: GuidanceParams) -> tuple[bool, bool]:
    """(in_barrier, in_safe_shell); the two predicates must agree by construction."""
    in_barrier = -params.a < epsilon < params.b
    in_shell = params.r_threat < r < params.r_connect
    if in_barrier != in_shell:
        raise AssertionError(
            f"barrier/shell flags disagree at r={r!r}, eps={epsilon!r}"
        )
    return in_barrier, in_shell


# ---------------------------------------------------------------------------
# target closed forms as scalar-tuple closures (keeps the hot loop numpy-free)

def _target_fns(model: TargetModel, pos0: tuple[float, float, float]):
    x0, y0, z0 = float(pos0[0]), float(pos0[1]), float(pos0[2])
    kind = model.kind
    if kind == "stationary":
        pos = lambda t: (x0, y0, z0)
        vel = lambda t: (0.0, 0.0, 0.0)
        return pos, vel
    if kind == "constant-velocity":
        vx, vy, vz = (float(c) for c in model.v0)
        pos = lambda t: (x0 + vx * t, y0 + vy * t, z0 + vz * t)
        vel = lambda t: (vx, vy, vz)
        return pos, vel
    if kind == "sinusoidal":
        vx, ay, fy, az, fz = model.vx, model.amp_y, model.freq_y, model.amp_z, model.freq_z

        def pos(t: float) -> tuple[float, float, float]:
            y = ay / fy * (1.0 - math.cos(fy * t)) if fy else 0.0
            z = az / fz * (1.0 - math.cos(fz * t)) if fz else 0.0
            return (x0 + vx * t, y0 + y, z0 + z)

        def vel(t: float) -> tuple[float, float, float]:
            return (vx, ay * math.sin(fy * t), az * math.sin(fz * t))

        return pos, vel

    def pos(t: float) -> tuple[float, float, float]:
        p = model.position(t, (x0, y0, z0))
        return (float(p[0]), float(p[1]), float(p[2]))

    def vel(t: float) -> tuple[float, float, float]:
        v = model.velocity(t)
        return (float(v[0]), float(v[1]), float(v[2]))

    return pos, vel


def _los_geometry(px, py, pz, tx, ty, tz):
    """Scalar LOS basis from positions: returns (r, basis rows as 9 floats).

    Basis columns are x_L (along LOS), y_L, z_L; entries returned row-major.
    """
    dx, dy, dz = tx - px, ty - py, tz - pz
    r = math.sqrt(dx * dx + dy * dy + dz * dz)
    if r < R_MIN_GUARD:
        raise DegenerateLOS(f"range {r:.3g} m below guard during propagation")
    rxy = math.sqrt(dx * dx + dy * dy)
    if rxy < R_MIN_GUARD * 1e-3:
        raise GuardViolation("LOS vertical: azimuth frame undefined")
    st, ct = dz / r, rxy / r
    cp, sp = dx / rxy, dy / rxy
    # columns: x_L, y_L, z_L
    return r, (
        ct * cp, -sp, -st * cp,
        ct * sp, cp, -st * sp,
        st, 0.0, ct,
    )


def _command_frame(basis, vx, vy, vz):
    """Inertial body-frame lateral axes (yaw-plane y, pitch-plane z) at command time."""
    b00, b01, b02, b10, b11, b12, b20, b21, b22 = basis
    lx = b00 * vx + b10 * vy + b20 * vz
    ly = b01 * vx + b11 * vy + b21 * vz
    lz = b02 * vx + b12 * vy + b22 * vz
    V = math.sqrt(lx * lx + ly * ly + lz * lz)
    if V < V_GUARD:
        raise ZeroSpeedFrame(f"body frame undefined at speed {V:.3g} m/s")
    vxy = math.sqrt(lx * lx + ly * ly)
    if vxy < 1e-12 * V:
        raise ZeroSpeedFrame("body frame undefined at gamma = +/- pi/2")
    sc, cc = ly / vxy, lx / vxy
    # y_B = (-sc, cc, 0) in LOS components; the pitch axis follows as v x y
    return (
        b00 * -sc + b01 * cc,
        b10 * -sc + b11 * cc,
        b20 * -sc + b21 * cc,
    )


def _transported_accel(vx, vy, vz, yk, a_r, a_gamma, a_chi):
    """Acceleration with the lateral axes transported perpendicular to v.

    The command-time yaw axis yk is projected onto the plane perpendicular to
    the instantaneous velocity and renormalized; the pitch axis follows as
    v x y. Lateral components therefore never change the speed, and the
    construction stays smooth when the velocity sweeps through the LOS-frame
    vertical, where the chart axes would flip.
    """
    V = math.sqrt(vx * vx + vy * vy + vz * vz)
    if V < V_GUARD:
        if a_gamma != 0.0 or a_chi != 0.0:
            raise ZeroSpeedFrame(f"lateral command at speed {V:.3g} m/s")
        return 0.0, 0.0, 0.0
    ux, uy, uz = vx / V, vy / V, vz / V
    if a_gamma == 0.0 and a_chi == 0.0:
        return a_r * ux, a_r * uy, a_r * uz
    dot = yk[0] * ux + yk[1] * uy + yk[2] * uz
    px, py, pz = yk[0] - dot * ux, yk[1] - dot * uy, yk[2] - dot * uz
    pn = math.sqrt(px * px + py * py + pz * pz)
    if pn < 1e-6:
        # velocity rotated into the held yaw axis: > 90 deg in one interval
        raise GuardViolation("held lateral frame degenerate: turn rate too high")
    px, py, pz = px / pn, py / pn, pz / pn
    # transported pitch axis completes the right-handed triad: z = v_hat x y
    qx = uy * pz - uz * py
    qy = uz * px - ux * pz
    qz = ux * py - uy * px
    return (
        a_r * ux + a_chi * px + a_gamma * qx,
        a_r * uy + a_chi * py + a_gamma * qy,
        a_r * uz + a_chi * pz + a_gamma * qz,
    )


def _relative_from_scalars(t, px, py, pz, pvx, pvy, pvz, tx, ty, tz, tvx, tvy, tvz):
    """Fast scalar equivalent of to_relative for the sim loop."""
    r, basis = _los_geometry(px, py, pz, tx, ty, tz)
    b00, b01, b02, b10, b11, b12, b20, b21, b22 = basis
    theta = math.asin(max(-1.0, min(1.0, (tz - pz) / r)))
    psi = math.atan2(ty - py, tx - px)

    def angles(vx, vy, vz):
        lx = b00 * vx + b10 * vy + b20 * vz
        ly = b01 * vx + b11 * vy + b21 * vz
        lz = b02 * vx + b12 * vy + b22 * vz
        V = math.sqrt(lx * lx + ly * ly + lz * lz)
        if V < V_GUARD:
            return V, 0.0, 0.0
        return V, math.asin(max(-1.0, min(1.0, lz / V))), math.atan2(ly, lx)

    V_P, gamma_P, chi_P = angles(pvx, pvy, pvz)
    V_T, gamma_T, chi_T = angles(tvx, tvy, tvz)
    return EngagementState(
        t=t, r=r, theta=theta, psi=psi,
        V_P=V_P, gamma_P=gamma_P, chi_P=chi_P,
        V_T=V_T, gamma_T=gamma_T, chi_T=chi_T,
    )


def _delta_true(state: EngagementState, accel_T: np.ndarray) -> float:
    """Lumped target-input term of the range-error dynamics.

    The target's body components are recovered by projecting its inertial
    acceleration onto its (velocity, yaw-plane, pitch-plane) triad; zero by
    convention at zero target speed.
    """
    if state.V_T < V_GUARD:
        return 0.0
    basis = los_basis(state.theta, state.psi)
    a_los = basis.T @ np.asarray(accel_T, dtype=float)
    cg, sg = math.cos(state.gamma_T), math.sin(state.gamma_T)
    cc, sc = math.cos(state.chi_T), math.sin(state.chi_T)
    xb = np.array([cg * cc, cg * sc, sg])
    yb = np.array([-sc, cc, 0.0])
    zb = np.array([-sg * cc, -sg * sc, cg])
    a_r = float(a_los @ xb)
    a_chi = float(a_los @ yb)
    a_gamma = float(a_los @ zb)
    return -a_r * cg * cc - sg * cc * a_gamma - sc * a_chi


def initial_inertial(config: ScenarioConfig) -> InertialState:
    """Initial world-frame state from the scenario's relative geometry."""
    r0, theta0, psi0 = config.initial_los()
    basis = los_basis(theta0, psi0)
    vel_P = basis @ los_frame_velocity(
        config.pursuer_speed0, config.pursuer_gamma0, config.pursuer_chi0
    )
    model = config.build_target()
    vel_T = model.velocity(0.0)
    if config.target_kind == "stationary":
        vel_T = np.zeros(3)
    return InertialState(
        pos_P=np.asarray(config.pursuer_pos0, float),
        vel_P=vel_P,
        pos_T=np.asarray(config.target_pos0, float),
        vel_T=np.asarray(vel_T, float),
        t=0.0,
    )


def run_scenario(config: ScenarioConfig, validate: bool = True) -> SimResult:
    """Execute one closed-loop run; never raises on safety aborts.

    Safety or guard violations terminate the run early and are reported in
    the result's abort field together with the offending timestamp; the
    partial trace is always returned.
    """
    if validate:
        config.validate()
    params = config.guidance
    model = config.build_target()
    dt = config.dt_guidance
    n_sub = config.n_substeps
    h = dt / n_sub
    n_steps = int(round(config.duration / dt))
    uncertain = config.plant == "uncertain"
    dist = config.disturbance

    target_pos, target_vel = _target_fns(model, config.target_pos0)
    init = initial_inertial(config)
    px, py, pz = (float(v) for v in init.pos_P)
    pvx, pvy, pvz = (float(v) for v in init.vel_P)

    K_v, V_d = params.K_v, params.V_d
    records: list[SimRecord] = []
    aborted: AbortReport | None = None

    def plant_deriv(t: float, y, yk, a_gamma_cmd: float, a_chi_cmd: float):
        _, _, _, vx, vy, vz = y
        V = math.sqrt(vx * vx + vy * vy + vz * vz)
        a_r = -K_v * (V - V_d)
        a_g, a_c = a_gamma_cmd, a_chi_cmd
        if uncertain:
            a_r, a_g, a_c = inject_disturbance((a_r, a_g, a_c), t, dist)
        ax, ay, az = _transported_accel(vx, vy, vz, yk, a_r, a_g, a_c)
        return (vx, vy, vz, ax, ay, az)

    for k in range(n_steps + 1):
        t = k * dt
        tx, ty, tz = target_pos(t)
        tvx, tvy, tvz = target_vel(t)
        try:
            state = _relative_from_scalars(
                t, px, py, pz, pvx, pvy, pvz, tx, ty, tz, tvx, tvy, tvz
            )
            cmd = guidance_step(state, params)
            in_barrier, in_shell = safety_monitor(state.r, cmd.epsilon, params)
            delta = _delta_true(state, model.accel(t))
            records.append(
                SimRecord(
                    t=t, state=state,
                    pos_P=(px, py, pz), vel_P=(pvx, pvy, pvz),
                    pos_T=(tx, ty, tz), vel_T=(tvx, tvy, tvz),
                    cmd=cmd, delta_true=delta,
                    in_barrier=in_barrier, in_safe_shell=in_shell,
                )
            )
        except OutOfBarrier as exc:
            records.append(_abort_record(t, px, py, pz, pvx, pvy, pvz, tx, ty, tz,
                                         tvx, tvy, tvz, params))
            aborted = AbortReport(t=t, reason=str(exc), record_index=len(records) - 1)
            break
        except (GuardViolation, ZeroSpeedFrame, DegenerateLOS) as exc:
            aborted = AbortReport(t=t, reason=str(exc), record_index=len(records) - 1)
            break

        if k == n_steps:
            break

        # propagate the pursuer with the lateral command held in the frame
        # captured at command time
        y = (px, py, pz, pvx, pvy, pvz)
        try:
            _, basis = _los_geometry(px, py, pz, tx, ty, tz)
            try:
                yk = _command_frame(basis, pvx, pvy, pvz)
            except ZeroSpeedFrame:
                if cmd.a_gamma == 0.0 and cmd.a_chi == 0.0 and not uncertain:
                    yk = (0.0, 0.0, 0.0)  # lateral axes unused this interval
                else:
                    raise
            for j in range(n_sub):
                ts = t + j * h
                k1 = plant_deriv(ts, y, yk, cmd.a_gamma, cmd.a_chi)
                y2 = tuple(yi + 0.5 * h * ki for yi, ki in zip(y, k1))
                k2 = plant_deriv(ts + 0.5 * h, y2, yk, cmd.a_gamma, cmd.a_chi)
                y3 = tuple(yi + 0.5 * h * ki for yi, ki in zip(y, k2))
                k3 = plant_deriv(ts + 0.5 * h, y3, yk, cmd.a_gamma, cmd.a_chi)
                y4 = tuple(yi + h * ki for yi, ki in zip(y, k3))
                k4 = plant_deriv(ts + h, y4, yk, cmd.a_gamma, cmd.a_chi)
                y = tuple(
                    yi + h / 6.0 * (a + 2 * b + 2 * c + d)
                    for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
                )
        except (GuardViolation, ZeroSpeedFrame, DegenerateLOS) as exc:
            aborted = AbortReport(t=t, reason=str(exc), record_index=len(records) - 1)
            break
        px, py, pz, pvx, pvy, pvz = y

    metrics = compute_metrics(records, params, dt, completed=aborted is None)
    return SimResult(records=records, metrics=metrics, aborted=aborted, config=config)


def _abort_record(t, px, py, pz, pvx, pvy, pvz, tx, ty, tz, tvx, tvy, tvz, params):
    """Terminal record for a barrier exit: state is kept, command is zeroed."""
    state = _relative_from_scalars(t, px, py, pz, pvx, pvy, pvz, tx, ty, tz, tvx, tvy, tvz)
    eps = state.r - params.r_d
    cmd = PursuerCommand(
        a_r=0.0, a_gamma=0.0, a_chi=0.0, epsilon=eps, q=1 if eps > 0 else 0,
        z=0.0, alpha=0.0, alpha_dot=0.0, U=0.0, sigma_P=0.0, saturated=False,
        V1=math.inf, V2=math.inf,
    )
    return SimRecord(
        t=t, state=state, pos_P=(px, py, pz), vel_P=(pvx, pvy, pvz),
        pos_T=(tx, ty, tz), vel_T=(tvx, tvy, tvz), cmd=cmd, delta_true=0.0,
        in_barrier=False, in_safe_shell=False,
    )


def _settling_time(ts: list[float], values: list[float], threshold: float) -> float:
    """First time after which |value| stays below threshold; -1 if never."""
    settled_from = -1.0
    for t, v in zip(ts, values):
        if abs(v) < threshold:
            if settled_from < 0:
                settled_from = t
        else:
            settled_from = -1.0
    return settled_from


def compute_metrics(
    records: list[SimRecord], params: GuidanceParams, dt: float, completed: bool
) -> MetricsSummary:
    if not records:
        nan = math.nan
        return MetricsSummary(nan, nan, nan, -1.0, nan, nan, -1.0, 0.0, 0, 0.0, completed)
    ts = [rec.t for rec in records]
    eps = [rec.cmd.epsilon for rec in records]
    rs = [rec.state.r for rec in records]
    ev = [rec.state.V_P - params.V_d for rec in records]
    tail_start = ts[-1] - 0.2 * (ts[-1] - ts[0]) if len(records) > 1 else ts[0]
    tail = [abs(e) for t, e in zip(ts, eps) if t >= tail_start]
    ev0 = abs(ev[0])
    if ev0 > 0:
        speed_settle = _settling_time(ts, ev, 0.05 * ev0)
    else:
        speed_settle = 0.0
    effort = sum(abs(r.cmd.a_gamma) + abs(r.cmd.a_chi) for r in records[:-1]) * dt
    return MetricsSummary(
        final_eps=eps[-1],
        max_abs_eps=max(abs(e) for e in eps),
        max_abs_eps_last20pct=max(tail) if tail else abs(eps[-1]),
        eps_settling_time=_settling_time(ts, eps, 0.05 * params.r_d),
        min_r=min(rs),
        max_r=max(rs),
        speed_settling_time=speed_settle,
        lateral_effort=effort,
        barrier_violations=sum(0 if r.in_barrier else 1 for r in records),
        saturation_duty=sum(1 for r in records if r.cmd.saturated) / len(records),
        completed=completed,
    )


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class PerturbationSpec:
    """Randomized initial-condition envelope for batch runs.

    eps0_range draws the initial range error uniformly and repositions the
    pursuer along the nominal initial LOS; angle_jitter adds uniform noise to
    the pursuer's initial LOS-frame angles (radians). manifold_start aims the
    initial velocity so the range rate starts at the stabilizing value
    alpha(eps0) (clamped to what the speeds allow): draws near a wall then
    begin as close to the designed sliding manifold as physics permits,
    instead of flying into the wall faster than any bounded lateral
    acceleration could turn. Zero spec reproduces the template exactly.
    """

    eps0_range: tuple[float, float] | None = None
    angle_jitter: float = 0.0
    manifold_start: bool = False


@dataclass(frozen=True)
class BatchRun:
    index: int
    eps0: float
    metrics: MetricsSummary
    aborted: str | None


@dataclass(frozen=True)
class BatchSummary:
    runs: list[BatchRun]
    n: int
    n_completed: int
    fraction_converged: float
    worst_max_abs_eps: float
    worst_min_r: float
    total_barrier_violations: int
    seed: int


def perturbed_config(
    config: ScenarioConfig,
    eps0: float | None,
    dgamma: float = 0.0,
    dchi: float = 0.0,
    manifold: bool = False,
) -> ScenarioConfig:
    """Template config with the pursuer moved to realize eps(0) and jittered angles."""
    from .guidance import range_error, stabilizing_alpha

    out = config
    if eps0 is not None:
        _, theta0, psi0 = config.initial_los()
        basis = los_basis(theta0, psi0)
        r0 = config.guidance.r_d + eps0
        pos_P = np.asarray(config.target_pos0, float) - basis[:, 0] * r0
        out = replace(out, pursuer_pos0=tuple(float(v) for v in pos_P))
    gamma0, chi0 = config.pursuer_gamma0, config.pursuer_chi0
    if manifold and config.pursuer_speed0 > 0:
        # heading in the yaw plane realizing dr(0) = alpha(eps0), clamped to
        # what the initial speeds can deliver
        r0, theta0, psi0 = out.initial_los()
        eps, q = range_error(r0, config.guidance)
        alpha = stabilizing_alpha(eps, q, config.guidance)
        basis = los_basis(theta0, psi0)
        closing = float(np.asarray(out.build_target().velocity(0.0)) @ basis[:, 0])
        cos_sigma = max(-1.0, min(1.0, (closing - alpha) / config.pursuer_speed0))
        gamma0, chi0 = 0.0, math.acos(cos_sigma)
    if manifold or dgamma or dchi:
        out = replace(out, pursuer_gamma0=gamma0 + dgamma, pursuer_chi0=chi0 + dchi)
    return out


def monte_carlo(
    config: ScenarioConfig,
    n: int,
    perturbation: PerturbationSpec = PerturbationSpec(),
    seed: int | None = None,
    on_result=None,
) -> BatchSummary:
    """Run n perturbed copies of the scenario and aggregate their metrics.

    Per-run failures are recorded, not raised. Reproducible from the seed:
    all draws happen up front, so results are keyed by run index and
    independent of execution order. `on_result(index, config, result)` is
    invoked after each run, e.g. to persist traces.
    """
    if n < 1:
        raise ConfigError("monte carlo needs n >= 1")
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    g = config.guidance
    if perturbation.eps0_range is not None:
        lo, hi = perturbation.eps0_range
        if not (-g.a <= lo < hi <= g.b):
            raise ConfigError(
                f"eps0 range ({lo}, {hi}) must sit inside the barrier (-{g.a}, {g.b})"
            )
        eps0s = rng.uniform(lo, hi, size=n)
    else:
        eps0s = np.full(n, config.initial_epsilon())
    if perturbation.angle_jitter > 0:
        jit = rng.uniform(-perturbation.angle_jitter, perturbation.angle_jitter, size=(n, 2))
    else:
        jit = np.zeros((n, 2))

    runs: list[BatchRun] = []
    for i in range(n):
        eps0 = float(eps0s[i])
        cfg = perturbed_config(
            config,
            eps0 if perturbation.eps0_range is not None else None,
            float(jit[i, 0]),
            float(jit[i, 1]),
            manifold=perturbation.manifold_start,
        )
        try:
            result = run_scenario(cfg)
            runs.append(
                BatchRun(
                    index=i, eps0=eps0, metrics=result.metrics,
                    aborted=None if result.aborted is None else result.aborted.reason,
                )
            )
            if on_result is not None:
                on_result(i, cfg, result)
        except Enclose3dError as exc:
            empty = compute_metrics([], cfg.guidance, cfg.dt_guidance, completed=False)
            runs.append(BatchRun(index=i, eps0=eps0, metrics=empty, aborted=str(exc)))

    completed = [r for r in runs if r.aborted is None]
    converged = [
        r for r in completed
        if r.metrics.barrier_violations == 0 and r.metrics.eps_settling_time >= 0
    ]
    valid = [r for r in runs if r.metrics.max_abs_eps == r.metrics.max_abs_eps]  # drop NaN
    return BatchSummary(
        runs=runs,
        n=n,
        n_completed=len(completed),
        fraction_converged=len(converged) / n,
        worst_max_abs_eps=max((r.metrics.max_abs_eps for r in valid), default=math.nan),
        worst_min_r=min((r.metrics.min_r for r in valid), default=math.nan),
        total_barrier_violations=sum(r.metrics.barrier_violations for r in runs),
        seed=seed,
    )
