"""Scenario configuration: dataclass, text format, validation, bundled setups.

The on-disk format is a flat `key = value` document ('#' starts a comment).
Every key has a default; unknown keys are rejected with line context. All
units are SI and all angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from importlib import resources

import numpy as np

from .errors import ConfigError
from .guidance import GuidanceParams
from .targets import (
    AccelBounds,
    ConstantVelocityTarget,
    SinusoidalTarget,
    StationaryTarget,
    TabulatedTarget,
    TargetModel,
    check_declared_bounds,
    init_target_inertial,
    load_profile_csv,
)

PLANTS = ("kinematic", "uncertain")
TARGET_KINDS = ("stationary", "constant-velocity", "sinusoidal", "custom-profile")
DISTURBANCE_CHANNELS = ("r", "gamma", "chi")


@dataclass(frozen=True)
class DisturbanceSpec:
    """Additive sinusoid on the pursuer's plant acceleration channels."""

    amplitude: float = 0.0    # m/s^2
    frequency: float = 1.0    # rad/s
    channels: tuple[str, ...] = DISTURBANCE_CHANNELS


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one closed-loop engagement run."""

    name: str = "custom"
    plant: str = "kinematic"

    pursuer_pos0: tuple[float, float, float] = (0.0, 0.0, 15.0)
    pursuer_speed0: float = 3.0
    pursuer_gamma0: float = math.radians(10.0)
    pursuer_chi0: float = math.radians(10.0)

    target_kind: str = "stationary"
    target_pos0: tuple[float, float, float] = (12.0, 12.0, 15.0)
    target_speed0: float = 0.0
    target_gamma0: float = math.radians(10.0)
    target_chi0: float = math.radians(10.0)
    target_vx: float = 3.5
    target_amp_y: float = 1.5
    target_freq_y: float = 4.0 * math.pi / 100.0
    target_amp_z: float = 1.0
    target_freq_z: float = 8.0 * math.pi / 100.0
    target_profile: str | None = None
    target_a_max_r: float = 0.0
    target_a_max_gamma: float = 0.0
    target_a_max_chi: float = 0.0

    guidance: GuidanceParams = field(default_factory=GuidanceParams)
    disturbance: DisturbanceSpec = field(default_factory=DisturbanceSpec)

    duration: float = 100.0
    dt_guidance: float = 0.05
    n_substeps: int = 10
    seed: int = 0

    trace_path: str | None = None
    metrics_path: str | None = None

    # ---- derived geometry ----

    def initial_los(self) -> tuple[float, float, float]:
        """(r0, theta0, psi0) from the initial positions."""
        d = np.asarray(self.target_pos0, float) - np.asarray(self.pursuer_pos0, float)
        r0 = float(np.linalg.norm(d))
        if r0 <= 0:
            raise ConfigError("pursuer and target initial positions coincide")
        theta0 = math.asin(max(-1.0, min(1.0, float(d[2]) / r0)))
        psi0 = math.atan2(float(d[1]), float(d[0]))
        return r0, theta0, psi0

    def initial_epsilon(self) -> float:
        return self.initial_los()[0] - self.guidance.r_d

    def build_target(self) -> TargetModel:
        bounds = AccelBounds(self.target_a_max_r, self.target_a_max_gamma, self.target_a_max_chi)
        if self.target_kind == "stationary":
            return StationaryTarget(bounds=bounds)
        if self.target_kind == "constant-velocity":
            _, theta0, psi0 = self.initial_los()
            v0 = init_target_inertial(
                self.target_chi0, self.target_gamma0, self.target_speed0, theta0, psi0
            )
            return ConstantVelocityTarget(v0=v0, bounds=bounds)
        if self.target_kind == "sinusoidal":
            return SinusoidalTarget(
                vx=self.target_vx,
                amp_y=self.target_amp_y, freq_y=self.target_freq_y,
                amp_z=self.target_amp_z, freq_z=self.target_freq_z,
                bounds=bounds,
            )
        if self.target_kind == "custom-profile":
            if not self.target_profile:
                raise ConfigError("target.profile path required for custom-profile targets")
            return load_profile_csv(self.target_profile, bounds)
        raise ConfigError(f"unknown target kind {self.target_kind!r}")

    def validate(self) -> "ScenarioConfig":
        if self.plant not in PLANTS:
            raise ConfigError(f"plant must be one of {PLANTS}, got {self.plant!r}")
        if self.target_kind not in TARGET_KINDS:
            raise ConfigError(f"target.kind must be one of {TARGET_KINDS}")
        if self.duration <= 0:
            raise ConfigError("sim.duration must be positive")
        if self.dt_guidance <= 0:
            raise ConfigError("sim.dt_guidance must be positive")
        if self.n_substeps < 1:
            raise ConfigError("sim.n_substeps must be >= 1")
        if self.pursuer_speed0 < 0 or self.target_speed0 < 0:
            raise ConfigError("initial speeds must be non-negative")
        g = self.guidance
        eps0 = self.initial_epsilon()
        if not (-g.a < eps0 < g.b):
            raise ConfigError(
                f"initial range error eps(0)={eps0:.6g} m lies outside (-a, b)="
                f"(-{g.a:.6g}, {g.b:.6g}); the invariance guarantee only holds "
                "for starts inside the open interval"
            )
        model = self.build_target()
        bound_sum = model.bounds.total
        if g.K_2 <= bound_sum:
            raise ConfigError(
                f"sliding gain K_2={g.K_2:.6g} must exceed the target's declared "
                f"acceleration bound sum {bound_sum:.6g} m/s^2"
            )
        check_declared_bounds(model, self.duration)
        for ch in self.disturbance.channels:
            if ch not in DISTURBANCE_CHANNELS:
                raise ConfigError(f"disturbance channel must be in {DISTURBANCE_CHANNELS}")
        return self


# ---------------------------------------------------------------------------
# flat key=value codec

def _fmt_float(x: float) -> str:
    return repr(float(x))


_KEY_CODEC: dict[str, tuple] = {}


def _register_keys():
    """Key table: name -> (getter description, setter path, parser, serializer)."""
    float_keys = {
        "pursuer.x0": ("pursuer_pos0", 0), "pursuer.y0": ("pursuer_pos0", 1),
        "pursuer.z0": ("pursuer_pos0", 2),
        "target.x0": ("target_pos0", 0), "target.y0": ("target_pos0", 1),
        "target.z0": ("target_pos0", 2),
    }
    for key, spec in float_keys.items():
        _KEY_CODEC[key] = ("tuple_float", spec)
    for key, attr in {
        "pursuer.speed0": "pursuer_speed0",
        "pursuer.gamma0": "pursuer_gamma0",
        "pursuer.chi0": "pursuer_chi0",
        "target.speed0": "target_speed0",
        "target.gamma0": "target_gamma0",
        "target.chi0": "target_chi0",
        "target.vx": "target_vx",
        "target.amp_y": "target_amp_y",
        "target.freq_y": "target_freq_y",
        "target.amp_z": "target_amp_z",
        "target.freq_z": "target_freq_z",
        "target.a_max_r": "target_a_max_r",
        "target.a_max_gamma": "target_a_max_gamma",
        "target.a_max_chi": "target_a_max_chi",
        "sim.duration": "duration",
        "sim.dt_guidance": "dt_guidance",
    }.items():
        _KEY_CODEC[key] = ("float", attr)
    for key, attr in {"sim.n_substeps": "n_substeps", "sim.seed": "seed"}.items():
        _KEY_CODEC[key] = ("int", attr)
    for key, attr in {
        "name": "name", "plant": "plant", "target.kind": "target_kind",
        "target.profile": "target_profile",
        "output.trace": "trace_path", "output.metrics": "metrics_path",
    }.items():
        _KEY_CODEC[key] = ("str", attr)
    for key, attr in {
        "guidance.V_d": "V_d", "guidance.r_d": "r_d", "guidance.a": "a",
        "guidance.b": "b", "guidance.K_v": "K_v", "guidance.K_1": "K_1",
        "guidance.K_2": "K_2", "guidance.w_1": "w_1", "guidance.w_2": "w_2",
        "guidance.phi_bl": "phi_bl", "guidance.a_sat": "a_sat",
    }.items():
        _KEY_CODEC[key] = ("guidance_float", attr)
    _KEY_CODEC["guidance.barrier_pairing"] = ("guidance_str", "barrier_pairing")
    _KEY_CODEC["guidance.radial_comp_sign"] = ("guidance_str", "radial_comp_sign")
    _KEY_CODEC["disturbance.amplitude"] = ("dist_float", "amplitude")
    _KEY_CODEC["disturbance.frequency"] = ("dist_float", "frequency")
    _KEY_CODEC["disturbance.channels"] = ("dist_channels", "channels")


_register_keys()

# serialization order: stable, grouped like the table above
_KEY_ORDER = list(_KEY_CODEC)


def apply_key(config: ScenarioConfig, key: str, raw: str, where: str = "") -> ScenarioConfig:
    """Set one key on a config, returning the updated copy."""
    if key not in _KEY_CODEC:
        raise ConfigError(f"unknown key {key!r}{where}")
    kind, spec = _KEY_CODEC[key]
    raw = raw.strip()
    try:
        if kind == "tuple_float":
            attr, idx = spec
            vals = list(getattr(config, attr))
            vals[idx] = float(raw)
            return replace(config, **{attr: tuple(vals)})
        if kind == "float":
            return replace(config, **{spec: float(raw)})
        if kind == "int":
            return replace(config, **{spec: int(raw)})
        if kind == "str":
            value = raw if raw != "" else None
            if spec in ("name", "plant", "target_kind") and value is None:
                raise ValueError("empty value")
            return replace(config, **{spec: value})
        if kind == "guidance_float":
            return replace(config, guidance=replace(config.guidance, **{spec: float(raw)}))
        if kind == "guidance_str":
            return replace(config, guidance=replace(config.guidance, **{spec: raw}))
        if kind == "dist_float":
            return replace(config, disturbance=replace(config.disturbance, **{spec: float(raw)}))
        if kind == "dist_channels":
            chans = tuple(c.strip() for c in raw.split(",") if c.strip())
            return replace(config, disturbance=replace(config.disturbance, channels=chans))
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}{where} ({exc})") from exc
    raise ConfigError(f"unhandled key kind for {key!r}")  # pragma: no cover


def read_key(config: ScenarioConfig, key: str) -> str:
    kind, spec = _KEY_CODEC[key]
    if kind == "tuple_float":
        attr, idx = spec
        return _fmt_float(getattr(config, attr)[idx])
    if kind == "float":
        return _fmt_float(getattr(config, spec))
    if kind == "int":
        return str(getattr(config, spec))
    if kind == "str":
        v = getattr(config, spec)
        return "" if v is None else str(v)
    if kind == "guidance_float":
        return _fmt_float(getattr(config.guidance, spec))
    if kind == "guidance_str":
        return getattr(config.guidance, spec)
    if kind == "dist_float":
        return _fmt_float(getattr(config.disturbance, spec))
    if kind == "dist_channels":
        return ",".join(config.disturbance.channels)
    raise KeyError(key)  # pragma: no cover


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse a flat key=value document into a ScenarioConfig."""
    config = base if base is not None else ScenarioConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.rstrip()!r}")
        key, raw = stripped.split("=", 1)
        config = apply_key(config, key.strip(), raw, where=f" (line {lineno})")
    return config


def serialize_config(config: ScenarioConfig) -> str:
    """Canonical text form; parse(serialize(c)) equals c."""
    lines = [f"{key} = {read_key(config, key)}" for key in _KEY_ORDER]
    return "\n".join(lines) + "\n"


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path!r}: {exc}") from exc
    return parse_config(text)


BUNDLED = ("st", "cvt", "mt")


def bundled_scenario(name: str) -> ScenarioConfig:
    """Load one of the packaged scenarios: st, cvt, or mt."""
    if name not in BUNDLED:
        raise ConfigError(f"unknown bundled scenario {name!r}; available: {', '.join(BUNDLED)}")
    text = resources.files("enclose3d").joinpath(f"scenarios/{name}.cfg").read_text()
    return parse_config(text)


def resolve_scenario(spec: str) -> ScenarioConfig:
    """Treat the spec as a bundled name first, then as a file path."""
    if spec in BUNDLED:
        return bundled_scenario(spec)
    return load_config(spec)
