import math

import numpy as np
import pytest

from enclose3d.engagement import InertialState, to_relative
from enclose3d.targets import (
    AccelBounds,
    ConstantVelocityTarget,
    SinusoidalTarget,
    StationaryTarget,
    check_declared_bounds,
    init_target_inertial,
    load_profile_csv,
    speed_envelope,
    target_accel,
    target_velocity,
)

D2R = math.pi / 180.0

MT = SinusoidalTarget()  # 3.5 m/s drift, 1.5 @ 4pi/100, 1.0 @ 8pi/100


class TestProfiles:
    def test_stationary(self):
        m = StationaryTarget()
        assert np.all(target_velocity(12.3, m) == 0.0)
        assert np.all(target_accel(12.3, m) == 0.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            target_velocity(-0.1, StationaryTarget())

    def test_weave_at_zero(self):
        assert np.allclose(target_velocity(0.0, MT), [3.5, 0.0, 0.0])

    def test_weave_at_quarter_period(self):
        # both sinusoids return to zero at t = 25
        assert np.allclose(target_velocity(25.0, MT), [3.5, 0.0, 0.0], atol=1e-12)

    def test_weave_accel_at_zero(self):
        assert np.allclose(
            target_accel(0.0, MT),
            [0.0, 1.5 * 4 * math.pi / 100, 8 * math.pi / 100],
        )

    def test_constant_velocity_accel(self):
        m = ConstantVelocityTarget(v0=[1.0, 2.0, 0.0])
        assert np.all(target_accel(3.0, m) == 0.0)
        assert np.allclose(m.position(2.0, [0.0, 0.0, 0.0]), [2.0, 4.0, 0.0])

    def test_accel_matches_finite_differences(self):
        h = 1e-4
        for t in np.linspace(0.5, 99.5, 23):
            fd = (target_velocity(t + h, MT) - target_velocity(t - h, MT)) / (2 * h)
            assert np.allclose(target_accel(t, MT), fd, atol=1e-6)

    def test_position_is_velocity_integral(self):
        ts = np.linspace(0.0, 100.0, 100001)
        v = np.array([MT.velocity(t) for t in ts])
        disp = np.trapezoid(v, ts, axis=0)
        assert np.allclose(MT.position(100.0, np.zeros(3)), disp, atol=1e-6)

    def test_speed_envelope(self):
        lo, hi = speed_envelope(MT, 100.0)
        # measured envelope of the printed profile; sits inside the loose
        # (1, 6) band the scenario description claims
        assert lo == pytest.approx(3.5, abs=1e-9)
        assert hi == pytest.approx(3.832937, abs=1e-4)
        assert 1.0 < lo and hi < 6.0


class TestInitTargetInertial:
    def test_zero_speed(self):
        v = init_target_inertial(0.3, 0.2, 0.0, 0.0, math.pi / 4)
        assert np.allclose(v, 0.0)

    def test_along_los(self):
        v = init_target_inertial(0.0, 0.0, 2.0, 0.0, math.pi / 4)
        assert np.allclose(v, [2 / math.sqrt(2), 2 / math.sqrt(2), 0.0])

    def test_round_trip_angles(self):
        # realize the CVT initial condition and read the angles back
        theta0, psi0 = 0.0, math.pi / 4
        v = init_target_inertial(10 * D2R, 10 * D2R, 2.0, theta0, psi0)
        assert np.linalg.norm(v) == pytest.approx(2.0, rel=1e-12)
        los = np.array([math.cos(psi0), math.sin(psi0), 0.0]) * math.sqrt(288.0)
        state = InertialState(
            pos_P=np.zeros(3), vel_P=np.zeros(3), pos_T=los, vel_T=v
        )
        rel = to_relative(state)
        assert rel.gamma_T == pytest.approx(10 * D2R, rel=1e-9)
        assert rel.chi_T == pytest.approx(10 * D2R, rel=1e-9)


class TestBounds:
    def test_mt_declared_bounds_dominate(self):
        worst = check_declared_bounds(MT, 100.0)
        assert worst == pytest.approx(0.314159, abs=1e-4)

    def test_violated_bounds_raise(self):
        skimpy = SinusoidalTarget(bounds=AccelBounds(0.1, 0.1, 0.1))
        with pytest.raises(ValueError):
            check_declared_bounds(skimpy, 100.0)

    def test_bound_total(self):
        assert AccelBounds(0.1, 0.2, 0.3).total == pytest.approx(0.6)


class TestTabulated:
    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "profile.csv"
        ts = np.linspace(0.0, 10.0, 21)
        rows = ["t,vx,vy,vz"]
        for t in ts:
            rows.append(f"{t},{2.0 + 0.1 * t},{math.sin(t)},0.0")
        path.write_text("\n".join(rows) + "\n")
        m = load_profile_csv(str(path), AccelBounds(1.0, 1.0, 1.0))
        assert np.allclose(m.velocity(5.0), [2.5, math.sin(5.0), 0.0], atol=1e-3)
        h = 1e-5
        fd = (m.velocity(5.0 + h) - m.velocity(5.0 - h)) / (2 * h)
        assert np.allclose(m.accel(5.0), fd, atol=1e-5)

    def test_header_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0,1,2,3\n1,1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            load_profile_csv(str(path), AccelBounds())

    def test_monotone_time_required(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,vx,vy,vz\n0,1,0,0\n0,1,0,0\n")
        with pytest.raises(ValueError, match="increasing"):
            load_profile_csv(str(path), AccelBounds())
