import json
import math
import os
from dataclasses import replace

import pytest

from enclose3d.cli import main
from enclose3d.errors import ConfigError
from enclose3d.scenario import (
    apply_key,
    bundled_scenario,
    parse_config,
    serialize_config,
)
from enclose3d.simulate import run_scenario
from enclose3d.traceio import TRACE_COLUMNS, read_trace, trace_row, write_trace

D2R = math.pi / 180.0


class TestConfigCodec:
    def test_round_trip(self):
        cfg = bundled_scenario("mt")
        text = serialize_config(cfg)
        again = parse_config(text)
        assert again == cfg
        assert serialize_config(again) == text

    def test_unknown_key_rejected_with_line(self):
        with pytest.raises(ConfigError, match=r"line 2"):
            parse_config("name = x\nbogus.key = 1\n")

    def test_bad_value_reports_key(self):
        with pytest.raises(ConfigError, match="sim.duration"):
            parse_config("sim.duration = fast\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("just words\n")

    def test_comments_and_blanks_ignored(self):
        cfg = parse_config("# comment\n\nname = trial # trailing\n")
        assert cfg.name == "trial"

    def test_apply_key_override(self):
        cfg = bundled_scenario("st")
        out = apply_key(cfg, "guidance.K_1", "0.016")
        assert out.guidance.K_1 == pytest.approx(0.016)
        assert cfg.guidance.K_1 == pytest.approx(0.008)


class TestBundledValues:
    def test_shared_constants(self):
        for name in ("st", "cvt", "mt"):
            cfg = bundled_scenario(name)
            g = cfg.guidance
            assert cfg.pursuer_pos0 == (0.0, 0.0, 15.0)
            assert cfg.target_pos0 == (12.0, 12.0, 15.0)
            assert cfg.pursuer_gamma0 == pytest.approx(10 * D2R)
            assert cfg.pursuer_chi0 == pytest.approx(10 * D2R)
            assert cfg.target_gamma0 == pytest.approx(10 * D2R)
            assert cfg.target_chi0 == pytest.approx(10 * D2R)
            assert (g.a, g.b) == (5.0, 15.0)
            assert (g.K_1, g.K_2) == (0.008, 30.0)
            assert (g.w_1, g.w_2) == (0.5, 0.5)
            assert cfg.dt_guidance == 0.05
            cfg.validate()

    def test_scenario_specific(self):
        st, cvt, mt = (bundled_scenario(n) for n in ("st", "cvt", "mt"))
        assert (st.guidance.r_d, st.guidance.V_d) == (8.0, 5.0)
        assert (cvt.guidance.r_d, cvt.guidance.V_d) == (8.0, 5.0)
        assert (mt.guidance.r_d, mt.guidance.V_d) == (12.0, 8.0)
        assert st.target_kind == "stationary"
        assert cvt.target_kind == "constant-velocity"
        assert cvt.target_speed0 == 2.0
        assert mt.target_kind == "sinusoidal"
        assert (mt.target_vx, mt.target_amp_y, mt.target_amp_z) == (3.5, 1.5, 1.0)
        assert mt.target_freq_y == pytest.approx(4 * math.pi / 100)
        assert mt.target_freq_z == pytest.approx(8 * math.pi / 100)

    def test_initial_relative_geometry(self):
        # positions give r = sqrt(288) ~ 16.97 m at theta 0, psi 45 deg
        r0, theta0, psi0 = bundled_scenario("st").initial_los()
        assert r0 == pytest.approx(math.sqrt(288.0))
        assert theta0 == pytest.approx(0.0, abs=1e-12)
        assert psi0 == pytest.approx(math.pi / 4)


class TestTraceIO:
    def test_empty_trace_header_only(self, tmp_path):
        path = tmp_path / "t.csv"
        write_trace([], str(path))
        assert path.read_text() == TRACE_COLUMNS + "\n"

    def test_single_record_two_lines(self, tmp_path):
        res = run_scenario(replace(bundled_scenario("st"), duration=0.0), validate=False)
        path = tmp_path / "t.csv"
        write_trace(res.records, str(path))
        assert len(path.read_text().splitlines()) == 2

    def test_round_trip_9_digits(self, tmp_path):
        res = run_scenario(replace(bundled_scenario("st"), duration=1.0))
        path = tmp_path / "t.csv"
        write_trace(res.records, str(path))
        cols = read_trace(str(path))
        assert len(cols["t"]) == len(res.records)
        for i in (0, 10, 20):
            rec = res.records[i]
            assert cols["r"][i] == pytest.approx(rec.state.r, rel=1e-8)
            assert cols["U"][i] == pytest.approx(rec.cmd.U, rel=1e-8)
            assert cols["in_barrier"][i] == 1.0

    def test_row_format_significant_digits(self, st_result):
        row = trace_row(st_result.records[0])
        cells = row.split(",")
        assert len(cells) == len(TRACE_COLUMNS.split(","))
        assert cells[-2:] == ["1", "1"]

    def test_header_validated_on_read(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            read_trace(str(path))


class TestCliRun:
    def test_bundled_run_exit_zero(self, tmp_path):
        out = tmp_path / "st.csv"
        metrics = tmp_path / "st.json"
        code = main([
            "run", "--scenario", "st",
            "--out", str(out), "--metrics", str(metrics),
            "--set", "sim.duration=2.0",
        ])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 42  # header + duration/dt + 1
        doc = json.loads(metrics.read_text())
        assert doc["barrier_violations"] == 0.0
        assert doc["a"] == 5.0 and doc["b"] == 15.0

    def test_malformed_config_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense here\n")
        code = main(["run", "--scenario", str(bad), "--out", str(tmp_path / "x.csv")])
        assert code == 1
        assert not (tmp_path / "x.csv").exists()

    def test_eps0_outside_barrier_exit_one(self, tmp_path, capsys):
        code = main([
            "run", "--scenario", "st",
            "--set", "guidance.r_d=40.0",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 1
        err = capsys.readouterr().err
        assert "eps(0)" in err and "invariance" in err
        assert not (tmp_path / "x.csv").exists()

    def test_safety_abort_exit_two_with_partial_outputs(self, tmp_path):
        cfg = tmp_path / "abort.cfg"
        cfg.write_text(
            "name = doomed\n"
            "pursuer.chi0 = 3.14159265\n"
            "pursuer.gamma0 = 0.0\n"
            "pursuer.speed0 = 5.0\n"
            "guidance.K_2 = 3.0\n"
            "guidance.K_1 = 1e-9\n"
            "guidance.a_sat = 0.5\n"
            "target.kind = stationary\n"
            "target.speed0 = 0.0\n"
            "sim.duration = 30.0\n"
        )
        out = tmp_path / "p.csv"
        code = main(["run", "--scenario", str(cfg), "--out", str(out),
                     "--metrics", str(tmp_path / "p.json")])
        assert code == 2
        assert out.exists()
        assert len(out.read_text().splitlines()) > 1


class TestCliSweep:
    def test_grid_three_points(self, tmp_path):
        out = tmp_path / "grid"
        code = main([
            "sweep", "--scenario", "st",
            "--grid", "guidance.K_1=0.004,0.008,0.016",
            "--set", "sim.duration=1.0",
            "--out", str(out),
        ])
        assert code == 0
        files = sorted(os.listdir(out))
        assert files == [
            "run_000_metrics.json", "run_000_trace.csv",
            "run_001_metrics.json", "run_001_trace.csv",
            "run_002_metrics.json", "run_002_trace.csv",
            "summary.json",
        ]
        summary = json.loads((out / "summary.json").read_text())
        assert len(summary["runs"]) == 3
        assert summary["runs"][2]["point"]["guidance.K_1"] == "0.016"

    def test_mc_one_equals_run(self, tmp_path):
        out_dir = tmp_path / "mc"
        code = main([
            "sweep", "--scenario", "st", "--mc", "1", "--seed", "3",
            "--set", "sim.duration=1.0",
            "--out", str(out_dir),
        ])
        assert code == 0
        run_out = tmp_path / "direct.csv"
        main(["run", "--scenario", "st", "--set", "sim.duration=1.0",
              "--out", str(run_out), "--metrics", str(tmp_path / "d.json")])
        assert (out_dir / "mc_000_trace.csv").read_text() == run_out.read_text()

    def test_empty_grid_exit_one(self, tmp_path):
        code = main([
            "sweep", "--scenario", "st", "--grid", "guidance.K_1=",
            "--out", str(tmp_path / "g"),
        ])
        assert code == 1

    def test_grid_and_mc_conflict(self, tmp_path):
        code = main([
            "sweep", "--scenario", "st", "--grid", "guidance.K_1=0.008",
            "--mc", "2", "--out", str(tmp_path / "g"),
        ])
        assert code == 1


class TestCliVerify:
    def test_unknown_suite_lists_names(self, capsys):
        code = main(["verify", "--suite", "nonsense"])
        assert code == 1
        err = capsys.readouterr().err
        for name in ("speed", "barrier", "allocation", "lyapunov", "equivalence", "bounds"):
            assert name in err

    def test_allocation_suite_passes(self, capsys):
        code = main(["verify", "--suite", "allocation"])
        assert code == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "grid oracle" in out


class TestCliShow:
    def test_show_round_trips(self, tmp_path, capsys):
        code = main(["show", "--scenario", "st"])
        assert code == 0
        text = capsys.readouterr().out
        assert parse_config(text) == bundled_scenario("st")
