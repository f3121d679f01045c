"""Command-line interface: exit codes, file outputs, determinism."""

import json
import math

from anyon_otto.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCycleCommand:
    def test_cs_volume_prints_compression_efficiency(self, capsys):
        code, out, _ = run_cli(
            [
                "cycle",
                "--medium",
                "cs-volume",
                "--l1",
                "2",
                "--l2",
                "1",
                "--beta-h",
                "0.01",
                "--beta-l",
                "0.1",
            ],
            capsys,
        )
        assert "efficiency = 0.75" in out
        assert "regime = engine" in out
        assert code == 0

    def test_non_engine_regime_exits_2_but_still_reports(self, capsys):
        code, out, _ = run_cli(
            [
                "cycle",
                "--medium",
                "cs-volume",
                "--l1",
                "2",
                "--l2",
                "1",
                "--beta-h",
                "0.01",
                "--beta-l",
                "0.02",
            ],
            capsys,
        )
        assert code == 2
        assert "efficiency = 0.75" in out
        assert "regime = refrigerator" in out

    def test_identical_settings_degenerate_exit_2(self, capsys):
        code, out, _ = run_cli(
            [
                "cycle",
                "--medium",
                "ring",
                "--alpha-h",
                "0.2",
                "--alpha-l",
                "0.2",
                "--beta-h",
                "1",
                "--beta-l",
                "1",
            ],
            capsys,
        )
        assert code == 2
        assert "degenerate" in out

    def test_missing_beta_h_exits_64_naming_key(self, capsys):
        code, _, err = run_cli(
            ["cycle", "--medium", "ring", "--alpha-h", "0.1", "--alpha-l", "0.3", "--beta-l", "2"],
            capsys,
        )
        assert code == 64
        assert "beta_h" in err

    def test_unknown_flag_exits_64(self, capsys):
        code, _, err = run_cli(["cycle", "--no-such-flag", "1"], capsys)
        assert code == 64

    def test_writes_json_and_csv_with_identical_numbers(self, capsys, tmp_path):
        out_dir = tmp_path / "report"
        code, _, _ = run_cli(
            [
                "cycle",
                "--medium",
                "ring",
                "--alpha-h",
                "0.1",
                "--alpha-l",
                "0.3",
                "--beta-h",
                "0.5",
                "--beta-l",
                "25",
                "--out",
                str(out_dir),
                "--format",
                "csv,json",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads((out_dir / "cycle.json").read_text())
        header, row = (out_dir / "cycle.csv").read_text().strip().split("\n")
        cols = dict(zip(header.split(","), row.split(",")))
        for key in ("efficiency", "q_in", "q_out", "w_out"):
            assert math.isclose(float(cols[key]), payload[key], rel_tol=1e-15)
        assert cols["regime"] == payload["regime"] == "engine"

    def test_closed_form_residual_reported(self, capsys):
        code, out, _ = run_cli(
            [
                "cycle",
                "--medium",
                "cs-coupling",
                "--alpha1",
                "0",
                "--alpha2",
                "1",
                "--beta-h",
                "0.05",
                "--beta-l",
                "0.1",
            ],
            capsys,
        )
        assert code == 2  # refrigerator regime at this point
        line = next(l for l in out.splitlines() if l.startswith("closed_form_residual"))
        assert float(line.split("=")[1]) < 1e-9


class TestConfigFile:
    def test_config_file_drives_run(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# ring engine\n"
            "medium = ring\n"
            "alpha_h = 0.1\n"
            "alpha_l = 0.3\n"
            "beta_h = 0.5\n"
            "beta_l = 25\n"
        )
        code, out, _ = run_cli(["cycle", "--config", str(cfg)], capsys)
        assert code == 0
        assert "regime = engine" in out

    def test_later_flag_wins(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "medium = cs-volume\nl1 = 2\nl2 = 1\nbeta_h = 0.01\nbeta_l = 0.1\n"
        )
        code, out, _ = run_cli(
            ["cycle", "--config", str(cfg), "--l2", "1.5"], capsys
        )
        assert code in (0, 2)
        # 1 - 1.5^2/2^2 = 0.4375
        assert "efficiency = 0.4375" in out

    def test_unknown_config_key_exits_64(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("medium = ring\nbogus_key = 1\n")
        code, _, err = run_cli(["cycle", "--config", str(cfg)], capsys)
        assert code == 64
        assert "bogus_key" in err

    def test_non_numeric_value_exits_64(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "medium = ring\nalpha_h = fast\nalpha_l = 0.3\nbeta_h = 1\nbeta_l = 2\n"
        )
        code, _, err = run_cli(["cycle", "--config", str(cfg)], capsys)
        assert code == 64
        assert "alpha_h" in err


class TestSweepCommand:
    BASE = [
        "sweep",
        "--medium",
        "cs-coupling",
        "--alpha1",
        "0",
        "--beta-h",
        "0.05",
        "--beta-l",
        "0.1",
        "--sweep",
        "alpha2",
        "--grid",
        "0:1:11",
    ]

    def test_eleven_rows_with_degenerate_flag(self, capsys, tmp_path):
        out_dir = tmp_path / "sweep"
        code, _, _ = run_cli(self.BASE + ["--out", str(out_dir)], capsys)
        assert code == 0
        lines = (out_dir / "sweep.csv").read_text().strip().split("\n")
        assert lines[0].startswith("alpha2,")
        assert len(lines) == 12
        first = lines[1].split(",")
        assert first[0] == "0"
        assert "degenerate" in lines[1]

    def test_rerun_is_byte_identical(self, capsys, tmp_path):
        dir_a, dir_b = tmp_path / "a", tmp_path / "b"
        run_cli(self.BASE + ["--out", str(dir_a)], capsys)
        run_cli(self.BASE + ["--out", str(dir_b)], capsys)
        assert (dir_a / "sweep.csv").read_bytes() == (dir_b / "sweep.csv").read_bytes()

    def test_empty_grid_header_only(self, capsys, tmp_path):
        out_dir = tmp_path / "empty"
        args = [a if a != "0:1:11" else "0:1:0" for a in self.BASE]
        code, _, _ = run_cli(args + ["--out", str(out_dir)], capsys)
        assert code == 0
        assert (out_dir / "sweep.csv").read_text() == (
            "alpha2,efficiency,q_in,q_out,w_out,regime,residual,error\n"
        )

    def test_json_matches_csv_numbers(self, capsys, tmp_path):
        out_dir = tmp_path / "match"
        run_cli(self.BASE + ["--out", str(out_dir), "--format", "csv,json"], capsys)
        payload = json.loads((out_dir / "sweep.json").read_text())
        lines = (out_dir / "sweep.csv").read_text().strip().split("\n")[1:]
        assert len(payload["rows"]) == len(lines)
        for row, line in zip(payload["rows"], lines):
            cols = line.split(",")
            assert math.isclose(float(cols[0]), row["value"], rel_tol=1e-15)
            assert math.isclose(float(cols[1]), row["efficiency"], rel_tol=1e-15)
            assert cols[5] == row["regime"]
            assert "wall_time_s" in row

    def test_svg_is_self_contained_and_labeled(self, capsys, tmp_path):
        out_dir = tmp_path / "plot"
        code, _, _ = run_cli(
            self.BASE + ["--out", str(out_dir), "--format", "svg"], capsys
        )
        assert code == 0
        svg = (out_dir / "sweep.svg").read_text()
        assert svg.startswith("<svg")
        assert "alpha2" in svg
        assert "efficiency" in svg
        assert "degenerate" in svg and "refrigerator" in svg
        assert "http://www.w3.org/2000/svg" in svg
        assert "href" not in svg  # no external assets

    def test_missing_out_exits_64(self, capsys):
        code, _, err = run_cli(self.BASE, capsys)
        assert code == 64
        assert "out" in err

    def test_bad_axis_for_medium_exits_64(self, capsys, tmp_path):
        args = [a if a != "alpha2" else "l1" for a in self.BASE]
        code, _, err = run_cli(args + ["--out", str(tmp_path / "x")], capsys)
        assert code == 64
        assert "l1" in err

    def test_per_row_errors_recorded(self, capsys, tmp_path):
        out_dir = tmp_path / "rows"
        args = [
            "sweep",
            "--medium",
            "cs-volume",
            "--l1",
            "1",
            "--alpha",
            "0",
            "--beta-h",
            "0.05",
            "--beta-l",
            "0.2",
            "--sweep",
            "l2",
            "--grid=-0.5:0.6:2",
            "--out",
            str(out_dir),
        ]
        code, _, _ = run_cli(args, capsys)
        assert code == 0
        lines = (out_dir / "sweep.csv").read_text().strip().split("\n")
        assert "DomainError" in lines[1]
        assert lines[2].split(",")[-1] == ""


class TestValidateCommand:
    def test_default_validation_passes(self, capsys):
        code, out, _ = run_cli(["validate"], capsys)
        assert code == 0
        assert "validation passed" in out
        assert out.count("PASS") >= 10

    def test_loose_tolerance_still_passes(self, capsys):
        code, out, _ = run_cli(["validate", "--rel-tol", "1e-3"], capsys)
        assert code == 0

    def test_printed_variant_fails_and_is_named(self, capsys):
        code, out, _ = run_cli(["validate", "--variant", "paper-main-text"], capsys)
        assert code == 3
        assert "FAIL" in out
        assert "paper-main-text" in out
