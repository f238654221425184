import math

import pytest

from kickedqubit import cli
from kickedqubit.pulses import PulseShape


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_angle_fractions(self):
        assert cli.parse_angle("pi/2") == pytest.approx(math.pi / 2)
        assert cli.parse_angle("-3pi/8") == pytest.approx(-3 * math.pi / 8)
        assert cli.parse_angle("2pi") == pytest.approx(2 * math.pi)
        assert cli.parse_angle("0.75") == 0.75
        with pytest.raises(Exception):
            cli.parse_angle("two pi")

    def test_pulse_grammar(self):
        p = cli.parse_pulse("gaussian:alpha=pi/2,tau=10,center=150")
        assert p.shape is PulseShape.GAUSSIAN
        assert p.alpha == pytest.approx(math.pi / 2)
        p = cli.parse_pulse("kick:alpha=-pi/4,center=5")
        assert p.shape is PulseShape.IDEAL_KICK
        p = cli.parse_pulse("rect:alpha=0.5,tau=2,center=3")
        assert p.shape is PulseShape.RECTANGULAR
        with pytest.raises(Exception):
            cli.parse_pulse("gaussian:alpha=1")  # missing tau/center


class TestPropagate:
    ARGS = (
        "propagate", "--preset", "hydrogen-2s2p",
        "--pulse", "gaussian:alpha=pi/2,tau=10,center=150",
        "--t1", "300", "--samples", "13",
    )

    def test_exit_and_columns(self, capsys):
        code, out, err = run_cli(capsys, *self.ARGS)
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        header = lines[0].split(",")
        assert header == [
            "t_ps", "P1", "P2", "P2_noTO_schrodinger", "P2_noTO_interaction",
            "ReU11", "ImU11", "ReU12", "ImU12",
        ]
        assert len(lines) == 14
        last = [float(x) for x in lines[-1].split(",")]
        assert last[0] == 300.0
        assert last[2] == pytest.approx(0.9976840741525, abs=1e-6)
        assert last[1] + last[2] == pytest.approx(1.0, abs=1e-8)

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run_cli(capsys, *self.ARGS)
        _, out2, _ = run_cli(capsys, *self.ARGS)
        assert out1 == out2

    def test_file_output(self, tmp_path, capsys):
        target = tmp_path / "run.csv"
        code, out, _ = run_cli(capsys, *self.ARGS, "--out", str(target))
        assert code == 0
        assert out == ""
        text = target.read_bytes()
        assert b"\r" not in text
        assert text.decode().startswith("# system preset=hydrogen-2s2p")

    def test_degenerate_kick_steps_population(self, capsys):
        code, out, _ = run_cli(
            capsys, "propagate", "--gamma", "0",
            "--pulse", "kick:alpha=pi/2,center=5", "--t1", "10", "--samples", "11",
        )
        assert code == 0
        data_lines = [l for l in out.splitlines() if not l.startswith("#")][1:]
        rows = [list(map(float, l.split(","))) for l in data_lines]
        p2 = {row[0]: row[2] for row in rows}
        assert p2[4.0] == pytest.approx(0.0, abs=1e-12)
        assert p2[6.0] == pytest.approx(1.0, abs=1e-12)

    def test_zero_strength_never_transfers(self, capsys):
        code, out, _ = run_cli(
            capsys, "propagate", "--preset", "unit",
            "--pulse", "gaussian:alpha=0,tau=1,center=3", "--t1", "6", "--samples", "7",
        )
        assert code == 0
        rows = [l for l in out.splitlines() if not l.startswith("#")][1:]
        assert all(float(r.split(",")[2]) < 1e-14 for r in rows)

    def test_usage_error_is_exit_1(self, capsys):
        code, _, err = run_cli(capsys, "propagate", "--t1", "300")
        assert code == 1

    def test_negative_time_is_exit_1(self, capsys):
        code, _, err = run_cli(
            capsys, "propagate", "--pulse", "kick:alpha=1,center=1",
            "--t0", "-5", "--t1", "3",
        )
        assert code == 1
        assert "non-negative" in err

    def test_bad_pulse_spec_is_exit_1(self, capsys):
        code, _, _ = run_cli(capsys, "propagate", "--pulse", "blob:alpha=1", "--t1", "3")
        assert code == 1

    def test_numerical_failure_is_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "propagate", "--preset", "hydrogen-2s2p",
            "--pulse", "gaussian:alpha=pi/2,tau=10,center=150",
            "--t1", "300", "--dt", "9", "--samples", "4",
        )
        assert code == 2
        assert "numerical failure" in err

    def test_lifetime_warning(self, capsys):
        code, _, err = run_cli(
            capsys, "propagate", "--preset", "hydrogen-2s2p",
            "--pulse", "kick:alpha=pi/2,center=100", "--t1", "1700", "--samples", "5",
        )
        assert code == 0
        assert "lifetime" in err

    def test_narrow_tau_warning(self, capsys):
        code, _, err = run_cli(
            capsys, "propagate", "--preset", "unit",
            "--pulse", "gaussian:alpha=1,tau=0.0005,center=0.01", "--t1", "0.02",
            "--samples", "4", "--dt", "0.00001",
        )
        assert code == 0
        assert "narrow" in err


class TestFigure:
    def test_fig1_writes_csv(self, tmp_path, capsys):
        code, _, _ = run_cli(
            capsys, "figure", "fig1", "--set", "tau=10", "--set", "n_points=11",
            "--outdir", str(tmp_path),
        )
        assert code == 0
        text = (tmp_path / "fig1.csv").read_text()
        assert text.startswith("# scenario fig1")
        last = text.strip().splitlines()[-1].split(",")
        assert float(last[0]) == 300.0
        assert float(last[1]) == pytest.approx(0.99768, abs=1e-4)

    def test_unknown_figure_is_exit_1(self, capsys):
        code, _, _ = run_cli(capsys, "figure", "fig9")
        assert code == 1

    def test_long_span_scenario_warns(self, capsys):
        code, _, err = run_cli(
            capsys, "figure", "fig5_left", "--set", "alphas=pi/4",
            "--set", "n_points=3", "--set", "ts_max=1800", "--out", "-",
        )
        assert code == 0
        assert "lifetime" in err

    def test_figure_determinism(self, tmp_path, capsys):
        args = ("figure", "fig5_left", "--set", "alphas=pi/4", "--set", "n_points=5",
                "--set", "ts_max=972")
        code, out1, _ = run_cli(capsys, *args, "--out", "-")
        code, out2, _ = run_cli(capsys, *args, "--out", "-")
        assert code == 0
        assert out1 == out2
        assert "P2_noTO_S" in out1.splitlines()[-6]


class TestFloquet:
    def test_single_point(self, capsys):
        code, out, _ = run_cli(
            capsys, "floquet", "--alpha", "pi/3", "--gamma", "1",
            "--period", str(math.pi / 4),
        )
        assert code == 0
        row = [float(x) for x in out.strip().splitlines()[-1].split(",")]
        assert row[1] == pytest.approx(1.2094292028881888, abs=1e-9)

    def test_half_pi_kick_sweep_is_flat(self, capsys):
        code, out, _ = run_cli(
            capsys, "floquet", "--alpha", "pi/2", "--gamma", "1",
            "--sweep", "0.1", "3.0", "7",
        )
        assert code == 0
        rows = [l for l in out.strip().splitlines() if not (l.startswith("#") or l.startswith("gamma_T"))]
        chis = [float(r.split(",")[1]) for r in rows]
        assert all(abs(c - math.pi / 2) < 1e-12 for c in chis)

    def test_alpha_zero_follows_free_phase(self, capsys):
        code, out, _ = run_cli(
            capsys, "floquet", "--alpha", "0", "--gamma", "1", "--sweep", "0.2", "2.8", "5",
        )
        rows = [l for l in out.strip().splitlines() if "," in l and not l.startswith(("#", "gamma_T"))]
        for r in rows:
            gt, chi = (float(x) for x in r.split(",")[:2])
            assert chi == pytest.approx(gt, abs=1e-12)

    def test_missing_period_is_exit_1(self, capsys):
        code, _, _ = run_cli(capsys, "floquet", "--alpha", "1")
        assert code == 1


class TestValidate:
    def test_quick_passes_within_budget(self, capsys):
        import time

        start = time.perf_counter()
        code, out, _ = run_cli(capsys, "validate", "--quick", "--seed", "0")
        elapsed = time.perf_counter() - start
        assert code == 0
        assert "PASS" in out
        assert "FAIL" not in out
        assert elapsed < 5.0

    def test_fault_injection_fails(self, capsys, monkeypatch):
        import kickedqubit.propagators as prop

        good = prop.no_ordering_interaction_single

        def tampered(alpha, beta, gamma_tk):
            u = good(alpha, beta, gamma_tk)
            return u.conj()  # flips the off-diagonal phase sign

        monkeypatch.setattr(
            "kickedqubit.validation.prop.no_ordering_interaction_single", tampered
        )
        code, out, _ = run_cli(capsys, "validate", "--quick")
        assert code == 2
        assert "FAIL" in out
