import math

import numpy as np
import pytest

from kickedqubit import propagators as prop
from kickedqubit.analysis import SweepSeries, error_scaling_fit
from kickedqubit.evolve import (
    IntegratorConfig,
    convergence_check,
    interaction_integral,
    interaction_integral_series,
    no_ordering_interaction_numeric,
    no_ordering_schrodinger_numeric,
    rk4_evolve,
    rk4_propagator,
)
from kickedqubit.pulses import (
    DoubleKickParams,
    SystemParams,
    gaussian,
    hydrogen_2s2p,
    ideal_kick,
    rectangular,
    unit_system,
)
from kickedqubit.su2 import NonUnitaryError, max_abs_diff, norm_defect, unitarity_defect

HYDROGEN = hydrogen_2s2p()
FIG1_PULSE = [gaussian(math.pi / 2, 10.0, 150.0)]


class TestRk4Evolve:
    def test_free_evolution_phases(self):
        params = unit_system()
        series = rk4_evolve([], params, (1.0, 0.0), 0.0, 3.0, IntegratorConfig(dt=0.002))
        assert np.allclose(series.p1, 1.0, atol=1e-12)
        # a1(t) = e^{i gamma t}
        expected = np.exp(1j * series.times)
        assert np.max(np.abs(series.states[:, 0] - expected)) < 1e-10

    def test_single_pulse_transfer_regression(self):
        # frozen from a dt-halving study (change 6e-14 between dt=0.05, 0.025)
        series = rk4_evolve(FIG1_PULSE, HYDROGEN, (1.0, 0.0), 0.0, 300.0,
                            record_times=[300.0])
        assert series.p2[-1] == pytest.approx(0.9976840741525, abs=1e-9)

    def test_wide_pulse_transfer_regression(self):
        series = rk4_evolve([gaussian(math.pi / 2, 100.0, 150.0)], HYDROGEN, (1.0, 0.0),
                            0.0, 300.0, record_times=[300.0])
        assert series.p2[-1] == pytest.approx(0.8196049007317, abs=1e-9)

    def test_norm_conserved(self):
        series = rk4_evolve(FIG1_PULSE, HYDROGEN, (1.0, 0.0), 0.0, 300.0)
        assert norm_defect(series.states[-1]) < 1e-8

    def test_record_times_subset(self):
        marks = np.array([0.0, 120.0, 150.0, 300.0])
        series = rk4_evolve(FIG1_PULSE, HYDROGEN, (1.0, 0.0), 0.0, 300.0, record_times=marks)
        assert np.array_equal(series.times, marks)
        assert len(series.states) == 4

    def test_coarse_step_raises(self):
        with pytest.raises(NonUnitaryError):
            rk4_evolve(FIG1_PULSE, HYDROGEN, (1.0, 0.0), 0.0, 300.0,
                       IntegratorConfig(dt=10.0))

    def test_kick_inside_sequence_is_exact_factor(self):
        params = unit_system()
        series = rk4_evolve([ideal_kick(0.8, 1.0)], params, (1.0, 0.0), 0.0, 2.0,
                            IntegratorConfig(dt=0.002), record_times=[2.0])
        expected = prop.kicked_propagator(0.8, 1.0, 1.0, 2.0) @ np.array([1.0, 0.0])
        assert np.max(np.abs(series.final_state() - expected)) < 1e-10

    def test_kick_and_gaussian_mixture(self):
        params = unit_system()
        mix = [gaussian(0.5, 0.2, 0.8), ideal_kick(-0.3, 1.5)]
        u = rk4_propagator(mix, params, 0.0, 2.5, IntegratorConfig(dt=0.001))
        # independent route: split the evolution at the kick
        u_before = rk4_propagator([mix[0]], params, 0.0, 1.5, IntegratorConfig(dt=0.001))
        u_after = rk4_propagator([mix[0]], params, 1.5, 2.5, IntegratorConfig(dt=0.001))
        kick = prop.degenerate_propagator(-0.3)
        assert max_abs_diff(u, u_after @ kick @ u_before) < 1e-10


class TestRk4Propagator:
    def test_free_matches_closed_form(self):
        params = unit_system()
        u = rk4_propagator([], params, 0.0, 2.0, IntegratorConfig(dt=0.002))
        assert max_abs_diff(u, prop.free_propagator(params, 2.0)) < 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(4)
        state = rng.normal(size=2) + 1j * rng.normal(size=2)
        state /= np.linalg.norm(state)
        u = rk4_propagator(FIG1_PULSE, HYDROGEN, 0.0, 300.0)
        direct = rk4_evolve(FIG1_PULSE, HYDROGEN, state, 0.0, 300.0,
                            record_times=[300.0]).final_state()
        assert np.max(np.abs(u @ state - direct)) < 1e-10

    def test_rectangular_pulse_vs_exact(self):
        gamma, alpha, beta = 0.9, 0.7, 0.4
        tau = beta / gamma
        u = rk4_propagator([rectangular(alpha, tau, 1.5 * tau)], SystemParams(gamma),
                           0.0, 4.0 * tau, IntegratorConfig(dt=tau / 1e4))
        exact = prop.rectangular_propagator(alpha, beta, gamma, 1.5 * tau, 4.0 * tau)
        assert max_abs_diff(u, exact) < 1e-8

    def test_narrow_gaussian_error_is_order_beta(self):
        # element error against the kick limit shrinks linearly with tau
        params = HYDROGEN
        target = prop.kicked_propagator(math.pi / 2, params.gamma, 150.0, 300.0)
        errs, taus = [], (2.0, 1.0, 0.5)
        for tau in taus:
            u = rk4_propagator([gaussian(math.pi / 2, tau, 150.0)], params, 0.0, 300.0)
            errs.append(max_abs_diff(u, target))
        fit = error_scaling_fit(SweepSeries("tau", np.array(taus), {"err": np.array(errs)}))
        assert fit.slope == pytest.approx(1.0, abs=0.1)

    def test_unitary_to_tolerance(self):
        u = rk4_propagator(FIG1_PULSE, HYDROGEN, 0.0, 300.0)
        assert unitarity_defect(u) < 1e-8


class TestNoOrderingNumeric:
    def test_schrodinger_matches_closed_form(self):
        t = 300.0
        u_num = no_ordering_schrodinger_numeric(FIG1_PULSE, HYDROGEN, t)
        alpha_running = math.pi / 2  # pulse complete well before t
        u_closed = prop.no_ordering_schrodinger(alpha_running, HYDROGEN.gamma * t)
        assert max_abs_diff(u_num, u_closed) < 1e-12

    def test_schrodinger_kick_antikick_never_transfers(self):
        params = unit_system()
        kicks = [ideal_kick(1.1, 1.0), ideal_kick(-1.1, 2.5)]
        u0 = no_ordering_schrodinger_numeric(kicks, params, 4.0)
        assert abs(u0[1, 0]) == 0.0

    def test_schrodinger_transfer_dies_at_large_times(self):
        pulse = [gaussian(math.pi / 2, 5.0, 100.0)]
        p2s = []
        for tf in (300.0, 1000.0, 3000.0):
            u0 = no_ordering_schrodinger_numeric(pulse, HYDROGEN, tf)
            p2s.append(abs(u0[1, 0]) ** 2)
        assert p2s[0] > p2s[1] > p2s[2]
        assert p2s[2] < 0.03

    def test_interaction_single_matches_closed_form(self):
        params = HYDROGEN
        tau = 10.0
        beta = params.gamma * tau
        pulse = [gaussian(1.2, tau, 150.0)]
        u_num = no_ordering_interaction_numeric(pulse, params, 400.0)
        u_closed = prop.no_ordering_interaction_single(1.2, beta, params.gamma * 150.0)
        assert max_abs_diff(u_num, u_closed) < 1e-8

    def test_interaction_degenerate_equals_schrodinger(self):
        params = SystemParams(0.0)
        pulse = [gaussian(0.9, 2.0, 20.0)]
        u_i = no_ordering_interaction_numeric(pulse, params, 50.0)
        u_s = no_ordering_schrodinger_numeric(pulse, params, 50.0)
        assert max_abs_diff(u_i, u_s) < 1e-10

    def test_interaction_double_matches_closed_form(self):
        params = HYDROGEN
        tau = 0.03 / params.gamma  # beta = 0.03
        dk = DoubleKickParams(120.0, 420.0)
        pair = [gaussian(0.9, tau, dk.t1), gaussian(-0.9, tau, dk.t2)]
        u_num = no_ordering_interaction_numeric(pair, params, 600.0)
        u_closed = prop.no_ordering_interaction_double(0.9, 0.03, params.gamma, dk)
        assert max_abs_diff(u_num, u_closed) < 1e-6

    def test_interaction_kick_jumps(self):
        params = unit_system()
        kicks = [ideal_kick(0.7, 1.0), ideal_kick(-0.7, 2.0)]
        pv = interaction_integral(kicks, params, 3.0)
        expected = 0.7 * (np.exp(2j * 1.0) - np.exp(2j * 2.0))
        assert complex(pv.cx, pv.cy) == pytest.approx(expected, abs=1e-14)

    def test_integral_series_matches_single_time_quadrature(self):
        params = HYDROGEN
        pulses = [gaussian(1.0, 10.0, 100.0), gaussian(-1.0, 10.0, 300.0)]
        times = np.array([50.0, 150.0, 350.0, 500.0])
        series_vals = interaction_integral_series(pulses, params, times)
        for t, val in zip(times, series_vals):
            pv = interaction_integral(pulses, params, float(t))
            assert abs(complex(pv.cx, pv.cy) - val) < 1e-7


class TestConvergence:
    def test_free_system_is_exact(self):
        assert convergence_check([], HYDROGEN, 2.0) < 1e-14

    def test_single_pulse_default_dt(self):
        # frozen halving-study value at the default step: 5.4e-10
        val = convergence_check(FIG1_PULSE, HYDROGEN, 300.0)
        assert val < 1e-9

    def test_coarse_dt_reports_large_defect(self):
        val = convergence_check([gaussian(0.5, 10.0, 150.0)], HYDROGEN, 300.0,
                                IntegratorConfig(dt=10.0))
        assert val > 1e-6

    def test_global_error_is_fourth_order(self):
        ref = rk4_propagator(FIG1_PULSE, HYDROGEN, 0.0, 300.0, IntegratorConfig(dt=0.0125))
        dts = np.array([1.6, 0.8, 0.4, 0.2])
        # the coarse ladder points legitimately drift past the default norm gate
        errs = np.array([
            max_abs_diff(
                rk4_propagator(FIG1_PULSE, HYDROGEN, 0.0, 300.0,
                               IntegratorConfig(dt=float(dt), unitarity_tolerance=1e-4)),
                ref,
            )
            for dt in dts
        ])
        fit = error_scaling_fit(SweepSeries("dt", dts, {"err": errs}))
        assert fit.slope == pytest.approx(4.0, abs=0.2)


def test_default_dt_rule():
    cfg = IntegratorConfig()
    assert cfg.resolve_dt(FIG1_PULSE, HYDROGEN, 300.0) == pytest.approx(10.0 / 50.0)
    assert cfg.resolve_dt([gaussian(1.0, 1000.0, 0.0)], HYDROGEN, 300.0) == pytest.approx(972.0 / 2000.0)
    assert cfg.resolve_dt([], SystemParams(0.0), 300.0) == pytest.approx(0.3)
