"""Fixed-step RK4 integration of the driven two-state Schrodinger equation.

The amplitudes evolve under H/hbar = -gamma sigma_z + v(t) sigma_x:

    da1/dt = +i gamma a1 - i v(t) a2
    da2/dt = -i gamma a2 - i v(t) a1

The step is fixed (no adaptivity) for reproducibility; the default
resolves both the pulse width and the free oscillation.  Integration is
split at rectangular pulse edges so the stepper never crosses a
discontinuity, and ideal kicks inside a sequence are applied as exact
matrix factors exp(-i alpha sigma_x) between segments rather than being
discretized.

This module also provides numerically constructed "no time ordering"
evolutions in both frames; they serve as independent cross-checks of the
closed forms in `propagators`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .pulses import (
    PulseSequence,
    PulseShape,
    SystemParams,
    envelope,
    envelope_array,
    integrated_strength,
)
from .su2 import SIGMA_X, SIGMA_Z, NonUnitaryError, PauliVector, norm_defect, unitarity_defect


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float | None = None  # fixed step in ps; None = resolve pulse and Rabi scales
    window_sigma: float = 6.0
    unitarity_tolerance: float = 1e-8

    def resolve_dt(self, pulses: PulseSequence, params: SystemParams, span: float) -> float:
        if self.dt is not None:
            if self.dt <= 0.0:
                raise ValueError("dt must be positive")
            return self.dt
        candidates = [p.tau / 50.0 for p in pulses if p.shape is not PulseShape.IDEAL_KICK]
        if math.isfinite(params.rabi_time):
            candidates.append(params.rabi_time / 2000.0)
        if not candidates:
            candidates.append(span / 1000.0)
        return min(candidates)


@dataclass
class TimeSeries:
    """Sampled trajectory: times (ps) and the amplitude pair at each time."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 2) complex

    @property
    def p1(self) -> np.ndarray:
        return np.abs(self.states[:, 0]) ** 2

    @property
    def p2(self) -> np.ndarray:
        return np.abs(self.states[:, 1]) ** 2

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _rk4_span(
    v,
    v_const: float,
    gamma: float,
    a1: complex,
    a2: complex,
    t0: float,
    t1: float,
    n: int,
):
    """n uniform RK4 steps of the two coupled amplitude equations.

    v is the smooth part of the coupling; v_const carries the rectangular
    contribution, constant within a segment, so that evaluations at the
    segment boundaries never see the wrong side of a discontinuity.
    """
    h = (t1 - t0) / n
    ig = 1j * gamma
    t = t0
    for _ in range(n):
        vt = v(t) + v_const
        vm = v(t + 0.5 * h) + v_const
        ve = v(t + h) + v_const
        k1a = ig * a1 - 1j * vt * a2
        k1b = -ig * a2 - 1j * vt * a1
        x1 = a1 + 0.5 * h * k1a
        x2 = a2 + 0.5 * h * k1b
        k2a = ig * x1 - 1j * vm * x2
        k2b = -ig * x2 - 1j * vm * x1
        x1 = a1 + 0.5 * h * k2a
        x2 = a2 + 0.5 * h * k2b
        k3a = ig * x1 - 1j * vm * x2
        k3b = -ig * x2 - 1j * vm * x1
        x1 = a1 + h * k3a
        x2 = a2 + h * k3b
        k4a = ig * x1 - 1j * ve * x2
        k4b = -ig * x2 - 1j * ve * x1
        a1 = a1 + h / 6.0 * (k1a + 2.0 * (k2a + k3a) + k4a)
        a2 = a2 + h / 6.0 * (k1b + 2.0 * (k2b + k3b) + k4b)
        t += h
    return a1, a2


def _apply_kick(alpha: float, a1: complex, a2: complex):
    c, s = math.cos(alpha), math.sin(alpha)
    return c * a1 - 1j * s * a2, -1j * s * a1 + c * a2


def rk4_evolve(
    pulses: PulseSequence,
    params: SystemParams,
    initial,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
    record_times=None,
) -> TimeSeries:
    """Integrate from t0 to t1, recording the state at the requested times.

    record_times defaults to every internal grid point.  The final norm is
    checked against the configured tolerance; exceeding it raises with
    advice to lower dt.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    cfg = cfg or IntegratorConfig()
    dt = cfg.resolve_dt(pulses, params, max(t1 - t0, 1e-12))
    smooth = [p for p in pulses if p.shape is PulseShape.GAUSSIAN]
    rects = [
        (p.alpha / p.tau, p.center - 0.5 * p.tau, p.center + 0.5 * p.tau)
        for p in pulses
        if p.shape is PulseShape.RECTANGULAR
    ]
    v = envelope(smooth) if smooth else (lambda _t: 0.0)

    # kicks grouped by time; rectangular edges become integration breakpoints
    kicks: dict[float, float] = {}
    for p in pulses:
        if p.shape is PulseShape.IDEAL_KICK and t0 <= p.center <= t1:
            kicks[p.center] = kicks.get(p.center, 0.0) + p.alpha
    edges = {e for _, lo, hi in rects for e in (lo, hi) if t0 < e < t1}

    if record_times is None:
        marks = None
    else:
        marks = np.asarray(record_times, dtype=float)
        if marks.size and (marks[0] < t0 - 1e-12 or marks[-1] > t1 + 1e-12):
            raise ValueError("record times must lie inside [t0, t1]")
        if np.any(np.diff(marks) < 0.0):
            raise ValueError("record times must be non-decreasing")

    stops = sorted(set(kicks) | edges | {t0, t1} | (set() if marks is None else set(marks.tolist())))
    a1, a2 = complex(initial[0]), complex(initial[1])
    out_t: list[float] = []
    out_s: list[tuple[complex, complex]] = []

    def record(time: float) -> None:
        out_t.append(time)
        out_s.append((a1, a2))

    if t0 in kicks:
        a1, a2 = _apply_kick(kicks[t0], a1, a2)
    if marks is None or (marks.size and marks[0] == t0):
        record(t0)
    for lo, hi in zip(stops[:-1], stops[1:]):
        if hi > lo:
            mid = 0.5 * (lo + hi)
            v_const = sum(amp for amp, rlo, rhi in rects if rlo < mid < rhi)
            n = max(1, math.ceil((hi - lo) / dt))
            if marks is None:
                h = (hi - lo) / n
                for k in range(n):
                    a1, a2 = _rk4_span(
                        v, v_const, params.gamma, a1, a2, lo + k * h, lo + (k + 1) * h, 1
                    )
                    if k < n - 1:
                        record(lo + (k + 1) * h)
            else:
                a1, a2 = _rk4_span(v, v_const, params.gamma, a1, a2, lo, hi, n)
        if hi in kicks and hi > t0:
            a1, a2 = _apply_kick(kicks[hi], a1, a2)
        if marks is None or bool(np.any(marks == hi)):
            record(hi)

    series = TimeSeries(times=np.array(out_t), states=np.array(out_s, dtype=complex))
    if norm_defect(np.asarray(initial, dtype=complex)) < 1e-12:
        final_defect = norm_defect(np.array([a1, a2]))
        if final_defect > cfg.unitarity_tolerance:
            raise NonUnitaryError(
                f"norm drifted by {final_defect:.3e} during integration; reduce dt"
            )
    return series


def rk4_propagator(
    pulses: PulseSequence,
    params: SystemParams,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """Propagator over [t0, t1] from evolving both basis states."""
    cfg = cfg or IntegratorConfig()
    cols = []
    for basis in ((1.0, 0.0), (0.0, 1.0)):
        series = rk4_evolve(pulses, params, basis, t0, t1, cfg, record_times=[t1])
        cols.append(series.final_state())
    u = np.column_stack(cols)
    defect = unitarity_defect(u)
    if defect > cfg.unitarity_tolerance:
        raise NonUnitaryError(
            f"integrated propagator unitarity defect {defect:.3e}; reduce dt"
        )
    return u


def no_ordering_schrodinger_numeric(
    pulses: PulseSequence, params: SystemParams, t: float
) -> np.ndarray:
    """Matrix exponential of the time-averaged bare-frame Hamiltonian.

    exp(-i (H0 + vbar sigma_x) t) with vbar the running mean of the
    coupling over [0, t]; evaluated with scipy's expm as an independent
    route to the closed form.
    """
    if t == 0.0:
        return np.eye(2, dtype=complex)
    alpha_running = integrated_strength(pulses, 0.0, t)
    h_mean = -params.gamma * SIGMA_Z + (alpha_running / t) * SIGMA_X
    return expm(-1j * h_mean * t)


def interaction_integral(
    pulses: PulseSequence,
    params: SystemParams,
    t: float,
    cfg: IntegratorConfig | None = None,
    tol: float = 1e-10,
) -> PauliVector:
    """int_0^t of the rotating-frame coupling, as a Pauli vector.

    Finite pulses are integrated window by window with a trapezoid rule
    refined by Richardson extrapolation to `tol`; kicks contribute exact
    jumps alpha e^{2 i gamma t_kick}.
    """
    cfg = cfg or IntegratorConfig()
    g = params.gamma
    total = 0.0 + 0.0j
    for p in pulses:
        if p.shape is PulseShape.IDEAL_KICK:
            if 0.0 <= p.center <= t:
                total += p.alpha * complex(
                    math.cos(2.0 * g * p.center), math.sin(2.0 * g * p.center)
                )
            continue
        lo, hi = p.window(cfg.window_sigma)
        lo, hi = max(lo, 0.0), min(hi, t)
        if hi <= lo:
            continue
        total += _refined_trapezoid(
            lambda x, pp=p: envelope_array([pp], x) * np.exp(2j * g * x), lo, hi, tol
        )
    return PauliVector(cx=total.real, cy=total.imag)


def _refined_trapezoid(f, lo: float, hi: float, tol: float) -> complex:
    n = 64
    x = np.linspace(lo, hi, n + 1)
    coarse = complex(np.trapezoid(f(x), x))
    best = None
    while n <= 2**20:
        n *= 2
        x = np.linspace(lo, hi, n + 1)
        fine = complex(np.trapezoid(f(x), x))
        refined = (4.0 * fine - coarse) / 3.0
        if best is not None and abs(refined - best) <= tol * max(1.0, abs(refined)):
            return refined
        coarse, best = fine, refined
    return best


def no_ordering_interaction_numeric(
    pulses: PulseSequence,
    params: SystemParams,
    t: float,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """exp(-i int_0^t v_I dt'), exponentiated through the Pauli identity."""
    return interaction_integral(pulses, params, t, cfg).exp_minus_i()


def interaction_integral_series(
    pulses: PulseSequence,
    params: SystemParams,
    times: np.ndarray,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """Cumulative int_0^t v(t') e^{2 i gamma t'} dt' at each requested time.

    Trapezoid on a fine grid that includes the requested times; meant for
    emitting whole no-ordering columns cheaply.  Kicks enter as steps.
    """
    cfg = cfg or IntegratorConfig()
    times = np.asarray(times, dtype=float)
    t_max = float(times[-1]) if times.size else 0.0
    smooth = [p for p in pulses if p.shape is not PulseShape.IDEAL_KICK]
    dt = cfg.resolve_dt(pulses, params, max(t_max, 1e-12)) / 2.0
    grid = np.unique(np.concatenate([np.arange(0.0, t_max, dt), times, [0.0]]))
    if smooth:
        vals = envelope_array(smooth, grid) * np.exp(2j * params.gamma * grid)
        increments = 0.5 * (vals[1:] + vals[:-1]) * np.diff(grid)
        cumulative = np.concatenate([[0.0 + 0.0j], np.cumsum(increments)])
    else:
        cumulative = np.zeros_like(grid, dtype=complex)
    idx = np.searchsorted(grid, times)
    out = cumulative[idx]
    for p in pulses:
        if p.shape is PulseShape.IDEAL_KICK:
            jump = p.alpha * np.exp(2j * params.gamma * p.center)
            out = out + np.where(times >= p.center, jump, 0.0)
    return out


def convergence_check(
    pulses: PulseSequence,
    params: SystemParams,
    t: float,
    cfg: IntegratorConfig | None = None,
) -> float:
    """Max propagator element change when halving dt; certifies a dt choice.

    Deliberately coarse steps report a large defect instead of raising, so
    the check can be used to probe bad configurations.
    """
    cfg = cfg or IntegratorConfig()
    dt = cfg.resolve_dt(pulses, params, max(t, 1e-12))
    u_coarse = rk4_propagator(pulses, params, 0.0, t, IntegratorConfig(
        dt=dt, window_sigma=cfg.window_sigma, unitarity_tolerance=math.inf))
    u_fine = rk4_propagator(pulses, params, 0.0, t, IntegratorConfig(
        dt=dt / 2.0, window_sigma=cfg.window_sigma, unitarity_tolerance=math.inf))
    return float(np.max(np.abs(u_coarse - u_fine)))
