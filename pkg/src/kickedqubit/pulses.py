"""Pulse shapes, pulse sequences, and two-level system parameters.

Units: hbar = 1 and time in picoseconds throughout.  The level splitting
enters only through gamma = Delta_E / (2 hbar) in rad/ps; the period of
free oscillation between the two states is the Rabi time T = pi / gamma.
Couplings are handled as rates v(t) = V(t)/hbar in rad/ps, so the
Hamiltonian reads H/hbar = -gamma sigma_z + v(t) sigma_x.

Shapes, all with signed integrated strength alpha = int v dt:

* gaussian:     v(t) = alpha / (sqrt(pi) tau) * exp(-((t - T_k)/tau)^2)
* rectangular:  v(t) = alpha / tau on [T_k - tau/2, T_k + tau/2]
* ideal kick:   v(t) = alpha * delta(t - T_k), the tau -> 0 limit

Ideal kicks cannot be evaluated pointwise; sequence evaluation raises for
them and the closed-form kick propagators should be used instead.
Overlapping pulses in a sequence add linearly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .su2 import PauliVector

HBAR_EV_PS = 6.582119569e-4  # hbar in eV * ps, for Delta_E conversions

#: Gaussian support is truncated at this many widths for integration windows;
#: the neglected tail weight is erfc(6) ~ 2e-17 relative.
GAUSSIAN_WINDOW = 6.0


class PulseEvaluationError(ValueError):
    """Pointwise evaluation requested for a delta-function pulse."""


class PulseShape(Enum):
    IDEAL_KICK = "kick"
    GAUSSIAN = "gaussian"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class Pulse:
    """One pulse: shape, signed strength alpha (rad), width tau (ps), center (ps)."""

    shape: PulseShape
    alpha: float
    tau: float
    center: float

    def __post_init__(self):
        if self.shape is not PulseShape.IDEAL_KICK and not self.tau > 0.0:
            raise ValueError("finite pulse shapes need tau > 0")
        for name in ("alpha", "tau", "center"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def window(self, sigma: float = GAUSSIAN_WINDOW) -> tuple[float, float]:
        """Interval outside which the pulse is negligible (empty for a kick)."""
        if self.shape is PulseShape.GAUSSIAN:
            return (self.center - sigma * self.tau, self.center + sigma * self.tau)
        if self.shape is PulseShape.RECTANGULAR:
            return (self.center - 0.5 * self.tau, self.center + 0.5 * self.tau)
        return (self.center, self.center)


def gaussian(alpha: float, tau: float, center: float) -> Pulse:
    return Pulse(PulseShape.GAUSSIAN, alpha, tau, center)


def rectangular(alpha: float, tau: float, center: float) -> Pulse:
    return Pulse(PulseShape.RECTANGULAR, alpha, tau, center)


def ideal_kick(alpha: float, center: float) -> Pulse:
    return Pulse(PulseShape.IDEAL_KICK, alpha, 0.0, center)


PulseSequence = Sequence[Pulse]


@dataclass(frozen=True)
class SystemParams:
    """Two-level system with splitting gamma = Delta_E / (2 hbar) in rad/ps."""

    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise ValueError("gamma must be finite and >= 0")

    @property
    def rabi_time(self) -> float:
        """Free oscillation period pi / gamma (inf for a degenerate system)."""
        return math.pi / self.gamma if self.gamma > 0.0 else math.inf

    @property
    def delta_e_ev(self) -> float:
        return 2.0 * self.gamma * HBAR_EV_PS

    @classmethod
    def from_rabi_time(cls, rabi_time_ps: float) -> "SystemParams":
        return cls(gamma=math.pi / rabi_time_ps)

    @classmethod
    def from_delta_e_ev(cls, delta_e_ev: float) -> "SystemParams":
        return cls(gamma=delta_e_ev / (2.0 * HBAR_EV_PS))


def hydrogen_2s2p() -> SystemParams:
    """Hydrogen 2s-2p system split by the Lamb shift; Rabi time 972 ps."""
    return SystemParams.from_rabi_time(972.0)


def unit_system() -> SystemParams:
    """Dimensionless testing system with gamma = 1 rad per time unit."""
    return SystemParams(gamma=1.0)


@dataclass(frozen=True)
class PhaseAngles:
    """The three phase angles of a pulse problem.

    alpha is the integrated pulse strength, beta = gamma * tau the
    splitting phase accumulated over one pulse width, and gamma_t the free
    phase accumulated up to the measurement time.
    """

    alpha: float
    beta: float
    gamma_t: float

    @property
    def xi(self) -> float:
        """sqrt(alpha^2 + (gamma t)^2), the rotation angle without time ordering."""
        return math.hypot(self.alpha, self.gamma_t)

    @property
    def alpha_prime(self) -> float:
        """sqrt(alpha^2 + beta^2), the in-pulse rotation angle of a rectangular pulse."""
        return math.hypot(self.alpha, self.beta)


@dataclass(frozen=True)
class DoubleKickParams:
    """Timing of a two-kick sequence: kicks at t1 and t2 >= t1."""

    t1: float
    t2: float

    def __post_init__(self):
        if self.t2 < self.t1:
            raise ValueError("t2 must be >= t1")

    @property
    def separation(self) -> float:
        return self.t2 - self.t1

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.t1 + self.t2)

    def zeta(self, gamma: float, t: float) -> float:
        """Residual free phase gamma * (t - separation)."""
        return gamma * (t - self.separation)


def phase_angles(params: SystemParams, pulse: Pulse, t: float) -> PhaseAngles:
    return PhaseAngles(
        alpha=pulse.alpha, beta=params.gamma * pulse.tau, gamma_t=params.gamma * t
    )


def _require_no_kicks(pulses: PulseSequence) -> None:
    if any(p.shape is PulseShape.IDEAL_KICK for p in pulses):
        raise PulseEvaluationError(
            "delta-function kicks have no pointwise value; "
            "use the closed-form kick propagators instead"
        )


def v_of_t(pulses: PulseSequence, t: float) -> float:
    """Instantaneous coupling rate v(t) in rad/ps, summed over pulses."""
    _require_no_kicks(pulses)
    return envelope(pulses)(t)


def envelope(pulses: PulseSequence) -> Callable[[float], float]:
    """Fast scalar v(t) closure for the integrator (kicks rejected)."""
    _require_no_kicks(pulses)
    gauss = [
        (p.alpha / (math.sqrt(math.pi) * p.tau), p.center, 1.0 / p.tau)
        for p in pulses
        if p.shape is PulseShape.GAUSSIAN
    ]
    rect = [
        (p.alpha / p.tau, p.center - 0.5 * p.tau, p.center + 0.5 * p.tau)
        for p in pulses
        if p.shape is PulseShape.RECTANGULAR
    ]
    exp = math.exp

    def v(t: float) -> float:
        total = 0.0
        for amp, c, inv_tau in gauss:
            u = (t - c) * inv_tau
            total += amp * exp(-u * u)
        for amp, lo, hi in rect:
            if lo <= t <= hi:
                total += amp
        return total

    return v


def envelope_array(pulses: PulseSequence, times: np.ndarray) -> np.ndarray:
    """Vectorized v(t) over an array of times."""
    _require_no_kicks(pulses)
    t = np.asarray(times, dtype=float)
    total = np.zeros_like(t)
    for p in pulses:
        if p.shape is PulseShape.GAUSSIAN:
            u = (t - p.center) / p.tau
            total += p.alpha / (math.sqrt(math.pi) * p.tau) * np.exp(-u * u)
        else:
            lo, hi = p.center - 0.5 * p.tau, p.center + 0.5 * p.tau
            total += np.where((t >= lo) & (t <= hi), p.alpha / p.tau, 0.0)
    return total


def integrated_strength(pulses: PulseSequence, t0: float, t1: float) -> float:
    """int_{t0}^{t1} v(t) dt in rad, analytic for every shape.

    Gaussians use the error function, rectangles their overlap with
    [t0, t1], and kicks contribute their full alpha when the kick time
    lies inside the window (boundaries inclusive).
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    total = 0.0
    for p in pulses:
        if p.shape is PulseShape.GAUSSIAN:
            total += (
                0.5
                * p.alpha
                * (math.erf((t1 - p.center) / p.tau) - math.erf((t0 - p.center) / p.tau))
            )
        elif p.shape is PulseShape.RECTANGULAR:
            lo, hi = p.center - 0.5 * p.tau, p.center + 0.5 * p.tau
            overlap = max(0.0, min(t1, hi) - max(t0, lo))
            total += p.alpha / p.tau * overlap
        else:
            if t0 <= p.center <= t1:
                total += p.alpha
    return total


def v_interaction_picture(
    params: SystemParams, pulses: PulseSequence, t: float
) -> PauliVector:
    """Coupling rotated into the frame of the free evolution.

    Conjugating v(t) sigma_x by exp(i H0 t / hbar) with H0 = -gamma hbar
    sigma_z gives v(t) [sigma_x cos(2 gamma t) + sigma_y sin(2 gamma t)].
    """
    v = v_of_t(pulses, t)
    phase = 2.0 * params.gamma * t
    return PauliVector(cx=v * math.cos(phase), cy=v * math.sin(phase))


def averaged_interaction_single(
    params: SystemParams, pulse: Pulse, t: float
) -> PauliVector:
    """Time integral of the rotated coupling for one completed pulse.

    For a gaussian of strength alpha at T_k the integral evaluates in
    closed form to alpha exp(-beta^2) [sigma_x cos(2 gamma T_k) +
    sigma_y sin(2 gamma T_k)] with beta = gamma tau; a kick is the beta=0
    case.  Valid once the pulse is fully contained in [0, t].
    """
    if pulse.shape is PulseShape.GAUSSIAN:
        lo, hi = pulse.window()
        if lo < 0.0 or hi > t:
            raise ValueError("pulse must be fully contained in [0, t]")
        beta = params.gamma * pulse.tau
    elif pulse.shape is PulseShape.IDEAL_KICK:
        if not 0.0 <= pulse.center <= t:
            raise ValueError("kick must lie inside [0, t]")
        beta = 0.0
    else:
        raise ValueError("closed form available for gaussian and kick shapes only")
    mag = pulse.alpha * math.exp(-beta * beta)
    phase = 2.0 * params.gamma * pulse.center
    return PauliVector(cx=mag * math.cos(phase), cy=mag * math.sin(phase))


def averaged_interaction_double(
    params: SystemParams, dk: DoubleKickParams, alpha: float, beta: float
) -> PauliVector:
    """Integrated rotated coupling for an equal-and-opposite pulse pair.

    2 alpha exp(-beta^2) sin(gamma T_s) [sigma_x sin(2 gamma Tbar)
    - sigma_y cos(2 gamma Tbar)]; independent of the measurement time once
    both pulses are complete.
    """
    g = params.gamma
    mag = 2.0 * alpha * math.exp(-beta * beta) * math.sin(g * dk.separation)
    phase = 2.0 * g * dk.midpoint
    return PauliVector(cx=mag * math.sin(phase), cy=-mag * math.cos(phase))


def averaged_interaction_schrodinger(pulses: PulseSequence, t: float) -> PauliVector:
    """Integrated bare coupling: int_0^t v dt on sigma_x alone."""
    return PauliVector(cx=integrated_strength(pulses, 0.0, t))
