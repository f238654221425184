"""Cross-validation suite: every closed form against an independent route.

Each check pits one implementation path against another that shares no
code with it (closed form vs RK4, closed form vs quadrature plus matrix
exponential, eigenphase formula vs numerical eigenvalues, ...), or fits a
predicted scaling law.  The CLI `validate` command runs the whole list;
the slow RK4-based checks are skipped in quick mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import propagators as prop
from .analysis import (
    SweepSeries,
    error_scaling_fit,
    p2_closed_forms_double,
    p2_closed_forms_single,
)
from .evolve import (
    IntegratorConfig,
    no_ordering_interaction_numeric,
    no_ordering_schrodinger_numeric,
    rk4_propagator,
)
from .pulses import (
    DoubleKickParams,
    PulseShape,
    SystemParams,
    gaussian,
    hydrogen_2s2p,
    ideal_kick,
    rectangular,
)
from .su2 import (
    IDENTITY,
    PauliVector,
    Z_AXIS,
    max_abs_diff,
    pauli_exponential,
    probabilities,
    unitarity_defect,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def check_pauli_algebra(rng: np.random.Generator, samples: int) -> CheckResult:
    """Random rotations: unitarity, unit determinant, same-axis composition."""
    worst_u = worst_det = worst_comp = worst_round = 0.0
    for _ in range(samples):
        phi, psi = rng.uniform(-10.0, 10.0, size=2)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        u = pauli_exponential(phi, n)
        worst_u = max(worst_u, unitarity_defect(u))
        worst_det = max(worst_det, abs(np.linalg.det(u) - 1.0))
        comp = pauli_exponential(psi, n) @ u
        worst_comp = max(worst_comp, max_abs_diff(comp, pauli_exponential(phi + psi, n)))
        pv = PauliVector(*(rng.normal(size=4) + 1j * rng.normal(size=4)))
        back = PauliVector.from_matrix(pv.to_matrix())
        worst_round = max(
            worst_round,
            abs(pv.c0 - back.c0),
            abs(pv.cx - back.cx),
            abs(pv.cy - back.cy),
            abs(pv.cz - back.cz),
        )
    ok = worst_u <= 1e-12 and worst_det <= 1e-12 and worst_comp <= 1e-12 and worst_round <= 1e-14
    return _result(
        "pauli-algebra",
        ok,
        f"unitarity {worst_u:.1e}, det {worst_det:.1e}, composition {worst_comp:.1e}, "
        f"round-trip {worst_round:.1e}",
    )


def check_propagator_unitarity(rng: np.random.Generator, samples: int) -> CheckResult:
    """All closed-form propagators stay unitary across random parameters."""
    worst = 0.0
    for _ in range(samples):
        alpha, beta = rng.uniform(-6.0, 6.0), rng.uniform(0.0, 2.0)
        gamma = rng.uniform(0.0, 2.0)
        t1 = rng.uniform(0.0, 10.0)
        ts = rng.uniform(0.0, 10.0)
        t = t1 + ts + rng.uniform(0.1, 10.0)
        dk = DoubleKickParams(t1, t1 + ts)
        params = SystemParams(gamma)
        mats = (
            prop.free_propagator(params, t),
            prop.degenerate_propagator(alpha),
            prop.no_ordering_schrodinger(alpha, gamma * t),
            prop.no_ordering_interaction_single(alpha, beta, gamma * t1),
            prop.no_ordering_interaction_double(alpha, beta, gamma, dk),
            prop.kicked_propagator(alpha, gamma, t1, t),
            prop.kick_antikick_propagator(alpha, gamma, dk, t),
            prop.rectangular_propagator(alpha, beta, gamma, t1, t),
        )
        worst = max(worst, max(unitarity_defect(m) for m in mats))
    return _result("propagator-unitarity", worst <= 1e-10, f"worst defect {worst:.1e}")


def check_limit_web(offset: float = 1e-6, tol: float = 1e-5) -> CheckResult:
    """Six limit reductions between propagators at a small parameter offset."""
    alpha, gamma, t = 1.1, 0.8, 3.0
    diffs = {}
    diffs["bare-average -> degenerate"] = max_abs_diff(
        prop.no_ordering_schrodinger(alpha, offset), prop.degenerate_propagator(alpha)
    )
    diffs["bare-average -> free"] = max_abs_diff(
        prop.no_ordering_schrodinger(offset, gamma * t),
        prop.free_propagator(SystemParams(gamma), t),
    )
    dk = DoubleKickParams(1.0, 1.0 + offset)
    diffs["kick-antikick -> free"] = max_abs_diff(
        prop.kick_antikick_propagator(alpha, gamma, dk, t),
        prop.free_propagator(SystemParams(gamma), t),
    )
    diffs["rectangular -> kicked"] = max_abs_diff(
        prop.rectangular_propagator(alpha, offset, gamma, 1.0, t),
        prop.kicked_propagator(alpha, gamma, 1.0, t),
    )
    # adiabatic, degenerate side: gamma -> 0 at constant coupling
    adia = prop.adiabatic_propagator(
        [rectangular(0.3, 4.0, 2.0)], SystemParams(offset), 4.0
    )
    diffs["adiabatic -> degenerate"] = max_abs_diff(
        adia.matrix, prop.degenerate_propagator(0.3)
    )
    # adiabatic, free side: vanishing coupling at fixed splitting
    adia2 = prop.adiabatic_propagator(
        [gaussian(offset, 0.5, 4.0)], SystemParams(gamma), 8.0
    )
    diffs["adiabatic -> free"] = max_abs_diff(
        adia2.matrix, prop.free_propagator(SystemParams(gamma), 8.0)
    )
    worst_name, worst = max(diffs.items(), key=lambda kv: kv[1])
    return _result(
        "limit-web",
        all(v <= tol for v in diffs.values()),
        f"worst {worst_name}: {worst:.1e} (tol {tol:g})",
    )


def check_interaction_kick_identity(rng: np.random.Generator, samples: int) -> CheckResult:
    """Rotating the exact kicked propagator removes all ordering content.

    exp(i H0 t / hbar) U_kick equals the beta = 0 rotating-frame average
    form exactly, so their difference must sit at rounding level.
    """
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(-4.0, 4.0)
        gamma = rng.uniform(0.0, 2.0)
        tk = rng.uniform(0.0, 8.0)
        t = tk + rng.uniform(0.01, 8.0)
        rotated = pauli_exponential(-gamma * t, Z_AXIS) @ prop.kicked_propagator(
            alpha, gamma, tk, t
        )
        worst = max(
            worst,
            max_abs_diff(rotated, prop.no_ordering_interaction_single(alpha, 0.0, gamma * tk)),
        )
    return _result("interaction-kick-identity", worst <= 1e-12, f"worst {worst:.1e}")


def check_schrodinger_double_zero(rng: np.random.Generator, samples: int) -> CheckResult:
    """Bare-frame average evolution of a kick-antikick pair never transfers."""
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(0.1, 3.0)
        gamma = rng.uniform(0.01, 2.0)
        t1 = rng.uniform(0.0, 5.0)
        t2 = t1 + rng.uniform(0.01, 8.0)
        t = t2 + rng.uniform(0.1, 5.0)
        kicks = [ideal_kick(alpha, t1), ideal_kick(-alpha, t2)]
        u0 = no_ordering_schrodinger_numeric(kicks, SystemParams(gamma), t)
        _, p2 = probabilities(u0, (1.0, 0.0))
        worst = max(worst, p2)
    return _result("schrodinger-double-zero", worst <= 1e-12, f"worst P2 {worst:.1e}")


def check_closed_form_consistency(rng: np.random.Generator, samples: int) -> CheckResult:
    """Probability formulas against the matrices they summarize, to 1e-12."""
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(-3.0, 3.0)
        beta = rng.uniform(0.0, 1.5)
        gamma = rng.uniform(0.01, 2.0)
        tk = rng.uniform(0.0, 5.0)
        tf = tk + rng.uniform(0.01, 10.0)
        single = p2_closed_forms_single(alpha, beta, gamma * tf)
        _, p2 = probabilities(prop.kicked_propagator(alpha, gamma, tk, tf), (1.0, 0.0))
        worst = max(worst, abs(p2 - single.exact_kick))
        _, p2 = probabilities(prop.no_ordering_schrodinger(alpha, gamma * tf), (1.0, 0.0))
        worst = max(worst, abs(p2 - single.no_ordering_schrodinger))
        _, p2 = probabilities(
            prop.no_ordering_interaction_single(alpha, beta, gamma * tk), (1.0, 0.0)
        )
        worst = max(worst, abs(p2 - single.no_ordering_interaction))
        t1 = rng.uniform(0.0, 4.0)
        dk = DoubleKickParams(t1, t1 + rng.uniform(0.0, 8.0))
        t = dk.t2 + rng.uniform(0.01, 5.0)
        double = p2_closed_forms_double(alpha, beta, gamma * dk.separation)
        _, p2 = probabilities(prop.kick_antikick_propagator(alpha, gamma, dk, t), (1.0, 0.0))
        worst = max(worst, abs(p2 - double.exact_kick))
        _, p2 = probabilities(
            prop.no_ordering_interaction_double(alpha, beta, gamma, dk), (1.0, 0.0)
        )
        worst = max(worst, abs(p2 - double.no_ordering_interaction))
    return _result("closed-form-consistency", worst <= 1e-12, f"worst {worst:.1e}")


def check_numeric_no_ordering(rng: np.random.Generator, samples: int) -> CheckResult:
    """Closed no-ordering forms against quadrature/expm routes, narrow pulses."""
    params = hydrogen_2s2p()
    g = params.gamma
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(0.3, 2.5)
        beta = rng.uniform(0.005, 0.05)
        tau = beta / g
        tk = rng.uniform(6.0 * tau, 6.0 * tau + 300.0)
        t = tk + 6.0 * tau + rng.uniform(1.0, 300.0)
        pulse = [gaussian(alpha, tau, tk)]
        u_num = no_ordering_interaction_numeric(pulse, params, t)
        worst = max(
            worst,
            max_abs_diff(u_num, prop.no_ordering_interaction_single(alpha, beta, g * tk)),
        )
        u0_num = no_ordering_schrodinger_numeric(pulse, params, t)
        a_run = alpha  # pulse complete, so the running integral is the full strength
        worst = max(worst, max_abs_diff(u0_num, prop.no_ordering_schrodinger(a_run, g * t)))
        t2 = tk + rng.uniform(12.0 * tau, 400.0)
        pair = [gaussian(alpha, tau, tk), gaussian(-alpha, tau, t2)]
        u_num = no_ordering_interaction_numeric(pair, params, t2 + 6.0 * tau + 1.0)
        worst = max(
            worst,
            max_abs_diff(
                u_num,
                prop.no_ordering_interaction_double(
                    alpha, beta, g, DoubleKickParams(tk, t2)
                ),
            ),
        )
    return _result("numeric-no-ordering", worst <= 1e-8, f"worst {worst:.1e}")


def check_floquet_grid(n: int) -> CheckResult:
    """Eigenphase formula against numerical eigenvalues on an (alpha, gamma T) grid."""
    worst = 0.0
    for alpha in np.linspace(0.0, math.pi, n):
        for gt in np.linspace(0.0, math.pi, n):
            res = prop.floquet_eigenphases(float(alpha), float(gt))
            eigvals = np.linalg.eigvals(res.one_period)
            chi_num = float(np.max(np.abs(np.angle(eigvals))))
            worst = max(worst, abs(chi_num - res.chi))
            recon = max(
                abs(ev - e) for ev, e in zip(
                    sorted(eigvals, key=np.angle),
                    sorted([np.exp(-1j * res.chi), np.exp(1j * res.chi)], key=np.angle),
                )
            )
            worst = max(worst, float(recon))
    return _result("floquet-grid", worst <= 1e-10, f"worst {worst:.1e} on {n}x{n} grid")


def check_time_reversal(rng: np.random.Generator, samples: int) -> CheckResult:
    """Propagating forward then with mirrored, sign-reversed arguments gives 1."""
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(-3.0, 3.0)
        gamma = rng.uniform(0.0, 2.0)
        tk = rng.uniform(0.1, 5.0)
        t = tk + rng.uniform(0.1, 5.0)
        u = prop.kicked_propagator(alpha, gamma, tk, t)
        u_rev = prop.kicked_propagator(-alpha, -gamma, t - tk, t)
        worst = max(worst, max_abs_diff(u_rev @ u, IDENTITY))
        t1 = rng.uniform(0.0, 3.0)
        dk = DoubleKickParams(t1, t1 + rng.uniform(0.1, 4.0))
        t = dk.t2 + rng.uniform(0.1, 4.0)
        u = prop.kick_antikick_propagator(alpha, gamma, dk, t)
        u_rev = prop.kick_antikick_propagator(
            alpha, -gamma, DoubleKickParams(t - dk.t2, t - dk.t1), t
        )
        worst = max(worst, max_abs_diff(u_rev @ u, IDENTITY))
        u = prop.no_ordering_schrodinger(alpha, gamma)
        worst = max(
            worst, max_abs_diff(prop.no_ordering_schrodinger(-alpha, -gamma) @ u, IDENTITY)
        )
        beta = rng.uniform(0.0, 1.0)
        u = prop.rectangular_propagator(alpha, beta, gamma, tk, t)
        u_rev = prop.rectangular_propagator(-alpha, -beta, -gamma, t - tk, t)
        worst = max(worst, max_abs_diff(u_rev @ u, IDENTITY))
    return _result("time-reversal", worst <= 1e-10, f"worst {worst:.1e}")


def check_perturbative_onset() -> CheckResult:
    """Kick-antikick ordering effect starts at second order in the strength.

    In the rotating frame ||U_I - U_I^0|| must fit a log-log slope >= 2 in
    alpha, and the off-diagonal difference a slope >= 3.
    """
    gamma, t1, ts = 0.9, 1.0, 2.0
    dk = DoubleKickParams(t1, t1 + ts)
    t = dk.t2 + 1.5
    alphas = np.geomspace(3e-4, 3e-2, 8)
    full, offdiag = [], []
    for alpha in alphas:
        u_i = pauli_exponential(-gamma * t, Z_AXIS) @ prop.kick_antikick_propagator(
            float(alpha), gamma, dk, t
        )
        u_i0 = prop.no_ordering_interaction_double(float(alpha), 0.0, gamma, dk)
        diff = u_i - u_i0
        full.append(float(np.max(np.abs(diff))))
        offdiag.append(float(max(abs(diff[0, 1]), abs(diff[1, 0]))))
    fit_full = error_scaling_fit(
        SweepSeries("alpha", alphas, {"diff": np.array(full)})
    )
    fit_off = error_scaling_fit(
        SweepSeries("alpha", alphas, {"diff": np.array(offdiag)})
    )
    ok = fit_full.slope >= 2.0 - 0.05 and fit_off.slope >= 3.0 - 0.05
    return _result(
        "perturbative-onset",
        ok,
        f"full slope {fit_full.slope:.2f} (>=2), off-diagonal slope {fit_off.slope:.2f} (>=3)",
    )


def check_rect_correction_residual() -> CheckResult:
    """Leading-width correction leaves an O(beta^2) residual (slope 2 +- 0.2)."""
    alpha, gamma, tk, t = 1.2, 0.7, 2.0, 5.0
    betas = np.geomspace(1e-3, 3e-2, 8)
    resid = []
    for beta in betas:
        delta = prop.rectangular_propagator(alpha, float(beta), gamma, tk, t) - \
            prop.kicked_propagator(alpha, gamma, tk, t)
        delta -= prop.kick_correction_leading(alpha, float(beta), gamma, t, PulseShape.RECTANGULAR)
        resid.append(float(np.max(np.abs(delta))))
    fit = error_scaling_fit(SweepSeries("beta", betas, {"resid": np.array(resid)}))
    return _result(
        "rect-correction-residual",
        abs(fit.slope - 2.0) <= 0.2,
        f"slope {fit.slope:.2f} (want 2.0 +- 0.2)",
    )


def check_kicked_error_scaling() -> CheckResult:
    """RK4 transfer error of the kicked approximation grows as (tau/T)^2."""
    fit = kicked_error_scaling_fit()
    return _result(
        "kicked-error-scaling", abs(fit.slope - 2.0) <= 0.1, f"slope {fit.slope:.3f} (want 2.0 +- 0.1)"
    )


def kicked_error_scaling_fit(n_points: int = 8):
    params = hydrogen_2s2p()
    alpha, tk, tf = math.pi / 2, 150.0, 300.0
    ratios = np.geomspace(1e-3, 3e-2, n_points)
    errs = np.empty(n_points)
    for i, r in enumerate(ratios):
        tau = r * params.rabi_time
        u = rk4_propagator([gaussian(alpha, tau, tk)], params, 0.0, tf)
        _, p2 = probabilities(u, (1.0, 0.0))
        errs[i] = abs(p2 - math.sin(alpha) ** 2)
    return error_scaling_fit(
        SweepSeries("tau_over_T", ratios, {"p2_error": errs}), expected_slope=2.0
    )


def check_rk4_order() -> CheckResult:
    """Global RK4 error falls as dt^4 under halving (slope 4 +- 0.2)."""
    fit, norm_defect_val = rk4_order_fit()
    ok = abs(fit.slope - 4.0) <= 0.2 and norm_defect_val <= 1e-8
    return _result(
        "rk4-order",
        ok,
        f"slope {fit.slope:.2f} (want 4.0 +- 0.2), norm defect {norm_defect_val:.1e}",
    )


def rk4_order_fit():
    """dt ladder on the single-pulse transfer scenario, against a fine reference."""
    params = hydrogen_2s2p()
    pulses = [gaussian(math.pi / 2, 10.0, 150.0)]
    ref = rk4_propagator(pulses, params, 0.0, 300.0, IntegratorConfig(dt=0.0125))
    dts = np.array([1.6, 0.8, 0.4, 0.2])
    errs = np.array(
        [
            max_abs_diff(
                rk4_propagator(pulses, params, 0.0, 300.0,
                               IntegratorConfig(dt=float(dt), unitarity_tolerance=1e-4)),
                ref,
            )
            for dt in dts
        ]
    )
    fit = error_scaling_fit(SweepSeries("dt", dts, {"err": errs}), expected_slope=4.0)
    u_default = rk4_propagator(pulses, params, 0.0, 300.0)
    return fit, unitarity_defect(u_default)


def check_rectangular_vs_rk4(rng: np.random.Generator, samples: int) -> CheckResult:
    """Exact rectangular propagator against RK4 at dt = tau / 1e4."""
    worst = 0.0
    for _ in range(samples):
        alpha = rng.uniform(-1.0, 1.0)
        beta = rng.uniform(0.01, 1.0)
        gamma = rng.uniform(0.2, 1.5)
        tau = beta / gamma
        tk = tau  # free stretch of tau/2 before the pulse
        t = 3.0 * tau
        u_exact = prop.rectangular_propagator(alpha, beta, gamma, tk, t)
        u_num = rk4_propagator(
            [rectangular(alpha, tau, tk)], SystemParams(gamma), 0.0, t,
            IntegratorConfig(dt=tau / 1e4),
        )
        worst = max(worst, max_abs_diff(u_exact, u_num))
    return _result("rectangular-vs-rk4", worst <= 1e-8, f"worst {worst:.1e}")


def check_consistency_triangle() -> CheckResult:
    """Closed forms, propagators, and RK4 agree within the beta^2 error law."""
    params = hydrogen_2s2p()
    g = params.gamma
    worst_exact = 0.0
    worst_rk4_ratio = 0.0
    for alpha, tau, tk, tf in (
        (math.pi / 2, 5.0, 150.0, 300.0),
        (math.pi / 4, 10.0, 150.0, 400.0),
        (1.0, 20.0, 200.0, 500.0),
    ):
        beta = g * tau
        # closed form vs propagator route: must match to rounding
        single = p2_closed_forms_single(alpha, beta, g * tf)
        _, p2_mat = probabilities(
            prop.no_ordering_interaction_single(alpha, beta, g * tk), (1.0, 0.0)
        )
        worst_exact = max(worst_exact, abs(p2_mat - single.no_ordering_interaction))
        # RK4 vs kicked limit: bounded by the fitted quadratic error law
        u = rk4_propagator([gaussian(alpha, tau, tk)], params, 0.0, tf)
        _, p2 = probabilities(u, (1.0, 0.0))
        err = abs(p2 - single.exact_kick)
        bound = 16.0 * beta * beta  # generous prefactor over the observed law
        worst_rk4_ratio = max(worst_rk4_ratio, err / bound)
    ok = worst_exact <= 1e-12 and worst_rk4_ratio <= 1.0
    return _result(
        "consistency-triangle",
        ok,
        f"closed-vs-matrix {worst_exact:.1e}, rk4 error / beta^2 bound {worst_rk4_ratio:.2f}",
    )


def run_validation(quick: bool = False, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [
        check_pauli_algebra(rng, 1000 if quick else 10000),
        check_propagator_unitarity(rng, 1000 if quick else 10000),
        check_limit_web(),
        check_interaction_kick_identity(rng, 200 if quick else 1000),
        check_schrodinger_double_zero(rng, 100 if quick else 500),
        check_closed_form_consistency(rng, 200 if quick else 1000),
        check_numeric_no_ordering(rng, 3 if quick else 25),
        check_floquet_grid(12 if quick else 50),
        check_time_reversal(rng, 200 if quick else 1000),
        check_perturbative_onset(),
        check_rect_correction_residual(),
    ]
    if quick:
        results.append(check_rectangular_vs_rk4(rng, 3))
    else:
        results += [
            check_kicked_error_scaling(),
            check_rk4_order(),
            check_rectangular_vs_rk4(rng, 20),
            check_consistency_triangle(),
        ]
    return results
