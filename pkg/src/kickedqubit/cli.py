"""Command-line interface: trajectory runs, bundled scenarios, validation.

Exit codes: 0 success, 1 usage error, 2 numerical or validation failure.
All output is deterministic CSV (17 significant digits, '\\n' endings,
metadata lines prefixed '#'); nothing is read from the environment.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import propagators
from .analysis import SCENARIO_NAMES, SweepSeries, scenario
from .evolve import (
    IntegratorConfig,
    interaction_integral_series,
    rk4_evolve,
)
from .pulses import (
    Pulse,
    PulseShape,
    SystemParams,
    gaussian,
    hydrogen_2s2p,
    ideal_kick,
    integrated_strength,
    rectangular,
    unit_system,
)
from .su2 import NonUnitaryError, probabilities
from .validation import run_validation

LIFETIME_WARNING_PS = 1600.0  # 2p lifetime scale; dissipation matters beyond this
MIN_TAU_WARNING_PS = 1e-3  # narrower pulses couple to levels outside the pair

_PRESETS = {"hydrogen-2s2p": hydrogen_2s2p, "unit": unit_system}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def parse_angle(text: str) -> float:
    """Angles in radians, with 'pi' shorthand: 'pi/2', '-3pi/8', '0.75'."""
    s = text.strip().lower().replace(" ", "")
    m = re.fullmatch(r"(-?)(\d+\.?\d*)?pi(?:/(\d+\.?\d*))?", s)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


_SHAPE_ALIASES = {
    "gaussian": PulseShape.GAUSSIAN,
    "rectangular": PulseShape.RECTANGULAR,
    "rect": PulseShape.RECTANGULAR,
    "kick": PulseShape.IDEAL_KICK,
    "ideal_kick": PulseShape.IDEAL_KICK,
}


def parse_pulse(text: str) -> Pulse:
    """Pulse flag grammar: shape:alpha=<rad>,tau=<ps>,center=<ps>."""
    try:
        shape_part, _, params_part = text.partition(":")
        shape = _SHAPE_ALIASES[shape_part.strip().lower()]
        fields = {}
        for item in params_part.split(","):
            if not item:
                continue
            key, _, value = item.partition("=")
            fields[key.strip()] = value.strip()
        alpha = parse_angle(fields.pop("alpha"))
        center = float(fields.pop("center"))
        if shape is PulseShape.IDEAL_KICK:
            fields.pop("tau", None)
            pulse = ideal_kick(alpha, center)
        else:
            tau = float(fields.pop("tau"))
            pulse = gaussian(alpha, tau, center) if shape is PulseShape.GAUSSIAN else rectangular(alpha, tau, center)
        if fields:
            raise KeyError(", ".join(fields))
        return pulse
    except argparse.ArgumentTypeError:
        raise
    except (KeyError, ValueError) as exc:
        raise argparse.ArgumentTypeError(
            f"bad pulse spec {text!r} (want shape:alpha=...,tau=...,center=...): {exc}"
        ) from None


def _add_system_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--preset", choices=sorted(_PRESETS), help="named system preset")
    group.add_argument("--gamma", type=float, help="level splitting rate in rad/ps")
    group.add_argument("--rabi-time", type=float, help="free oscillation period in ps")
    group.add_argument("--delta-e-ev", type=float, help="level splitting in eV")


def _system_from_args(args) -> tuple[SystemParams, str]:
    if args.gamma is not None:
        return SystemParams(args.gamma), f"gamma={args.gamma:g}"
    if args.rabi_time is not None:
        return SystemParams.from_rabi_time(args.rabi_time), f"rabi_time={args.rabi_time:g}"
    if args.delta_e_ev is not None:
        return SystemParams.from_delta_e_ev(args.delta_e_ev), f"delta_e_ev={args.delta_e_ev:g}"
    preset = args.preset or "hydrogen-2s2p"
    return _PRESETS[preset](), f"preset={preset}"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str | None, meta: list[str], header: list[str], rows) -> None:
    lines = [f"# {m}" for m in meta]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="")


def _warn_scales(pulses, params: SystemParams, total_time: float, preset_label: str) -> None:
    if "hydrogen" in preset_label and total_time > LIFETIME_WARNING_PS:
        sys.stderr.write(
            f"warning: simulated span {total_time:g} ps exceeds the 2p lifetime "
            f"scale {LIFETIME_WARNING_PS:g} ps; dissipation is not modeled\n"
        )
    for p in pulses:
        if p.shape is not PulseShape.IDEAL_KICK and p.tau < MIN_TAU_WARNING_PS:
            sys.stderr.write(
                f"warning: tau={p.tau:g} ps is narrow enough to couple levels "
                "outside the two-state pair\n"
            )


def _cmd_propagate(args) -> int:
    params, preset_label = _system_from_args(args)
    pulses = list(args.pulse)
    if args.t0 < 0.0 or args.t1 < args.t0 or any(p.center < 0.0 for p in pulses):
        sys.stderr.write("error: times must be non-negative with t1 >= t0\n")
        return 1
    _warn_scales(pulses, params, args.t1 - args.t0, preset_label)
    cfg = IntegratorConfig(dt=args.dt)
    times = np.linspace(args.t0, args.t1, args.samples)
    basis1 = rk4_evolve(pulses, params, (1.0, 0.0), args.t0, args.t1, cfg, record_times=times)
    basis2 = rk4_evolve(pulses, params, (0.0, 1.0), args.t0, args.t1, cfg, record_times=times)
    integral = interaction_integral_series(pulses, params, times, cfg)
    g = params.gamma
    rows = []
    for i, t in enumerate(times):
        u11, u21 = basis1.states[i]
        u12, _ = basis2.states[i]
        p1, p2 = abs(u11) ** 2, abs(u21) ** 2
        a_run = integrated_strength(pulses, args.t0, float(t))
        u0 = propagators.no_ordering_schrodinger(a_run, g * (float(t) - args.t0))
        _, p2_noto_s = probabilities(u0, (1.0, 0.0))
        p2_noto_i = math.sin(abs(integral[i])) ** 2
        rows.append(
            (t, p1, p2, p2_noto_s, p2_noto_i, u11.real, u11.imag, u12.real, u12.imag)
        )
    meta = [
        f"system {preset_label} gamma_rad_per_ps={_fmt(params.gamma)}",
        "pulses " + "; ".join(
            f"{p.shape.value}:alpha={_fmt(p.alpha)},tau={_fmt(p.tau)},center={_fmt(p.center)}"
            for p in pulses
        ),
        f"window t0={_fmt(args.t0)} t1={_fmt(args.t1)} samples={args.samples}",
        f"dt={'auto' if args.dt is None else _fmt(args.dt)}",
    ]
    header = [
        "t_ps", "P1", "P2", "P2_noTO_schrodinger", "P2_noTO_interaction",
        "ReU11", "ImU11", "ReU12", "ImU12",
    ]
    _write_csv(args.out, meta, header, rows)
    return 0


def _parse_override(item: str):
    key, sep, value = item.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"override {item!r} is not key=value")
    key = key.strip()
    value = value.strip()
    list_keys = {"taus", "alphas", "observation_times"}
    if key in list_keys:
        return key, tuple(parse_angle(v) if key == "alphas" else float(v) for v in value.split(":"))
    if key in {"alpha"}:
        return key, parse_angle(value)
    if key in {"n_points"}:
        return key, int(value)
    return key, float(value)


def _cmd_figure(args) -> int:
    overrides = dict(args.set or [])
    if args.rabi_time is not None:
        overrides["rabi_time"] = args.rabi_time
    try:
        series = scenario(args.name, overrides, IntegratorConfig(dt=args.dt))
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    total = float(series.metadata.get("max_time_ps", 0.0))
    if total > LIFETIME_WARNING_PS:
        sys.stderr.write(
            f"warning: span {total:g} ps exceeds the 2p lifetime scale "
            f"{LIFETIME_WARNING_PS:g} ps; dissipation is not modeled\n"
        )
    out = args.out
    if out is None:
        out = str(Path(args.outdir) / f"{args.name}.csv")
        Path(args.outdir).mkdir(parents=True, exist_ok=True)
    _write_series(out, args.name, series)
    return 0


def _write_series(path: str | None, name: str, series: SweepSeries) -> None:
    labels = list(series.columns)
    meta = [f"scenario {name}"]
    for key in sorted(series.metadata):
        meta.append(f"{key}={series.metadata[key]}")
    header = [series.parameter] + labels
    cols = [series.values] + [series.columns[label] for label in labels]
    rows = zip(*cols)
    _write_csv(path, meta, header, rows)


def _cmd_validate(args) -> int:
    results = run_validation(quick=args.quick, seed=args.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 2


def _cmd_floquet(args) -> int:
    params, preset_label = _system_from_args(args)
    if args.sweep is not None:
        start, stop, count = args.sweep
        gts = np.linspace(start, stop, int(count))
    elif args.period is not None:
        gts = np.array([params.gamma * args.period])
    else:
        sys.stderr.write("error: give --period or --sweep\n")
        return 1
    rows = []
    for gt in gts:
        res = propagators.floquet_eigenphases(args.alpha, float(gt))
        v_plus, v_minus = res.eigenvectors
        rows.append(
            (
                gt, res.chi,
                v_plus[0].real, v_plus[0].imag, v_plus[1].real, v_plus[1].imag,
                v_minus[0].real, v_minus[0].imag, v_minus[1].real, v_minus[1].imag,
            )
        )
    meta = [
        f"system {preset_label} gamma_rad_per_ps={_fmt(params.gamma)}",
        f"alpha_rad={_fmt(args.alpha)}",
    ]
    header = [
        "gamma_T", "chi",
        "Re_vplus_1", "Im_vplus_1", "Re_vplus_2", "Im_vplus_2",
        "Re_vminus_1", "Im_vminus_1", "Re_vminus_2", "Im_vminus_2",
    ]
    _write_csv(args.out, meta, header, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kickedqubit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", parents=[], help="integrate a pulse sequence and emit a CSV trajectory")
    _add_system_flags(p)
    p.add_argument("--pulse", type=parse_pulse, action="append", required=True,
                   metavar="SHAPE:alpha=A,tau=T,center=C",
                   help="repeatable; alpha accepts 'pi' fractions like pi/2")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--dt", type=float, default=None, help="integrator step in ps (default: auto)")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("figure", help="run a bundled scenario and write its CSV panel")
    p.add_argument("name", choices=SCENARIO_NAMES)
    p.add_argument("--set", type=_parse_override, action="append", metavar="KEY=VALUE",
                   help="override scenario parameters (tau=, alpha=, t_k=, t1=, t2=, t_f=, ...)")
    p.add_argument("--rabi-time", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--outdir", default=".")
    p.add_argument("--out", default=None, help="explicit CSV path (overrides --outdir)")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("validate", help="run the cross-validation suite")
    p.add_argument("--quick", action="store_true", help="reduced sweeps, skips RK4-heavy checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("floquet", help="eigenphases of a periodically kicked system")
    _add_system_flags(p)
    p.add_argument("--alpha", type=parse_angle, required=True)
    p.add_argument("--period", type=float, default=None, help="kick period in ps")
    p.add_argument("--sweep", nargs=3, type=float, metavar=("START", "STOP", "COUNT"),
                   default=None, help="sweep gamma*T over a range instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_floquet)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NonUnitaryError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2
    except (ValueError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
