"""Command-line interface.

Verbs: ``point`` (single pipeline evaluation), ``sweep`` (grid from a
config file), ``preset <name>`` (built-in figure grids), ``tc``
(critical temperature search) and ``validate`` (invariant battery on
the configured point).  Exit code 0 on success, 1 on validation
failure, 2 on configuration errors.  Warnings go to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import dynamics, lyapunov, measures
from .config import ConfigError, load_config
from .params import eta_ratio, thermal_occupation
from .steady_state import effective_coupling, solve_steady_state
from .sweep import (PRESET_NAMES, SweepSpec, evaluate_point, figure_preset,
                    find_critical_temperature, render_records, run_sweep)

DIFFUSION_FLAGS = {"as-printed": "as_printed", "abs": "absolute_value",
                   "physical": "physical_sum"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magmech",
        description="Steady-state quantum correlations of a passive-active "
                    "double-cavity magnomechanical system.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", required=config_required,
                       help="path to the INI config file")
        p.add_argument("--out", help="output file (default: stdout or "
                                     "<preset>.csv)")
        p.add_argument("--diffusion", choices=sorted(DIFFUSION_FLAGS),
                       help="override the cavity-2 noise convention")
        p.add_argument("--drift", choices=("derived", "printed"),
                       default=None, help="drift matrix variant")
        p.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes")

    p_point = sub.add_parser("point", help="evaluate a single point")
    add_common(p_point)
    p_point.add_argument("--dump-matrices", metavar="DIR",
                         help="write drift/diffusion matrix dumps here")

    p_sweep = sub.add_parser("sweep", help="run the sweep from the config")
    add_common(p_sweep)

    p_preset = sub.add_parser("preset", help="run a built-in figure sweep")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    add_common(p_preset, config_required=False)

    p_tc = sub.add_parser("tc", help="critical temperature of a mode pair")
    add_common(p_tc)
    p_tc.add_argument("--pair", default="a2,m",
                      help="mode pair, e.g. a2,m (default)")

    p_val = sub.add_parser("validate", help="run the invariant battery")
    add_common(p_val)

    return parser


def _apply_overrides(params, args):
    if args.diffusion:
        params = replace(params,
                         diffusion_convention=DIFFUSION_FLAGS[args.diffusion])
    return params


def _drift_mode(args, default="derived"):
    return args.drift if args.drift else default


def _emit(text: str, out_path) -> None:
    if out_path and out_path != "-":
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_warnings(records) -> None:
    seen = []
    for rec in records:
        for w in rec.warnings:
            head = w.split(":")[0]
            if head not in seen:
                seen.append(head)
    for head in seen:
        print(f"warning: {head} (one or more points)", file=sys.stderr)


def _record_to_json(rec, names) -> str:
    obj = {
        "axes": dict(zip(names, rec.axis_values)),
        "stable": rec.stable,
        "measures": rec.measures,
        "margin": rec.margin,
        "physicality": rec.physicality,
        "residual": rec.residual,
        "lyap_residual": rec.lyap_residual,
        "warnings": list(rec.warnings),
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_point(args) -> int:
    cfg = load_config(args.config)
    params = _apply_overrides(cfg["params"], args)
    rec = evaluate_point(params, drift_mode=_drift_mode(args),
                         epsilon_d=cfg["epsilon_d"])
    if args.dump_matrices:
        state = solve_steady_state(params, cfg["epsilon_d"])
        if params.coupling_mode == "direct_g":
            g_eff = params.G_mb
        else:
            g_eff = abs(effective_coupling(params.g_mb, state.m_avg))
        A = dynamics.drift_matrix(params, state.delta_eff, g_eff,
                                  mode=_drift_mode(args))
        D, _ = dynamics.diffusion_matrix(params)
        os.makedirs(args.dump_matrices, exist_ok=True)
        dynamics.write_matrix(os.path.join(args.dump_matrices, "A.txt"), A)
        dynamics.write_matrix(os.path.join(args.dump_matrices, "D.txt"), D)
    _emit(_record_to_json(rec, ()), args.out)
    _report_warnings([rec])
    return 0


def _run_and_emit(spec: SweepSpec, args, default_out=None) -> int:
    records = run_sweep(spec, jobs=max(args.jobs, 1))
    out = args.out or default_out
    _emit(render_records(records, spec), out)
    _report_warnings(records)
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    spec = cfg["spec"]
    if spec is None:
        raise ConfigError("config file has no [sweep] section")
    base = _apply_overrides(spec.base, args)
    spec = replace(spec, base=base,
                   drift_mode=_drift_mode(args, spec.drift_mode))
    return _run_and_emit(spec, args, cfg["output"]["path"])


def cmd_preset(args) -> int:
    spec = figure_preset(args.name)
    base = _apply_overrides(spec.base, args)
    spec = replace(spec, base=base, drift_mode=_drift_mode(args))
    return _run_and_emit(spec, args, f"{args.name}.csv")


def cmd_tc(args) -> int:
    cfg = load_config(args.config)
    params = _apply_overrides(cfg["params"], args)
    pair = tuple(p.strip() for p in args.pair.split(","))
    if len(pair) != 2:
        raise ConfigError(f"--pair must name two modes, got {args.pair!r}")
    tc, warnings = find_critical_temperature(
        params, pair, drift_mode=_drift_mode(args),
        epsilon_d=cfg["epsilon_d"])
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit("%.17g\n" % tc, args.out)
    return 0


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    params = _apply_overrides(cfg["params"], args)
    drift_mode = _drift_mode(args)
    epsilon_d = cfg["epsilon_d"] or params.kappa_1
    failures = 0

    def check(label, ok, detail=""):
        nonlocal failures
        line = f"PASS {label}" if ok else f"FAIL {label} {detail}".rstrip()
        print(line)
        failures += 0 if ok else 1

    n_lo = thermal_occupation(params.omega_b, 0.1)
    n_hi = thermal_occupation(params.omega_b, 0.2)
    check("thermal occupation increases with temperature", n_hi > n_lo)
    check("thermal occupation decreases with frequency",
          thermal_occupation(2 * params.omega_b, 0.1) < n_lo)

    scaled = replace(params, kappa_1=2 * params.kappa_1,
                     kappa_2=2 * params.kappa_2, gain_g=2 * params.gain_g)
    check("eta invariant under joint rate rescaling",
          abs(eta_ratio(scaled) - eta_ratio(params)) < 1e-12)

    state = solve_steady_state(params, epsilon_d)
    check("steady state converged", state.converged,
          f"(residual {state.residual:.3e})")
    check("steady-state residual < 1e-9", state.residual < 1e-9,
          f"(residual {state.residual:.3e})")

    rec = evaluate_point(params, drift_mode=drift_mode, epsilon_d=epsilon_d)
    if rec.stable:
        check("Lyapunov residual < 1e-10",
              rec.lyap_residual is not None and rec.lyap_residual < 1e-10,
              f"(residual {rec.lyap_residual})")
        D, _ = dynamics.diffusion_matrix(params)
        if np.all(np.diag(D) >= 0):
            check("covariance physicality >= -1e-9",
                  rec.physicality is not None and rec.physicality > -1e-9,
                  f"(min eig {rec.physicality})")
        else:
            print("SKIP covariance physicality (negative diffusion "
                  "convention at this point)")
        bad = [
            (a, b) for a, b in measures.PAIRS
            for d, other in ((f"st_{a}_to_{b}", f"E_{a}{b}"),
                             (f"st_{b}_to_{a}", f"E_{a}{b}"))
            if (rec.measures.get(d) or 0.0) > 1e-9
            and (rec.measures.get(other) or 0.0) <= 0.0
        ]
        check("steering implies entanglement", not bad, f"{bad}")
    else:
        print("SKIP Lyapunov checks (configured point is not stable)")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"point": cmd_point, "sweep": cmd_sweep,
                "preset": cmd_preset, "tc": cmd_tc,
                "validate": cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, lyapunov.SingularSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
