"""Command-line front end: distances, flows, gradients, smoothing, verification.

Every subcommand writes a machine-readable result file next to a short
human-readable summary on stdout, and is a pure function of (inputs,
flags, seed).  Defaults lambda=1 and j=1 are printed in every report
header so runs with silently different parameters cannot be confused.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .curve import CurveError, load_curve, save_curve
from .energies import (
    EnergyKind,
    center_of_mass_energy,
    elastic_energy,
    energy_from_config,
    evaluate,
    grad_h0,
    grad_sobolev,
    length_energy,
    std_dev_energy,
)
from .flows import FlowConfig, run_flow
from .generators import CANONICAL, make_canonical
from .inequalities import check_all
from .metrics import MetricError, MetricSpec
from .paths import frechet_distance, dinf_distance, geodesic_distance, length_lipschitz_check
from .smoothing import (
    SmoothingError,
    SmoothingSchedule,
    direction_function,
    fourier_smoothing_homotopy,
    h1_smoothing_path,
)

_METRIC_NAMES = {
    "h0": lambda a: MetricSpec.h0(),
    "h1": lambda a: MetricSpec.hj(1, a.lam),
    "h2": lambda a: MetricSpec.hj(2, a.lam),
    "hj": lambda a: MetricSpec.hj(a.j, a.lam),
    "h1tilde": lambda a: MetricSpec.hj_tilde(1, a.lam),
    "h2tilde": lambda a: MetricSpec.hj_tilde(2, a.lam),
    "hjtilde": lambda a: MetricSpec.hj_tilde(a.j, a.lam),
    "halpha": lambda a: MetricSpec.h_alpha(a.alpha, a.lam),
    "halphatilde": lambda a: MetricSpec.h_alpha(a.alpha, a.lam, tilde=True),
    "conformal": lambda a: MetricSpec.conformal_h0(),
    "mmgn": lambda a: MetricSpec.mm_gn(a.j),
    "mmha": lambda a: MetricSpec.mm_ha(a.big_a),
}

_ENERGY_NAMES = ("length", "elastic", "center_of_mass", "std_dev")


def _metric_args(parser):
    parser.add_argument("--metric", default="h1", choices=sorted(_METRIC_NAMES))
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0)
    parser.add_argument("--j", type=int, default=1)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--big-a", dest="big_a", type=float, default=1.0)


def _build_metric(args) -> MetricSpec:
    return _METRIC_NAMES[args.metric](args)


def _build_energy(args) -> EnergyKind:
    if getattr(args, "energy_config", None):
        return energy_from_config(args.energy_config)
    if args.energy == "length":
        return length_energy()
    if args.energy == "elastic":
        return elastic_energy()
    if args.energy == "std_dev":
        return std_dev_energy()
    target = tuple(float(x) for x in args.target.split(","))
    return center_of_mass_energy(target)


def _header(args) -> dict:
    return {
        "metric": getattr(args, "metric", None),
        "lambda": getattr(args, "lam", None),
        "j": getattr(args, "j", None),
        "seed": getattr(args, "seed", None),
        "version": __version__,
    }


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)


def _cmd_gen(args) -> int:
    if args.n < 8 or args.n % 2:
        raise ValueError("resolution must be even and at least 8")
    kwargs = {}
    if args.radius is not None:
        kwargs["radius"] = args.radius
    c = make_canonical(args.name, n=args.n, seed=args.seed, **kwargs)
    out = args.out or f"{args.name}.json"
    save_curve(c, out)
    print(f"gen {args.name}: n={c.n_samples} length={c.length:.6f} -> {out}")
    return 0


def _cmd_dist(args) -> int:
    spec = _build_metric(args)
    c0, c1 = load_curve(args.curve0), load_curve(args.curve1)
    result = geodesic_distance(
        c0, c1, spec, k_rows=args.k_rows, orientation=args.orientation
    )
    lips = None
    if spec.variant in ("Hj", "HjTilde") and spec.j == 1:
        lips = length_lipschitz_check(result.homotopy, spec)
    payload = {
        "header": _header(args),
        "distance": result.distance,
        "iterations": len(result.action_history),
        "action_history": result.action_history,
        "shift": result.shift,
        "flipped": result.flipped,
        "converged": result.converged,
        "length_lipschitz_margin": lips.margin if lips else None,
    }
    if args.report:
        _write_json(args.report, payload)
    print(
        f"distance[{args.metric}, lambda={args.lam}, j={args.j}] = "
        f"{result.distance:.6f} (upper bound; converged={result.converged})"
    )
    return 0


def _cmd_frechet(args) -> int:
    c0, c1 = load_curve(args.curve0), load_curve(args.curve1)
    value = frechet_distance(c0, c1, orientation=args.orientation)
    payload = {"header": _header(args), "frechet": value}
    if args.dinf:
        payload["dinf"] = dinf_distance(c0, c1)
    if args.report:
        _write_json(args.report, payload)
    print(f"frechet = {value:.6f}")
    if args.dinf:
        print(f"dinf    = {payload['dinf']:.6f}")
    return 0


def _cmd_grad(args) -> int:
    spec = _build_metric(args)
    c = load_curve(args.curve)
    kind = _build_energy(args)
    g0 = grad_h0(kind, c)
    payload = {
        "header": _header(args),
        "energy": args.energy,
        "value": evaluate(kind, c),
        "grad_h0": g0.tolist(),
    }
    if spec.variant != "H0":
        payload["grad_sobolev"] = grad_sobolev(kind, c, spec).tolist()
    out = args.out or "gradient.json"
    _write_json(out, payload)
    print(
        f"grad[{args.energy}] |grad_h0|_max={np.abs(g0).max():.6f} -> {out}"
    )
    return 0


def _cmd_flow(args) -> int:
    spec = _build_metric(args)
    c = load_curve(args.curve)
    cfg = FlowConfig(
        energy=_build_energy(args),
        metric=spec,
        dt=args.dt,
        steps=args.steps,
        adaptive=not args.fixed_dt,
        normal_projection=args.normal_projection,
        conformal=not args.no_conformal,
        resample_every=args.resample_every,
        t_end=args.t_end,
    )
    traj = run_flow(c, cfg)
    prefix = Path(args.out_prefix)
    records = traj.records()
    with open(prefix.with_suffix(".jsonl"), "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    with open(prefix.with_suffix(".csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "t", "length", "energy", "step_norm"])
        for rec in records:
            writer.writerow(
                [rec["step"], rec["t"], rec["length"], rec["energy"], rec["step_norm"]]
            )
    save_curve(traj.curves[-1], prefix.parent / (prefix.name + "_final.json"))
    status = traj.failure or "ok"
    print(
        f"flow[{args.energy} under {args.metric}, lambda={args.lam}, j={args.j}] "
        f"steps={len(records) - 1} E: {records[0]['energy']:.6f} -> "
        f"{records[-1]['energy']:.6f} ({status})"
    )
    return 0 if traj.failure is None else 1


def _cmd_smooth(args) -> int:
    c = load_curve(args.curve)
    prefix = Path(args.out_prefix)
    if args.method == "fourier":
        times = tuple(float(x) for x in args.schedule.split(","))
        sched = SmoothingSchedule(decay=args.decay, times=times)
        steps = fourier_smoothing_homotopy(c, sched, lam=args.lam)
        with open(prefix.with_suffix(".csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "delta", "tail_mass"])
            for st in steps:
                writer.writerow([st.t, st.delta, st.tail_mass])
        for st in steps:
            save_curve(st.curve, prefix.parent / f"{prefix.name}_t{st.t:g}.json")
        print("smooth[fourier] " + ", ".join(f"delta({s.t:g})={s.delta:.3e}" for s in steps))
        return 0
    homotopy, action = h1_smoothing_path(c, cutoff=args.cutoff, lam=args.lam)
    df = direction_function(c)
    save_curve(homotopy.row(0), prefix.parent / (prefix.name + "_smooth.json"))
    payload = {
        "header": _header(args),
        "cutoff": args.cutoff,
        "action": action,
        "winding": df.winding,
    }
    _write_json(prefix.with_suffix(".json"), payload)
    print(f"smooth[direction] cutoff={args.cutoff} action={action:.6e}")
    return 0


def _cmd_verify(args) -> int:
    reports = check_all(seed=args.seed, samples=args.samples)
    payload = {
        "header": _header(args),
        "reports": [r.as_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    if args.report:
        _write_json(args.report, payload)
    for r in reports:
        print(
            f"{'PASS' if r.passed else 'FAIL'} {r.name}: worst margin "
            f"{r.worst_margin:.3e} over {r.samples} samples"
        )
    return 0 if payload["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curveflow",
        description="Sobolev-type metrics, flows and distances on closed curves",
    )
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a canonical test curve")
    p.add_argument("name", choices=CANONICAL)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("dist", help="geodesic distance upper bound")
    p.add_argument("curve0")
    p.add_argument("curve1")
    _metric_args(p)
    p.add_argument("--k-rows", type=int, default=16)
    p.add_argument("--orientation", choices=("preserving", "both"), default="preserving")
    p.add_argument("--report", default="dist_report.json")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("frechet", help="discrete Frechet distance")
    p.add_argument("curve0")
    p.add_argument("curve1")
    p.add_argument("--orientation", choices=("preserving", "both"), default="preserving")
    p.add_argument("--dinf", action="store_true", help="also report the sup-type distance")
    p.add_argument("--report", default="frechet_report.json")
    p.set_defaults(func=_cmd_frechet)

    p = sub.add_parser("grad", help="energy gradients at a curve")
    p.add_argument("curve")
    p.add_argument("--energy", choices=_ENERGY_NAMES, default="length")
    p.add_argument("--target", default="0,0", help="target point for center_of_mass")
    p.add_argument("--energy-config", default=None, help='JSON, e.g. {"energy": "center_of_mass", "target": [0, 0]}')
    _metric_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_grad)

    p = sub.add_parser("flow", help="explicit gradient descent")
    p.add_argument("curve")
    p.add_argument("--energy", choices=_ENERGY_NAMES, default="length")
    p.add_argument("--target", default="0,0")
    p.add_argument("--energy-config", default=None, help='JSON, e.g. {"energy": "center_of_mass", "target": [0, 0]}')
    _metric_args(p)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--fixed-dt", action="store_true", help="disable the adaptive policy")
    p.add_argument("--normal-projection", action="store_true")
    p.add_argument(
        "--no-conformal",
        action="store_true",
        help="drop the 1/length factor of the heat-flow normalization",
    )
    p.add_argument("--resample-every", type=int, default=10)
    p.add_argument("--out-prefix", default="flow")
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("smooth", help="smoothing constructions")
    p.add_argument("curve")
    p.add_argument("--method", choices=("direction", "fourier"), default="fourier")
    p.add_argument("--decay", choices=("abs", "log2"), default="abs")
    p.add_argument("--schedule", default="0.1,0.05,0.02,0.01")
    p.add_argument("--cutoff", type=int, default=16)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--out-prefix", default="smooth")
    p.set_defaults(func=_cmd_smooth)

    p = sub.add_parser("verify", help="run the inequality suite")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--report", default="verify_report.json")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CurveError, MetricError, SmoothingError, ValueError, OSError) as exc:
        diagnostic = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diagnostic), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
