"""Command-line front end.

    qbell eval --l 0 --alpha 1 --r 0 --theta 0
    qbell fig1 | fig2 | fig5 [--format csv|json] [--out PATH]
    qbell optimize --n-in 1.8 --l 1 --eta 1
    qbell oracle-verify [--check kappa-only] [--tol 1e-15]

Exit codes: 0 success, 1 check failures, 2 usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import entanglement, optimizer, states, verify
from .errors import QbellError
from .optimizer import OptimizationProblem
from .qfi_disturbed import (
    DisturbanceParams,
    output_photon_number_phi0,
    qfi_disturbed_finite_phi,
    qfi_disturbed_phi0,
)
from .qfi_ideal import qfi_ideal
from .states import EnergyParams, ProbeParams

FIG_L = [1.0, 0.8, 0.6, 0.4, 0.2, 0.0, -0.2, -0.4, -0.6, -0.8, -1.0]
FIG_N_IN = [0.2, 0.6, 1.0, 1.4, 1.8]
FIG5_ETA = [0.5, 1.0, 1.5]


class UsageError(Exception):
    pass


# -- formatting ----------------------------------------------------------------


def fmt(value):
    """Shortest round-trip text for floats; stable for everything else."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render(rows: list[dict], config: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        doc = {
            "config": {k: _json_value(v) if not isinstance(v, list) else [_json_value(x) for x in v]
                       for k, v in config.items()},
            "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows],
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    columns: list[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(k)) for k in columns])
    return buf.getvalue()


def emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _config(args) -> dict:
    skip = {"func", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- commands ------------------------------------------------------------------


def _probe_from_args(args, theta: float) -> ProbeParams:
    if args.alpha is not None or args.r is not None:
        if args.n0 is not None or args.n_in is not None:
            raise UsageError("give either --alpha/--r or --n0/--n-in with --beta")
        return ProbeParams.make(args.alpha or 0.0, args.r or 0.0, theta, args.l)
    if args.beta is None:
        raise UsageError("--beta is required with --n0 or --n-in")
    if args.n0 is not None:
        return states.probe_from_energy(args.n0, args.beta, theta, args.l)
    if args.n_in is not None:
        e = states.invert_energy(args.n_in, args.beta, theta, args.l)
        return states.probe_from_energy(e.n0, e.beta, theta, args.l)
    raise UsageError("specify the probe with --alpha/--r or --n0/--n-in plus --beta")


def _eval_H(p: ProbeParams, eta: float, phi: float) -> float:
    if eta == 0.0 and phi == 0.0:
        return qfi_ideal(p).H
    if phi == 0.0:
        return qfi_disturbed_phi0(p, eta).H
    return qfi_disturbed_finite_phi(p, DisturbanceParams(phi, eta)).H


def _best_theta(args) -> float:
    """Maximise H over theta with the other probe inputs held as given."""
    n = optimizer.FIG1_THETA_POINTS
    thetas = 2.0 * math.pi * np.arange(n) / n

    def score(t):
        try:
            return _eval_H(_probe_from_args(args, t), args.eta, args.phi)
        except QbellError:
            return -math.inf

    values = [score(t) for t in thetas]
    j = int(np.argmax(values))
    dt = 2.0 * math.pi / n
    t, h = optimizer.golden_max(score, thetas[j] - dt, thetas[j] + dt)
    if h <= values[j] + optimizer.TIE_TOL * max(1.0, abs(values[j])):
        t = thetas[j]
    return t % (2.0 * math.pi)


def cmd_eval(args) -> list[dict]:
    theta = _best_theta(args) if args.theta_opt else args.theta
    p = _probe_from_args(args, theta)
    c = p.component
    energy = states.component_energy(c)
    e_in = states.input_photon_number(p)
    ent = entanglement.entanglement_entropy(p)
    row = {
        "l": p.l,
        "alpha": c.alpha,
        "r": c.r,
        "theta": c.theta,
        "n0": energy.n0,
        "beta": energy.beta,
        "kappa": e_in.kappa,
        "n_in_A": e_in.n_in_A,
        "eta": args.eta,
        "phi": args.phi,
        "n_out_A": output_photon_number_phi0(p, args.eta).n_out_A,
        "H": _eval_H(p, args.eta, args.phi),
        "C": ent.C,
        "E": ent.E,
    }
    return [row]


def cmd_fig1(args) -> list[dict]:
    rows = []
    betas = np.linspace(0.0, 1.0, args.beta_points)
    for l in _floats(args.l_values):
        prob = OptimizationProblem(args.n_in, l, 0.0, "ideal")
        for beta in betas:
            row = {"l": l, "beta": float(beta)}
            try:
                theta, H, n0 = optimizer.optimal_theta(prob, float(beta))
                row.update(theta_opt=theta, n0=n0, H=H, error="")
            except QbellError as exc:
                row.update(theta_opt=math.nan, n0=math.nan, H=math.nan, error=exc.code)
            rows.append(row)
    return rows


def _result_row(res: optimizer.OptimizationResult) -> dict:
    p = res.problem
    kap = math.nan
    if res.ok:
        alpha, r = states.alpha_r_from_energy(res.n0, res.beta_opt)
        kap = float(states.kappa(alpha, r, res.theta_opt))
    return {
        "n_in": p.n_in_target,
        "l": p.l,
        "eta": p.eta,
        "objective": p.objective,
        "beta_opt": res.beta_opt,
        "theta_opt": res.theta_opt,
        "n0": res.n0,
        "n_in_A": res.n_in_A,
        "kappa": kap,
        "H": res.H_max,
        "E": res.E,
        "grid_H": res.diagnostics.get("grid_H", math.nan),
        "rounds": res.diagnostics.get("rounds", 0),
        "multiple_roots_points": res.diagnostics.get("multiple_roots_points", 0),
        "error": res.error or "",
    }


def cmd_fig2(args) -> list[dict]:
    rows = []
    for n_in in _floats(args.n_in_values):
        template = OptimizationProblem(n_in, 0.0, args.eta, args.objective)
        for res in optimizer.sweep_l(template, _floats(args.l_values)):
            rows.append(_result_row(res))
    return rows


def cmd_optimize(args) -> list[dict]:
    res = optimizer.optimize(OptimizationProblem(args.n_in, args.l, args.eta, args.objective))
    return [_result_row(res)]


def fig5_order_violations(rows: list[dict], order: str) -> list[str]:
    """Positions where H(n_out) is not ordered in eta as requested."""
    if order == "none":
        return []
    by_nout: dict[float, list[tuple[float, float]]] = {}
    for row in rows:
        by_nout.setdefault(row["n_out"], []).append((row["eta"], row["H"]))
    problems = []
    for n_out, pts in by_nout.items():
        pts.sort()
        for (e1, h1), (e2, h2) in zip(pts, pts[1:]):
            ok = h1 < h2 if order == "ascending" else h1 > h2
            if not ok:  # nan compares False, so infeasible points are reported too
                problems.append(f"n_out={n_out}: H(eta={e1})={h1} vs H(eta={e2})={h2}")
    return problems


def cmd_fig5(args) -> list[dict]:
    rows = []
    for pt in optimizer.sweep_nout(_floats(args.eta_values), _floats(args.n_out_values), args.l):
        res = pt.result
        rows.append({
            "l": pt.l,
            "eta": pt.eta,
            "n_out": pt.n_out_target,
            "n_in_A": pt.n_in_A,
            "n_out_A": pt.n_out_A,
            "beta_opt": res.beta_opt if res else math.nan,
            "theta_opt": res.theta_opt if res else math.nan,
            "n0": res.n0 if res else math.nan,
            "H": pt.H,
            "E": res.E if res else math.nan,
            "error": pt.error or "",
        })
    return rows


def cmd_oracle_verify(args) -> list[dict]:
    try:
        results = verify.run_checks(args.check, args.tol)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    return [
        {
            "check": r.name,
            "passed": r.passed,
            "worst": r.worst,
            "tol": r.tol,
            "points": r.points,
            "detail": r.detail,
        }
        for r in results
    ]


# -- parser --------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbell",
        description="QFI of squeezed quasi-Bell probes for phase estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="all derived quantities for one probe")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--n0", type=float)
    p.add_argument("--n-in", dest="n_in", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--theta-opt", action="store_true",
                   help="maximise H over theta with the other inputs fixed")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0,
                   help="finite phase for the disturbed QFI (0 = small-phase limit)")
    _common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fig1", help="ideal H(beta; l) and n0(beta; l) at fixed n_in")
    p.add_argument("--n-in", dest="n_in", type=float, default=1.0)
    p.add_argument("--l-values", default=",".join(map(str, FIG_L)))
    p.add_argument("--beta-points", type=int, default=51)
    _common(p)
    p.set_defaults(func=cmd_fig1)

    for name in ("fig2", "fig2-3-4"):
        p = sub.add_parser(name, help="optimal beta, theta, H and E versus l")
        p.add_argument("--eta", type=float, default=1.0)
        p.add_argument("--n-in-values", default=",".join(map(str, FIG_N_IN)))
        p.add_argument("--l-values", default=",".join(map(str, FIG_L[::-1])))
        p.add_argument("--objective", choices=optimizer.OBJECTIVES, default="disturbed_phi0")
        _common(p)
        p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("optimize", help="one optimisation at fixed n_in and l")
    p.add_argument("--n-in", dest="n_in", type=float, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--objective", choices=optimizer.OBJECTIVES, default="disturbed_phi0")
    _common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("fig5", help="H versus output photon number n_out for several eta")
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--eta-values", default=",".join(map(str, FIG5_ETA)))
    p.add_argument("--n-out-values", default="2,2.5,3,3.5,4")
    p.add_argument("--check-order", choices=("ascending", "descending", "none"),
                   default="ascending",
                   help="post-write check of H ordering in eta at each n_out")
    _common(p)
    p.set_defaults(func=cmd_fig5)

    p = sub.add_parser("oracle-verify", help="closed forms against the Fock oracle")
    p.add_argument("--check", default="all",
                   help="'all', 'kappa-only' or a single check name: "
                   + ", ".join(verify.CHECKS))
    p.add_argument("--tol", type=float, default=None, help="override every tolerance")
    _common(p)
    p.set_defaults(func=cmd_oracle_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rows = args.func(args)
    except (QbellError, UsageError) as exc:
        record = exc.record() if isinstance(exc, QbellError) else {
            "error": "UsageError", "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 2
    emit(render(rows, _config(args), args.format), args.out)

    if args.command == "oracle-verify":
        failed = [r["check"] for r in rows if not r["passed"]]
        for name in failed:
            sys.stderr.write(f"FAIL {name}\n")
        return 1 if failed else 0
    if args.command == "fig5":
        problems = fig5_order_violations(rows, args.check_order)
        for msg in problems:
            sys.stderr.write(f"order violation ({args.check_order}): {msg}\n")
        return 1 if problems else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
