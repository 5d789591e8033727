"""Batch command-line front end.

Subcommands wrap the library modules and emit deterministic CSV or JSON
(plus optional matplotlib figures next to the tables):

    potential     grid of (r, w, w') for one kernel
    thresholds    per-beta threshold bounds (the phase-diagram data)
    flow          multistart particle gradient flow, JSON result
    fgrid         probe-gap table over dimensions and exponents

Exit codes: 0 success, 2 argument/domain error, 3 internal invariant
violation, 4 optimization failure. All numeric output uses 17 significant
digits so values round-trip exactly; identical flags and seeds give
byte-identical output apart from the timestamp line.
"""

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import thresholds as th
from .errors import ConvergenceError, DomainError, InvariantViolation
from .flow import DEFAULT_MAX_STEPS, FlowConfig, multistart
from .potentials import (LogLimit, PowerLaw, PureAttractive, Rescaled,
                         eval_radial, eval_radial_derivative)

PROG = "mildrep"


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, int, np.integer)):
        return str(x)
    return f"{float(x):.17g}"


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv_document(command, config, header, rows, trailers=()):
    lines = [f"# {PROG} {command}"]
    for key in config:
        lines.append(f"# config: {key}={_fmt(config[key])}")
    lines.append(f"# timestamp: {_timestamp()}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    lines.extend(trailers)
    return "\n".join(lines) + "\n"


def _json_document(command, config, payload):
    doc = {"command": command, "config": config, "timestamp": _timestamp()}
    doc.update(payload)
    return json.dumps(doc, indent=2) + "\n"


def _build_kernel(kind, alpha, beta):
    """CLI layer sticks to the mildly repulsive range beta >= 2."""
    if kind in ("powerlaw", "rescaled"):
        if beta is None:
            raise DomainError(f"--beta is required for kind={kind}")
        if not (alpha > beta >= 2):
            raise DomainError(
                f"CLI restricts to alpha > beta >= 2, got ({alpha}, {beta})")
        return PowerLaw(alpha, beta) if kind == "powerlaw" else Rescaled(alpha, beta)
    if kind == "loglimit":
        if not alpha >= 2:
            raise DomainError("CLI restricts loglimit to alpha >= 2")
        return LogLimit(alpha)
    if kind == "attractive":
        if not alpha > 0:
            raise DomainError("attractive kernel needs alpha > 0")
        return PureAttractive(alpha)
    raise DomainError(f"unknown kernel kind {kind!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_potential(args):
    kernel = _build_kernel(args.kind, args.alpha, args.beta)
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    if not args.rmax > args.rmin >= 0:
        raise DomainError("need rmax > rmin >= 0")
    grid = np.linspace(args.rmin, args.rmax, args.steps)
    rows = [(r, float(eval_radial(kernel, r)),
             float(eval_radial_derivative(kernel, r))) for r in grid]
    config = {
        "kind": args.kind, "alpha": args.alpha,
        "beta": args.beta if args.beta is not None else "none",
        "rmin": args.rmin, "rmax": args.rmax, "steps": args.steps,
    }
    if args.format == "csv":
        text = _csv_document("potential", config, ["r", "w", "dw"], rows)
    else:
        text = _json_document("potential", config, {
            "rows": [{"r": r, "w": w, "dw": dw} for r, w, dw in rows]})
    _write(args.out, text)
    if args.plot:
        from .plotting import save_potential_figure
        save_potential_figure(args.plot, rows, f"{args.kind} kernel")
    return 0


def _parse_beta_grid(args):
    betas = list(args.beta or [])
    if args.beta_grid:
        try:
            lo, hi, step = (float(v) for v in args.beta_grid.split(":"))
        except ValueError:
            raise DomainError("--beta-grid must look like lo:hi:step")
        if step <= 0 or hi < lo:
            raise DomainError("--beta-grid needs step > 0 and hi >= lo")
        k = 0
        while lo + k * step <= hi + 1e-9:
            betas.append(lo + k * step)
            k += 1
    if not betas:
        raise DomainError("give at least one --beta or a --beta-grid")
    return betas


def cmd_thresholds(args):
    betas = _parse_beta_grid(args)
    reports = th.phase_sweep(
        args.n, betas, tol=args.tol, alpha_tol=args.alpha_tol,
        el_tol=args.el_tol, starts=args.starts, seed=args.seed)
    config = {
        "n": args.n, "betas": " ".join(_fmt(b) for b in betas),
        "tol": args.tol, "alpha_tol": args.alpha_tol, "el_tol": args.el_tol,
        "starts": args.starts, "seed": args.seed,
    }
    header = ["n", "beta", "underline_alpha", "alpha_plus_lo",
              "alpha_plus_hi", "alpha_star"]
    rows = [(rep.n, rep.beta, rep.underline_alpha, rep.alpha_plus_lo,
             rep.alpha_plus_hi, rep.alpha_star) for rep in reports]
    if args.format == "csv":
        text = _csv_document("thresholds", config, header, rows)
    else:
        text = _json_document("thresholds", config,
                              {"reports": [rep.to_dict() for rep in reports]})
    _write(args.out, text)
    if args.plot:
        from .plotting import save_threshold_figure
        save_threshold_figure(args.plot, reports)
    return 0


def cmd_flow(args):
    kernel = _build_kernel(args.kind, args.alpha, args.beta)
    config = FlowConfig(
        n=args.n, particles=args.particles, max_steps=args.max_steps,
        grad_tol=args.grad_tol, seed=args.seed, restarts=args.restarts,
        init_radius=args.init_radius, class_tol=args.class_tol)
    result = multistart(config, kernel)
    echo = {
        "n": args.n, "kind": args.kind, "alpha": args.alpha,
        "beta": args.beta if args.beta is not None else "none",
        "particles": args.particles, "restarts": args.restarts,
        "seed": args.seed, "max_steps": args.max_steps,
        "grad_tol": args.grad_tol,
        "init_radius": args.init_radius if args.init_radius is not None else "auto",
        "class_tol": args.class_tol,
    }
    if args.format == "csv":
        rows = list(enumerate(result.energy_trace))
        trailers = [f"# energy: {_fmt(result.energy)}",
                    f"# classification: {result.classification}",
                    f"# converged: {result.converged}"]
        text = _csv_document("flow", echo, ["step", "energy"], rows, trailers)
    else:
        text = _json_document("flow", echo, {"result": result.to_dict()})
    _write(args.out, text)
    if args.trace:
        rows = list(enumerate(result.energy_trace))
        _write(args.trace, _csv_document("flow-trace", echo,
                                         ["step", "energy"], rows))
    if args.plot:
        from .plotting import save_flow_figure
        save_flow_figure(args.plot, result)
    return 0


def cmd_fgrid(args):
    try:
        ns = sorted({int(s) for s in args.n_list.split(",") if s.strip()})
    except ValueError:
        raise DomainError("--n-list must be a comma list of integers")
    if not ns or any(n < 1 for n in ns):
        raise DomainError("--n-list needs positive integers")
    if args.steps < 1 or not args.tmax > args.tmin > 0:
        raise DomainError("need steps >= 1 and tmax > tmin > 0")
    grid = np.linspace(args.tmin, args.tmax, args.steps)
    table = []
    for n in ns:
        f = th.probe_gap(n, grid)
        flim = th.probe_gap_limit(n, grid)
        for t, fv, lv in zip(grid, f, flim):
            table.append((n, float(t), float(fv), float(lv)))
    monotone = _fgrid_monotone(ns, grid)
    config = {"n_list": ",".join(str(n) for n in ns), "tmin": args.tmin,
              "tmax": args.tmax, "steps": args.steps}
    if args.format == "csv":
        trailers = [f"# monotone_in_n_on_[2,4]: "
                    f"{'n/a' if monotone is None else str(monotone).lower()}"]
        text = _csv_document("fgrid", config, ["n", "t", "f_n", "f_inf"],
                             table, trailers)
    else:
        text = _json_document("fgrid", config, {
            "rows": [{"n": n, "t": t, "f_n": f, "f_inf": fl}
                     for n, t, f, fl in table],
            "monotone_in_n_on_2_4": monotone,
        })
    _write(args.out, text)
    if args.plot:
        from .plotting import save_fgrid_figure
        save_fgrid_figure(args.plot, table)
    return 0


def _fgrid_monotone(ns, grid) -> bool | None:
    """Is the probe gap nondecreasing in n (up to its limit) on [2,4]?

    Reported as an observation, never asserted."""
    mask = (grid >= 2.0) & (grid <= 4.0)
    if not mask.any():
        return None
    ts = grid[mask]
    hi_dim = [n for n in ns if n >= 2]
    if not hi_dim:
        return None
    curves = [th.probe_gap(n, ts) for n in hi_dim]
    curves.append(th.probe_gap_limit(hi_dim[-1], ts))
    ok = all(np.all(a <= b + 1e-12) for a, b in zip(curves, curves[1:]))
    return bool(ok)


# ---------------------------------------------------------------------------

def _add_output_args(p, default_format="csv"):
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--plot", default=None, metavar="PNG",
                   help="also render a figure to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Attractive-repulsive power-law energies: potentials, "
                    "threshold curves, particle flow.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="tabulate w(r) and w'(r)")
    p.add_argument("--kind", required=True,
                   choices=("powerlaw", "rescaled", "loglimit", "attractive"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--rmin", type=float, default=0.0)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("thresholds", help="threshold bounds per beta")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, action="append",
                   help="repeatable single beta value")
    p.add_argument("--beta-grid", default=None, metavar="LO:HI:STEP")
    p.add_argument("--tol", type=float, default=th.ROOT_TOL)
    p.add_argument("--alpha-tol", type=float, default=th.DEFAULT_ALPHA_TOL)
    p.add_argument("--el-tol", type=float, default=th.DEFAULT_EL_TOL)
    p.add_argument("--starts", type=int, default=th.DEFAULT_STARTS)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("flow", help="multistart particle gradient flow")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", default="powerlaw",
                   choices=("powerlaw", "rescaled", "loglimit", "attractive"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--particles", type=int, default=30)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--grad-tol", type=float, default=1e-10)
    p.add_argument("--init-radius", type=float, default=None)
    p.add_argument("--class-tol", type=float, default=1e-3)
    p.add_argument("--trace", default=None, metavar="CSV",
                   help="also write a step,energy trace")
    _add_output_args(p, default_format="json")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("fgrid", help="probe-gap table over (n, t)")
    p.add_argument("--n-list", required=True, help="comma list, e.g. 1,2,3,10")
    p.add_argument("--tmin", type=float, default=0.5)
    p.add_argument("--tmax", type=float, default=6.0)
    p.add_argument("--steps", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_fgrid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"{PROG}: invariant violation: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"{PROG}: optimization failed: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
