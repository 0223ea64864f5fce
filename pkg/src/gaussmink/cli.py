"""Command-line front end.

Subcommands cover the whole toolkit: critical constants, constant-solution
roots, good-set solving, half-period evaluation and scans, trajectory
shooting, closed-orbit search, the curvature-density solver, the
degenerating counterexample sequence, and boundary-measure computation.

Exit codes: 0 success, 2 usage or precondition error, 3 partial scan,
4 numerical/solver failure, 5 I/O failure.  Output formatting is fixed at
17 significant digits so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import gauss_measure, good_set, minkowski_pde, ode_shoot, scalar_kernel, theta_quad
from .errors import (
    HomotopyStallError,
    InvalidPolygonError,
    ParityError,
    ToolkitError,
)
from .scalar_kernel import Params
from .support import DensityFn, SupportFn, grid_angles, is_antipodally_even
from .support import PARITY_EVEN, PARITY_GENERAL


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _emit_text(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(path, header, columns) -> None:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(float(v)) for v in row))
    _emit_text("\n".join(lines) + "\n", path)


def _emit_json(obj, path) -> None:
    _emit_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", path)


def _parse_float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}")


def parse_density_spec(spec: str, n: int) -> np.ndarray:
    """Evaluate a term list like 'const:1,cos:2:0.1,sin:3:0.05' on the grid."""
    thetas = grid_angles(n)
    values = np.zeros(n)
    for raw in spec.split(","):
        term = raw.strip()
        if not term:
            continue
        parts = term.split(":")
        try:
            if parts[0] == "const" and len(parts) == 2:
                values += float(parts[1])
            elif parts[0] in ("cos", "sin") and len(parts) == 3:
                k = int(parts[1])
                if k < 1:
                    raise ValueError
                amp = float(parts[2])
                values += amp * (np.cos(k * thetas) if parts[0] == "cos" else np.sin(k * thetas))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(
                f"bad density term {term!r}; use const:a, cos:k:a, or sin:k:a"
            ) from None
    return values


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


# ---------------------------------------------------------------------------
# subcommands


def cmd_constants(args) -> int:
    p = _check_p(args.p)
    cp = scalar_kernel.c_threshold(p)
    payload = {
        "c_p": cp,
        "density_threshold": scalar_kernel.density_threshold(p),
        "critical_radius": scalar_kernel.critical_radius(p),
    }
    if args.json:
        _emit_json(payload, args.out)
    else:
        text = (
            f"c_p = {_fmt(payload['c_p'])}\n"
            f"density threshold c_p/(2 pi) = {_fmt(payload['density_threshold'])}\n"
            f"critical radius sqrt(2 - p) = {_fmt(payload['critical_radius'])}\n"
        )
        _emit_text(text, args.out)
    return 0


def cmd_roots(args) -> int:
    p = _check_p(args.p)
    params = Params(p=p, c=args.c)
    count = scalar_kernel.count_constant_solutions(params)
    lines = [f"count = {count}"]
    if count:
        roots = scalar_kernel.constant_radii(params)
        lines.append(f"m1 = {_fmt(roots.m1)}")
        lines.append(f"m2 = {_fmt(roots.m2)}")
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def cmd_goodset(args) -> int:
    p = _check_p(args.p)
    h0 = good_set.solve_h0(args.c, p, args.s)
    gs = good_set.GoodSet(c=args.c, h0=h0, p=p, s=args.s)
    bound = good_set.aspect_bound(args.c, p)
    text = (
        f"h0 = {_fmt(gs.h0)}\n"
        f"h1 = {_fmt(gs.h1)}\n"
        f"level = {_fmt(gs.level)}\n"
        f"aspect bound = {_fmt(bound.value) if bound.finite else 'inf'}\n"
    )
    _emit_text(text, args.out)
    return 0


def cmd_theta(args) -> int:
    p = _check_p(args.p)
    if args.h0 is None and args.c is None:
        raise ValueError("need --c, or --h0 from which the level follows")
    if args.h0 is None:
        h0, c = good_set.solve_h0(args.c, p, args.s), args.c
    else:
        h0 = args.h0
        c = args.c if args.c is not None else good_set.c_of_p_path(h0, args.s, p)
    gs = good_set.GoodSet(c=c, h0=h0, p=p, s=args.s)
    fn = theta_quad.theta if args.form == "raw" else theta_quad.theta_normalized
    res = fn(gs, args.tol)
    dist, k = theta_quad.pi_over_k_distance(res.value)
    payload = {
        "theta": res.value,
        "est_error": res.est_error,
        "form": res.form,
        "h0": h0,
        "c": c,
        "gt_pi": res.value > math.pi,
        "dist_pi_over_k": dist,
        "k_nearest": k,
    }
    if args.json:
        _emit_json(payload, args.out)
    else:
        text = (
            f"theta = {_fmt(res.value)}\n"
            f"est error = {_fmt(res.est_error)}\n"
            f"h0 = {_fmt(h0)}\n"
            f"c = {_fmt(c)}\n"
            f"gt_pi = {'true' if payload['gt_pi'] else 'false'}\n"
            f"dist to nearest pi/k = {_fmt(dist)} (k = {k})\n"
        )
        _emit_text(text, args.out)
    return 0


def cmd_theta_scan(args) -> int:
    grid = theta_quad.ScanGrid(
        p_values=_parse_float_list(args.p_values),
        s_values=_parse_float_list(args.s_values),
        n_c=args.n_c,
        frac_lo=args.frac_lo,
        frac_hi=args.frac_hi,
    )
    report = theta_quad.theta_scan(
        grid, tol=args.tol, jobs=args.jobs, dp_checks=not args.no_dp
    )
    _emit_text(report.csv_text(), args.out)
    if args.json:
        report.write_json(args.json)
    return 3 if report.n_errors else 0


def cmd_shoot(args) -> int:
    p = _check_p(args.p)
    params = Params(p=p, c=args.c)
    if args.half_period:
        res = ode_shoot.shoot_half_period(params, args.h0, tol=args.tol)
        traj = res.trajectory
        summary = (
            f"half period = {_fmt(res.theta_star)}\n"
            f"h max = {_fmt(res.h_max)}\n"
            f"aspect observed = {_fmt(res.s_observed)}\n"
            f"energy drift = {_fmt(traj.max_drift)}\n"
        )
        sys.stdout.write(summary)
        if args.out:
            energy = ode_shoot.first_integral(traj.h, traj.hp, params)
            _emit_csv(args.out, ("theta", "h", "hp", "E"), (traj.thetas, traj.h, traj.hp, energy))
        return 0
    traj = ode_shoot.integrate(
        params,
        args.h0,
        hp0=args.hp0,
        theta_max=args.theta_max,
        tol=args.tol,
        n_samples=args.samples,
    )
    energy = ode_shoot.first_integral(traj.h, traj.hp, params)
    _emit_csv(args.out, ("theta", "h", "hp", "E"), (traj.thetas, traj.h, traj.hp, energy))
    sys.stdout.write(f"energy drift = {_fmt(traj.max_drift)}\n")
    return 0


def cmd_find_closed(args) -> int:
    p = _check_p(args.p)
    params = Params(p=p, c=args.c)
    scan = ode_shoot.find_closed_solutions(
        params, n_h0=args.n_h0, tol=args.tol, candidate_tol=args.dist_tol
    )
    lines = [
        f"cells = {scan.h0_values.size}",
        f"failures = {scan.n_failures}",
        f"min dist to pi/k = {_fmt(scan.min_dist)} at h0 = {_fmt(scan.argmin_h0)}",
        f"candidates (dist < {_fmt(scan.candidate_tol)}) = {len(scan.candidates)}",
        f"brackets = {len(scan.brackets)}",
    ]
    for h0, k in scan.candidates:
        lines.append(f"candidate: h0 = {_fmt(h0)}, k = {k}")
    for lo, hi, k in scan.brackets:
        lines.append(f"bracket: h0 in [{_fmt(lo)}, {_fmt(hi)}], k = {k}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit_csv(
            args.out,
            ("h0", "theta", "dist_pi_over_k", "k"),
            (scan.h0_values, scan.theta_values, scan.dist_values, scan.k_values.astype(float)),
        )
    return 0


def cmd_solve(args) -> int:
    p = _check_p(args.p)
    opts = minkowski_pde.SolveOptions(
        tol=args.tol,
        max_newton=args.max_newton,
        dt_init=args.dt_init,
        dt_min=args.dt_min,
        dt_max=args.dt_max,
        unsafe=args.unsafe,
    )
    values = parse_density_spec(args.f, args.n)
    target = None
    if args.manufactured:
        parity = PARITY_EVEN if is_antipodally_even(values) else PARITY_GENERAL
        target = SupportFn(values, parity=parity)
        f = DensityFn.from_values(gauss_measure.smooth_measure_density(target, p))
    else:
        f = DensityFn.from_values(values)
    report = minkowski_pde.solve(f, p, opts)
    sol = report.solution
    lines = [
        f"residual sup = {_fmt(report.residual_sup)}",
        f"homotopy steps = {report.homotopy_steps}",
        f"base level c0 = {_fmt(report.c0)}",
        f"h range = [{_fmt(report.apriori.h_min)}, {_fmt(report.apriori.h_max)}]",
    ]
    if target is not None:
        sup_err = float(np.max(np.abs(sol.values - target.values)))
        lines.append(f"manufactured sup-error = {_fmt(sup_err)}")
    if args.tau is not None:
        checklist = minkowski_pde.verify_apriori(report, args.tau)
        bad = checklist.violations()
        if not checklist.applicable:
            lines.append(f"apriori: certificate tau = {_fmt(args.tau)} too weak to imply bounds")
        elif bad:
            lines.append("apriori violations: " + ",".join(bad))
        else:
            lines.append("apriori: all implied bounds hold")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        res = minkowski_pde.residual(sol, f, p)
        _emit_csv(
            args.out,
            ("theta", "h", "hp", "hpp", "residual"),
            (sol.thetas, sol.values, sol.derivative(1), sol.derivative(2), res),
        )
    if args.report:
        payload = {
            "p": p,
            "c0": report.c0,
            "residual_sup": report.residual_sup,
            "homotopy_steps": report.homotopy_steps,
            "newton_residuals": report.newton_residuals,
            "parity": sol.parity,
            "apriori": {
                "h_min": report.apriori.h_min,
                "h_max": report.apriori.h_max,
                "radius_min": report.apriori.radius_min,
                "radius_max": report.apriori.radius_max,
                "curvature_min": report.apriori.curvature_min,
                "curvature_max": report.apriori.curvature_max,
            },
        }
        _emit_json(payload, args.report)
    return 0


def cmd_counterexample(args) -> int:
    support, density = minkowski_pde.du_counterexample(args.p, args.j, n=args.n)
    min_h = float(np.min(support.values))
    lines = [
        f"min h = {_fmt(min_h)}",
        f"predicted min h = {_fmt(args.j ** (-2.0 / (2.0 - args.p)))}",
        f"f inf = {_fmt(float(np.min(density.values)))}",
        f"f sup = {_fmt(float(np.max(density.values)))}",
        f"tau certificate = {_fmt(density.tau)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit_csv(
            args.out,
            ("theta", "h", "f"),
            (support.thetas, support.values, density.values),
        )
    return 0


def _load_polygon(path) -> gauss_measure.Polygon:
    verts = np.loadtxt(path, delimiter=",", ndmin=2)
    return gauss_measure.Polygon(verts)


def cmd_measure(args) -> int:
    p = _check_p(args.p)
    if args.convergence:
        ns = tuple(int(x) for x in _parse_float_list(args.convergence))
        curve = gauss_measure.measure_convergence_check(ns, args.r, p, mode=args.mode)
        _emit_csv(
            args.out,
            ("n", "gap"),
            (np.array(curve.ns, dtype=float), curve.gaps),
        )
        sys.stdout.write(
            f"disk total = {_fmt(curve.disk_total)}\n"
            f"monotone decreasing = {'true' if curve.is_decreasing else 'false'}\n"
        )
        return 0
    if args.poly:
        poly = _load_polygon(args.poly)
    elif args.regular:
        poly = gauss_measure.regular_ngon(args.regular, args.r, mode=args.mode)
    else:
        raise ValueError("measure needs --poly FILE, --regular N, or --convergence LIST")
    measure = gauss_measure.polygon_measure(poly, p)
    _emit_csv(args.out, ("angle", "weight"), (measure.angles, measure.weights))
    sys.stdout.write(f"total = {_fmt(measure.total)}\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussmink",
        description="Numerical toolkit for the planar weighted-Gaussian "
        "Minkowski problem with exponent 0 <= p <= 1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("constants", help="critical level and radius for an exponent")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--json", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_constants)

    q = sub.add_parser("roots", help="constant solutions at a given level")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_roots)

    q = sub.add_parser("goodset", help="minimum level matching a target aspect")
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_goodset)

    q = sub.add_parser("theta", help="half period of one oscillation")
    q.add_argument("--c", type=float, default=None)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--h0", type=float, default=None)
    q.add_argument("--tol", type=float, default=1e-9)
    q.add_argument("--form", choices=("raw", "normalized"), default="normalized")
    q.add_argument("--json", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_theta)

    q = sub.add_parser("theta-scan", help="half-period scan over a (c, p, s) grid")
    q.add_argument("--p-values", default="0,0.25,0.5,0.75,1")
    q.add_argument("--s-values", default="1.1,2,5")
    q.add_argument("--n-c", type=int, default=10)
    q.add_argument("--frac-lo", type=float, default=0.05)
    q.add_argument("--frac-hi", type=float, default=0.95)
    q.add_argument("--tol", type=float, default=1e-9)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--no-dp", action="store_true", help="skip exponent-direction probes")
    q.add_argument("--out", default=None)
    q.add_argument("--json", default=None)
    q.set_defaults(func=cmd_theta_scan)

    q = sub.add_parser("shoot", help="integrate the radial oscillation equation")
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--h0", type=float, required=True)
    q.add_argument("--hp0", type=float, default=0.0)
    q.add_argument("--theta-max", type=float, default=8.0 * math.pi)
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--samples", type=int, default=2001)
    q.add_argument("--half-period", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_shoot)

    q = sub.add_parser("find-closed", help="scan minimum levels for closed orbits")
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--n-h0", type=int, default=200)
    q.add_argument("--tol", type=float, default=1e-9)
    q.add_argument("--dist-tol", type=float, default=1e-4)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_find_closed)

    q = sub.add_parser("solve", help="solve the curvature-density equation")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--f", required=True, help="density terms, e.g. 'const:1,cos:2:0.1'")
    q.add_argument("--n", type=int, default=512)
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--max-newton", type=int, default=30)
    q.add_argument("--dt-init", type=float, default=0.1)
    q.add_argument("--dt-min", type=float, default=1e-6)
    q.add_argument("--dt-max", type=float, default=0.25)
    q.add_argument("--unsafe", action="store_true")
    q.add_argument(
        "--manufactured",
        action="store_true",
        help="treat --f as a support function, solve for it from its own density",
    )
    q.add_argument("--tau", type=float, default=None, help="verify a priori bounds")
    q.add_argument("--out", default=None)
    q.add_argument("--report", default=None)
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("counterexample", help="degenerating sequence member")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--n", type=int, default=4096)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_counterexample)

    q = sub.add_parser("measure", help="weighted Gaussian boundary measure")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--poly", default=None, help="CSV of vertex coordinates")
    q.add_argument("--regular", type=int, default=None)
    q.add_argument("--r", type=float, default=1.0)
    q.add_argument("--mode", choices=("inscribed", "circumscribed"), default="inscribed")
    q.add_argument("--convergence", default=None, help="comma list of n-gon sizes")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_measure)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParityError, InvalidPolygonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HomotopyStallError as exc:
        print(f"error: {exc} (reached t = {exc.t_reached:.6f})", file=sys.stderr)
        return 4
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
