"""Command-line front end.

Subcommands classify parameters, trace and render generating curves, sweep
parameter grids, and run the verification suites.  All output is
deterministic given the flags: reports carry the producing module's error
estimates, CSV numbers use 17 significant digits, and SVG bytes are a pure
function of the inputs.

Exit codes: 0 success, 1 usage error, 2 invalid parameters, 3 numerical
failure.
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .classify import Family, classify, cylinder_energy, cylinder_radius
from .closed_forms import (
    catenoid_slab_halfwidth,
    halfperiod_heights,
    sphere_profile,
)
from .errors import (
    AxisPointError,
    DivergentIntegralError,
    GeometryError,
    NoAdmissibleRadiusError,
)
from .measures import (
    enclosed_volume_result,
    perimeter_result,
    sphere_surface,
)
from .profile_ode import (
    EventKind,
    ProfileState,
    SolveConfig,
    integrate,
    reflect_continue,
    trajectory_to_csv,
    trajectory_to_json,
)
from .render import render_gallery, render_panel, family_polyline
from .verify import SUITES, run_suite

__all__ = ["main", "run_report", "sweep_rows", "SWEEP_COLUMNS"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARAMS = 2
EXIT_NUMERICAL = 3

SWEEP_COLUMNS = (
    "n", "h", "e", "family", "x1", "x2", "x0",
    "t2", "t2_error", "perimeter", "perimeter_error",
    "volume", "volume_error",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the contract says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    return [int(part) for part in text.split(",") if part != ""]


def _axis(text):
    """Either a single value or lo:hi:count, inclusive linear spacing."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"expected VALUE or LO:HI:COUNT, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 0:
        raise ValueError("grid count must be >= 0")
    if count == 0:
        return []
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + step * k for k in range(count)]


# ---------------------------------------------------------------------------
# report assembly


def _normalized(h, e):
    # closed forms assume H >= 0; (H, E) -> (-H, -E) is the t-mirror, which
    # leaves every reported magnitude unchanged
    if h < 0.0 or (h == 0.0 and e < 0.0):
        return -h, -e
    return h, e


def run_report(command, n, h, e):
    """Structural report of the (n, H, E) profile, with error estimates."""
    cls = classify(n, h, e)
    hn, en = _normalized(h, e)
    summary = dict.fromkeys(("t1", "t2", "period", "perimeter", "volume"))
    estimates = {}
    notes = []
    if cls.family is Family.SPHERE:
        summary["t2"] = sphere_profile(hn, 0.0)
        notes.append("t2 is the pole height above the equator plane")
        per = perimeter_result(sphere_surface(n, hn))
        vol = enclosed_volume_result(sphere_surface(n, hn))
        summary["perimeter"] = per.value
        estimates["perimeter"] = per.error_estimate
        summary["volume"] = vol.value
        estimates["volume"] = vol.error_estimate
        notes.append("closed-form profile: closed_forms.sphere_profile")
    elif cls.family is Family.CATENOID:
        try:
            width = catenoid_slab_halfwidth(n, en)
            summary["t2"] = width.value
            estimates["t2"] = width.error_estimate
            notes.append("t2 is the slab half-width t_inf")
        except DivergentIntegralError:
            notes.append("n = 1: the profile is unbounded in t, no slab")
        notes.append(
            "closed-form profile: closed_forms.catenoid_generating_curve"
        )
    elif cls.family is Family.CYLINDER:
        summary["t1"] = 0.0
        summary["t2"] = 0.0
        notes.append(
            f"cylinder radius {cylinder_radius(n, hn):.17g} at the "
            f"cylinder energy {cylinder_energy(n, hn):.17g}"
        )
    elif cls.family in (Family.UNDULOID, Family.NODOID):
        t1, t2 = halfperiod_heights(n, hn, en)
        summary["t1"] = t1.value
        estimates["t1"] = t1.error_estimate
        summary["t2"] = t2.value
        estimates["t2"] = t2.error_estimate
        summary["period"] = 2.0 * t2.value
        estimates["period"] = 2.0 * t2.error_estimate
        if cls.family is Family.NODOID:
            notes.append("the generating curve self-intersects")
    else:
        notes.append("flat profile: the hyperplane t = const")
    return {
        "command": list(command),
        "params": {"n": n, "h": h, "e": e},
        "family": cls.family.value,
        "radii": {"x1": cls.x1, "x2": cls.x2, "x0": cls.x0},
        "summary": summary,
        "diagnostics": {
            "energy_drift": None,
            "events": [],
            "error_estimates": estimates,
            "notes": notes,
        },
    }


def _print_report(report, stream):
    params = report["params"]
    print(f"family: {report['family']}", file=stream)
    print(
        f"n = {params['n']}, H = {params['h']:.17g}, E = {params['e']:.17g}",
        file=stream,
    )
    radii = report["radii"]
    shown = ", ".join(
        f"{k} = {v:.17g}" for k, v in radii.items() if v is not None
    )
    if shown:
        print(f"radii: {shown}", file=stream)
    estimates = report["diagnostics"]["error_estimates"]
    for key, value in report["summary"].items():
        if value is None:
            continue
        err = estimates.get(key)
        tail = f" (error estimate {err:.3g})" if err is not None else ""
        print(f"{key} = {value:.17g}{tail}", file=stream)
    for note in report["diagnostics"]["notes"]:
        print(f"note: {note}", file=stream)


def cmd_classify(args):
    report = run_report(args.raw_argv, args.n, args.h, args.e)
    with _out_stream(args.out) as stream:
        if args.json:
            json.dump(report, stream, indent=2)
            stream.write("\n")
        else:
            _print_report(report, stream)
    return EXIT_OK


# ---------------------------------------------------------------------------
# trace


def cmd_trace(args):
    config = SolveConfig(
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        axis_epsilon=args.axis_epsilon,
        max_arclength=args.max_arclength,
        stop_event=(
            (EventKind(args.stop_event), args.stop_count)
            if args.stop_event
            else None
        ),
    )
    explicit = [v is not None for v in (args.x0, args.t0, args.sigma0)]
    if any(explicit):
        if args.x0 is None or args.sigma0 is None:
            raise ValueError("an explicit start needs both --x0 and --sigma0")
        initial = ProfileState(args.x0, args.t0 or 0.0, args.sigma0)
        traj = integrate(args.n, args.h, initial=initial, config=config)
    else:
        if args.e is None:
            raise ValueError("pass either --e or an explicit start")
        traj = integrate(args.n, args.h, e=args.e, config=config)
    if args.reflect:
        traj = reflect_continue(traj, copies=args.reflect)
    with _out_stream(args.out) as stream:
        if args.format == "json":
            json.dump(trajectory_to_json(traj), stream, indent=2)
            stream.write("\n")
        else:
            trajectory_to_csv(traj, stream)
    return EXIT_OK


# ---------------------------------------------------------------------------
# render


def _load_trace(path):
    """Polyline and default title from a saved trace, JSON or CSV."""
    with open(path, "r", encoding="utf-8") as handle:
        head = handle.read(1)
        handle.seek(0)
        if head == "{":
            doc = json.load(handle)
            samples = doc.get("samples")
            if not samples:
                raise ValueError(f"{path}: no samples in trace")
            polyline = [(row[1], row[2]) for row in samples]
            try:
                title = f"trace (n = {doc['n']}, H = {doc['h']:.6g})"
            except (KeyError, TypeError, ValueError):
                title = f"trace ({os.path.basename(path)})"
            return polyline, title
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"x", "t"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: trace CSV needs x and t columns")
        polyline = [(float(row["x"]), float(row["t"])) for row in reader]
        if not polyline:
            raise ValueError(f"{path}: no samples in trace")
        return polyline, f"trace ({os.path.basename(path)})"


def cmd_render(args):
    if args.panel:
        document = render_gallery(args.n)
    elif args.trace:
        polyline, title = _load_trace(args.trace)
        document = render_panel([polyline], args.title or title)
    else:
        if args.h is None or args.e is None:
            raise ValueError("pass --panel all, --trace FILE, or --h and --e")
        cls = classify(args.n, args.h, args.e)
        polyline = family_polyline(args.n, args.h, args.e)
        document = render_panel([polyline], args.title or cls.family.value)
    with _out_stream(args.out) as stream:
        stream.write(document)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args):
    report = run_suite(args.suite, seed=args.seed)
    with _out_stream(args.out) as stream:
        if args.json:
            json.dump(report, stream, indent=2)
            stream.write("\n")
        else:
            for check in report["checks"]:
                mark = "ok  " if check["passed"] else "FAIL"
                if check["error"] is None:
                    body = check["detail"]
                else:
                    body = (
                        f"error {check['error']:.3e} <= "
                        f"tolerance {check['tolerance']:.1e}"
                    )
                    if not check["passed"]:
                        body = body.replace("<=", ">")
                print(f"{mark} {check['name']}: {body}", file=stream)
            verdict = "passed" if report["passed"] else "FAILED"
            print(
                f"suite {report['suite']!r} ({len(report['checks'])} checks):"
                f" {verdict}",
                file=stream,
            )
    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# sweep


def _sweep_row(n, h, e):
    row = dict.fromkeys(SWEEP_COLUMNS)
    row.update({"n": n, "h": h, "e": e})
    try:
        cls = classify(n, h, e)
    except NoAdmissibleRadiusError:
        return row
    hn, en = _normalized(h, e)
    row.update({"family": cls.family.value, "x1": cls.x1, "x2": cls.x2,
                "x0": cls.x0})
    if cls.family in (Family.UNDULOID, Family.NODOID):
        t2 = halfperiod_heights(n, hn, en)[1]
        row["t2"], row["t2_error"] = t2.value, t2.error_estimate
    elif cls.family is Family.CYLINDER:
        row["t2"], row["t2_error"] = 0.0, 0.0
    elif cls.family is Family.SPHERE:
        row["t2"] = sphere_profile(hn, 0.0)
        per = perimeter_result(sphere_surface(n, hn))
        vol = enclosed_volume_result(sphere_surface(n, hn))
        row["perimeter"], row["perimeter_error"] = per.value, per.error_estimate
        row["volume"], row["volume_error"] = vol.value, vol.error_estimate
    elif cls.family is Family.CATENOID:
        try:
            width = catenoid_slab_halfwidth(n, en)
            row["t2"], row["t2_error"] = width.value, width.error_estimate
        except DivergentIntegralError:
            pass
    return row


def _worker_count(jobs):
    cap = os.cpu_count() or 1
    env = os.environ.get("CC_DELAUNAY_THREADS")
    if env is not None:
        cap = min(cap, max(1, int(env)))
    return max(1, min(cap, jobs))


def sweep_rows(ns, hs, es):
    """Sweep the grid; rows come back in grid order (n outer, e inner)."""
    grid = [(n, h, e) for n in ns for h in hs for e in es]
    if not grid:
        return []
    with ThreadPoolExecutor(max_workers=_worker_count(len(grid))) as pool:
        return list(pool.map(lambda p: _sweep_row(*p), grid))


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def cmd_sweep(args):
    rows = sweep_rows(args.n, args.h, args.e)
    with _out_stream(args.out) as stream:
        if args.format == "json":
            json.dump({"rows": rows}, stream, indent=2)
            stream.write("\n")
        else:
            print(",".join(SWEEP_COLUMNS), file=stream)
            for row in rows:
                print(
                    ",".join(_csv_cell(row[col]) for col in SWEEP_COLUMNS),
                    file=stream,
                )
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring


class _out_stream:
    """stdout by default, a file when --out is passed."""

    def __init__(self, path):
        self._path = path
        self._handle = None

    def __enter__(self):
        if self._path is None or self._path == "-":
            return sys.stdout
        self._handle = open(self._path, "w", encoding="utf-8", newline="")
        return self._handle

    def __exit__(self, *exc):
        if self._handle is not None:
            self._handle.close()
        return False


def build_parser():
    parser = _Parser(
        prog="heisenberg-cmc",
        description=__doc__.splitlines()[0],
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify", parents=[], help="name the profile family")
    p.add_argument("--n", type=int, required=True, help="Heisenberg index")
    p.add_argument("--h", type=float, required=True, help="mean curvature H")
    p.add_argument("--e", type=float, required=True, help="energy E")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("trace", help="integrate and export a profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--e", type=float, help="energy of the canonical start")
    p.add_argument("--x0", type=float, help="explicit start radius")
    p.add_argument("--t0", type=float, help="explicit start height")
    p.add_argument("--sigma0", type=float, help="explicit start angle")
    p.add_argument("--max-arclength", type=float, default=50.0)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--axis-epsilon", type=float, default=1e-6)
    p.add_argument(
        "--stop-event",
        choices=[kind.value for kind in EventKind],
        help="stop at the k-th occurrence of this event",
    )
    p.add_argument("--stop-count", type=int, default=1)
    p.add_argument(
        "--reflect", type=int, default=0, metavar="K",
        help="extend by K mirror reflections at a critical radius",
    )
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("render", help="draw generating curves as SVG")
    p.add_argument(
        "--panel", choices=("all",),
        help="render the six-family gallery",
    )
    p.add_argument("--trace", help="render a saved trace (JSON or CSV)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--h", type=float)
    p.add_argument("--e", type=float)
    p.add_argument("--title", help="panel title override")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate a parameter grid")
    p.add_argument(
        "--n", type=_int_list, required=True,
        help="comma-separated dimension indices",
    )
    p.add_argument(
        "--h", type=_axis, required=True,
        help="H axis: VALUE or LO:HI:COUNT",
    )
    p.add_argument(
        "--e", type=_axis, required=True,
        help="E axis: VALUE or LO:HI:COUNT",
    )
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.raw_argv = argv
    try:
        return args.func(args)
    except (NoAdmissibleRadiusError, AxisPointError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
