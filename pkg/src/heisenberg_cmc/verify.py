"""Self-check suites behind the verify subcommand.

Each suite runs a battery of numeric checks against independent references
(closed forms, conserved quantities, cross-validated pipelines) and reports
them in a machine-readable structure.  Checks trap exceptions, so a broken
build fails its checks instead of crashing the runner.
"""

import math

import numpy as np

from .classify import Family, classify, cylinder_energy, cylinder_radius
from .closed_forms import (
    catenoid_generating_curve,
    catenoid_slab_halfwidth,
    halfperiod_heights,
    nodoid_halfperiod,
    sphere_profile,
    unduloid_halfperiod,
)
from .curvature import (
    GraphSurface,
    RotationalSurface,
    chmy_identity_residual,
    graph_jet,
    mean_curvature_general,
    mean_curvature_graph_h1,
    mean_curvature_rotational,
)
from .errors import DivergentIntegralError, NoAdmissibleRadiusError
from .measures import (
    RotationalProfile,
    cylinder_band,
    enclosed_volume,
    first_variation_check,
    perimeter,
    sphere_surface,
    unit_sphere_area,
)
from .profile_ode import (
    EventKind,
    ProfileState,
    SolveConfig,
    energy,
    initial_state,
    integrate,
)

__all__ = ["SUITES", "run_suite"]

SUITES = ("energy", "closed-forms", "curvature", "classification",
          "measures", "all")


def _check(checks, name, error, tolerance, detail=""):
    checks.append({
        "name": name,
        "passed": bool(error <= tolerance),
        "error": float(error),
        "tolerance": float(tolerance),
        "detail": detail,
    })


def _failed(checks, name, exc):
    checks.append({
        "name": name,
        "passed": False,
        "error": None,
        "tolerance": None,
        "detail": f"{type(exc).__name__}: {exc}",
    })


def _guard(checks, name):
    """Decorator running one named check body, trapping exceptions."""

    def wrap(body):
        try:
            body()
        except Exception as exc:  # noqa: BLE001 - report, don't crash
            _failed(checks, name, exc)

    return wrap


# ---------------------------------------------------------------------------
# suites


def _suite_energy(checks, rng):
    # 5x5 (H, E) grid per n; trajectories capped at arclength 50 or four
    # full periods, whichever comes first
    fractions = (-0.5, 0.0, 0.4, 0.8, 1.0)
    for n in (1, 2, 3):
        name = f"energy-drift-n{n}"

        @_guard(checks, name)
        def body(n=n, name=name):
            worst = 0.0
            for h in (0.25, 0.5, 1.0, 1.5, 2.0):
                ecyl = cylinder_energy(n, h)
                for frac in fractions:
                    e = frac * ecyl
                    cfg = SolveConfig(
                        max_arclength=50.0,
                        drift_tolerance=1e-9,
                        stop_event=(EventKind.CRITICAL_RADIUS, 8),
                    )
                    traj = integrate(n, h, e=e, config=cfg)
                    drift = traj.energy_drift() / (1.0 + abs(e))
                    worst = max(worst, drift)
            _check(checks, name, worst, 1e-9,
                   "max relative drift over the (H, E) grid")


def _suite_closed_forms(checks, rng):
    @_guard(checks, "sphere-ode-vs-closed-form")
    def body():
        worst = 0.0
        for h in (0.5, 1.0, 2.0):
            cfg = SolveConfig(stop_event=(EventKind.AXIS_CONTACT, 1),
                              axis_epsilon=1e-3)
            traj = integrate(1, h, initial=ProfileState(1.0 / h, 0.0, 0.0),
                             config=cfg)
            for x, t in traj.states[:, :2]:
                worst = max(worst, abs(t - sphere_profile(h, min(x, 1.0 / h))))
        _check(checks, "sphere-ode-vs-closed-form", worst, 1e-6)

    @_guard(checks, "catenoid-ode-vs-closed-form")
    def body():
        worst = 0.0
        for e in (0.5, 1.0, 2.0):
            cfg = SolveConfig(max_arclength=12.0)
            traj = integrate(1, 0.0, e=e, config=cfg)
            for x, t in traj.states[:, :2]:
                worst = max(worst, abs(x - catenoid_generating_curve(e, t)[0]))
        _check(checks, "catenoid-ode-vs-closed-form", worst, 1e-6)

    @_guard(checks, "nodoid-halfperiod-vs-ode")
    def body():
        worst = 0.0
        for n, h, e in ((1, 1.0, -0.1), (2, 0.75, -0.3), (1, 2.0, -0.05)):
            reg = nodoid_halfperiod(n, h, e).value
            cfg = SolveConfig(stop_event=(EventKind.CRITICAL_RADIUS, 1))
            traj = integrate(n, h, e=e, config=cfg)
            worst = max(worst, abs(reg - abs(traj.states[-1, 1])))
        _check(checks, "nodoid-halfperiod-vs-ode", worst, 1e-6)
        _check(checks, "nodoid-n1-parameter-free",
               abs(nodoid_halfperiod(1, 1.0, -0.1).value - math.pi / 4.0),
               1e-9, "t2 = pi/(4 H^2) for every E when n = 1")

    @_guard(checks, "unduloid-halfperiod-vs-ode")
    def body():
        worst = 0.0
        for n, h, frac in ((1, 1.0, 0.4), (2, 0.75, 0.7)):
            e = frac * cylinder_energy(n, h)
            reg = unduloid_halfperiod(n, h, e).value
            cfg = SolveConfig(stop_event=(EventKind.CRITICAL_RADIUS, 1))
            traj = integrate(n, h, e=e, config=cfg)
            worst = max(worst, abs(reg - traj.states[-1, 1]))
        _check(checks, "unduloid-halfperiod-vs-ode", worst, 1e-6)

    @_guard(checks, "slab-halfwidth-scheme-agreement")
    def body():
        a = catenoid_slab_halfwidth(2, 1.0, scheme="substitution").value
        b = catenoid_slab_halfwidth(2, 1.0, scheme="tanh_sinh").value
        _check(checks, "slab-halfwidth-scheme-agreement", abs(a - b), 1e-8)
        try:
            catenoid_slab_halfwidth(1, 1.0)
            _failed(checks, "slab-divergence-detected",
                    AssertionError("n=1 slab halfwidth did not diverge"))
        except DivergentIntegralError:
            _check(checks, "slab-divergence-detected", 0.0, 1.0,
                   "n=1 integral correctly reported divergent")


def _suite_curvature(checks, rng):
    @_guard(checks, "graph-vs-general")
    def body():
        worst = 0.0
        used = 0
        while used < 100:
            c = rng.uniform(-1.0, 1.0, size=6)
            x, y = rng.uniform(-2.0, 2.0, size=2)
            grad = (2 * c[0] * x + c[1] * y + c[3],
                    c[1] * x + 2 * c[2] * y + c[4])
            hess = ((2 * c[0], c[1]), (c[1], 2 * c[2]))
            a, b = grad[0] - y, grad[1] + x
            if a * a + b * b < 1e-2:
                continue
            used += 1
            hg = mean_curvature_graph_h1(grad, hess, (x, y))
            hj = mean_curvature_general(graph_jet((x, y), grad, hess))
            worst = max(worst, abs(hg - hj))
        _check(checks, "graph-vs-general", worst, 1e-8,
               "100 random radial-graph jets")

    @_guard(checks, "rotational-vs-general")
    def body():
        worst = 0.0
        for psi in (0.4, 1.0, 2.2):
            x, t, dx, dt, ddx, ddt = _sphere_curve(1.0, psi)
            hr = mean_curvature_rotational(x, dx, ddx, dt, ddt, 2)
            surf = RotationalSurface(2, lambda s: _sphere_curve(1.0, s))
            hj = mean_curvature_general(surf.jet([psi, 0.1, 0.0, -0.2]))
            worst = max(worst, abs(hr - hj))
        _check(checks, "rotational-vs-general", worst, 1e-8)

    @_guard(checks, "characteristic-identity-residual")
    def body():
        worst = chmy_identity_residual(
            RotationalSurface(1, lambda s: (1.0, s, 0.0, 1.0, 0.0, 0.0)),
            [0.3, 0.2])
        plane = GraphSurface(lambda x, y: 0.0,
                             lambda x, y: (0.0, 0.0),
                             lambda x, y: ((0.0, 0.0), (0.0, 0.0)))
        worst = max(worst, chmy_identity_residual(plane, [1.0, 0.5]))

        def catenoid(s):
            r = math.sqrt(s * s + 1.0)
            return (r, s, s / r, 1.0, 1.0 / r ** 3, 0.0)

        surf = RotationalSurface(1, catenoid)
        for s in (-2.0, 0.0, 1.5):
            worst = max(worst, chmy_identity_residual(surf, [s, 0.1]))
        _check(checks, "characteristic-identity-residual", worst, 1e-6,
               "cylinder, plane, catenoid")


def _sphere_curve(h, psi):
    from .closed_forms import sphere_generating_curve

    return sphere_generating_curve(h, psi)


def _expected_family(n, h, e):
    """Independent sign table; None encodes no admissible radius."""
    if h < 0.0 or (h == 0.0 and e < 0.0):
        h, e = -h, -e
    if h == 0.0:
        return Family.HYPERPLANE if e == 0.0 else Family.CATENOID
    if e == 0.0:
        return Family.SPHERE
    if e < 0.0:
        return Family.NODOID
    ecyl = cylinder_energy(n, h)
    if abs(e - ecyl) <= 1e-12 * max(1.0, ecyl):
        return Family.CYLINDER
    return Family.UNDULOID if e < ecyl else None


def _suite_classification(checks, rng):
    @_guard(checks, "classification-truth-table")
    def body():
        mismatches = 0
        bad_radii = 0
        for _ in range(1000):
            n = int(rng.integers(1, 4))
            pick = rng.uniform()
            h = 0.0 if pick < 0.15 else float(rng.uniform(-2.0, 2.0))
            pick = rng.uniform()
            if pick < 0.15:
                e = 0.0
            elif pick < 0.3 and h != 0.0:
                e = cylinder_energy(n, abs(h)) * (1.0 if h > 0.0 else -1.0)
            else:
                e = float(rng.uniform(-1.5, 1.5))
            expected = _expected_family(n, h, e)
            try:
                got = classify(n, h, e)
            except NoAdmissibleRadiusError:
                got = None
            if (got.family if got else None) is not expected:
                mismatches += 1
                continue
            if got and got.family in (Family.UNDULOID, Family.NODOID):
                if not got.x1 <= got.x0 <= got.x2:
                    bad_radii += 1
        _check(checks, "classification-truth-table", float(mismatches), 0.0,
               "1000 sampled (n, H, E) against the sign table")
        _check(checks, "classification-radii-ordered", float(bad_radii), 0.0)

    @_guard(checks, "classification-sign-normalization")
    def body():
        flips = 0
        for _ in range(200):
            n = int(rng.integers(1, 4))
            h = float(rng.uniform(-2.0, 2.0))
            e = float(rng.uniform(-1.5, 1.5))
            try:
                a = classify(n, h, e).family
            except NoAdmissibleRadiusError:
                a = None
            try:
                b = classify(n, -h, -e).family
            except NoAdmissibleRadiusError:
                b = None
            if a is not b:
                flips += 1
        _check(checks, "classification-sign-normalization", float(flips), 0.0,
               "(H, E) -> (-H, -E) leaves the family unchanged")


def _suite_measures(checks, rng):
    @_guard(checks, "cylinder-measures-exact")
    def body():
        band = cylinder_band(1, 1.0, 1.0)
        err = abs(perimeter(band) - 2.0 * math.pi)
        err = max(err, abs(enclosed_volume(band) - math.pi))
        _check(checks, "cylinder-measures-exact", err, 1e-12)

    @_guard(checks, "sphere-volume-frozen")
    def body():
        err = abs(enclosed_volume(sphere_surface(1, 1.0))
                  - 3.0 * math.pi ** 2 / 8.0)
        _check(checks, "sphere-volume-frozen", err, 1e-10)

    @_guard(checks, "sphere-perimeter-two-pipeline")
    def body():
        cfg = SolveConfig(stop_event=(EventKind.AXIS_CONTACT, 1),
                          axis_epsilon=1e-6)
        traj = integrate(1, 1.0, initial=ProfileState(1.0, 0.0, 0.0),
                         config=cfg)
        p_ode = perimeter(RotationalProfile.from_trajectory(traj))
        half = RotationalProfile.from_curve(
            1, lambda s: _sphere_curve(1.0, s), (math.pi / 2.0, math.pi),
            closed=False, arclength=False, panels=128)
        _check(checks, "sphere-perimeter-two-pipeline",
               abs(p_ode - perimeter(half)), 1e-5)

    @_guard(checks, "first-variation-cylinder")
    def body():
        numeric, formula = first_variation_check(
            cylinder_band(1, 1.0, 1.0), lambda s: 1.0, du=lambda s: 0.0)
        _check(checks, "first-variation-cylinder",
               abs(numeric - formula) / abs(formula), 1e-3)

    @_guard(checks, "first-variation-sphere")
    def body():
        numeric, formula = first_variation_check(
            sphere_surface(1, 1.0), lambda s: math.sin(s) ** 4,
            du=lambda s: 4.0 * math.sin(s) ** 3 * math.cos(s))
        _check(checks, "first-variation-sphere",
               abs(numeric - formula) / abs(formula), 1e-3)


_SUITE_BODIES = {
    "energy": _suite_energy,
    "closed-forms": _suite_closed_forms,
    "curvature": _suite_curvature,
    "classification": _suite_classification,
    "measures": _suite_measures,
}


def run_suite(name, seed=0):
    """Run one verification suite (or "all"); returns the report dict."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    names = [s for s in SUITES if s != "all"] if name == "all" else [name]
    checks = []
    for suite_name in names:
        rng = np.random.default_rng(seed)
        _SUITE_BODIES[suite_name](checks, rng)
    return {
        "suite": name,
        "seed": int(seed),
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
