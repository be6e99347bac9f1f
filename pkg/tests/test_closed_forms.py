"""Closed-form profiles and singular quadrature against independent oracles."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from heisenberg_cmc.classify import classify, cylinder_energy
from heisenberg_cmc.closed_forms import (
    QuadratureResult,
    catenoid_generating_curve,
    catenoid_profile_h1,
    catenoid_slab_halfwidth,
    halfperiod_heights,
    nodoid_halfperiod,
    singular_quadrature,
    sphere_generating_curve,
    sphere_profile,
    sphere_slope,
    unduloid_halfperiod,
)
from heisenberg_cmc.errors import DivergentIntegralError, QuadratureError
from heisenberg_cmc.profile_ode import (
    EventKind,
    SolveConfig,
    integrate,
)

SCHEMES = ("substitution", "tanh_sinh")


# ---------------------------------------------------------------------------
# singular quadrature


@pytest.mark.parametrize("scheme", SCHEMES)
def test_quadrature_frozen_integrals(scheme):
    r = singular_quadrature(lambda x: 1.0 / math.sqrt(x), 0.0, 1.0, "lower",
                            scheme=scheme)
    assert r.value == pytest.approx(2.0, abs=1e-10)
    assert r.evaluations > 0
    assert r.error_estimate >= 0.0

    r = singular_quadrature(lambda x, da, db: 1.0 / math.sqrt(da * db),
                            0.0, 1.0, "both", scheme=scheme)
    assert r.value == pytest.approx(math.pi, abs=1e-10)

    # sphere half-height: int_0^1 x^2/sqrt(1-x^2) dx with 1-x^2 = db (1+x)
    r = singular_quadrature(lambda x, da, db: x * x / math.sqrt(db * (1.0 + x)),
                            0.0, 1.0, "upper", scheme=scheme)
    assert r.value == pytest.approx(math.pi / 4.0, abs=1e-10)
    assert r.value == pytest.approx(sphere_profile(1.0, 0.0), abs=1e-10)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_quadrature_smooth_integrand(scheme):
    r = singular_quadrature(math.exp, 0.0, 1.0, "none", scheme=scheme)
    assert r.value == pytest.approx(math.e - 1.0, rel=1e-12)


def test_quadrature_validation():
    f = math.sqrt
    with pytest.raises(ValueError):
        singular_quadrature(f, 1.0, 0.0)
    with pytest.raises(ValueError):
        singular_quadrature(f, 0.0, math.inf)
    with pytest.raises(ValueError):
        singular_quadrature(f, 0.0, 1.0, "sideways")
    with pytest.raises(ValueError):
        singular_quadrature(f, 0.0, 1.0, "both", scheme="monte-carlo")
    with pytest.raises(ValueError):
        QuadratureResult(value=1.0, error_estimate=-1e-3, evaluations=4)


def test_quadrature_budget_exhaustion():
    # a genuine 1/x blowup is not integrable; the adaptive rule gives up
    with pytest.raises(QuadratureError):
        singular_quadrature(lambda x: 1.0 / x, 0.0, 1.0, "lower",
                            scheme="substitution")
    # one refinement level cannot hit a near-machine tolerance
    with pytest.raises(QuadratureError):
        singular_quadrature(lambda x, da, db: 1.0 / math.sqrt(da), 0.0, 1.0,
                            "lower", scheme="tanh_sinh", max_level=1,
                            rel_tol=1e-16, abs_tol=1e-300)


# ---------------------------------------------------------------------------
# sphere closed form


def test_sphere_profile_frozen_values():
    assert sphere_profile(1.0, 0.0) == pytest.approx(math.pi / 4.0, abs=1e-15)
    assert sphere_profile(1.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    expected = 0.5 * (0.5 * math.sqrt(0.75) + math.acos(0.5))
    assert sphere_profile(1.0, 0.5) == pytest.approx(expected, abs=1e-15)


def test_sphere_profile_domain():
    with pytest.raises(ValueError):
        sphere_profile(0.0, 0.5)
    with pytest.raises(ValueError):
        sphere_profile(1.0, -0.1)
    with pytest.raises(ValueError):
        sphere_profile(1.0, 1.5)
    with pytest.raises(ValueError):
        sphere_slope(1.0, 1.0)


@pytest.mark.parametrize("h", [0.5, 1.0, 2.0])
def test_sphere_slope_matches_profile(h):
    step = 1e-6
    for x in np.linspace(0.05, 0.9, 9) / h:
        fd = (sphere_profile(h, x + step) - sphere_profile(h, x - step)) / (2 * step)
        assert fd == pytest.approx(sphere_slope(h, x), abs=1e-6)


def test_sphere_generating_curve_consistency():
    h = 1.5
    for psi in np.linspace(0.15, math.pi - 0.15, 17):
        x, t, dx, dt, ddx, ddt = sphere_generating_curve(h, psi)
        want = sphere_profile(h, x)
        if psi >= math.pi / 2:
            assert t == pytest.approx(want, abs=1e-13)
        else:
            assert t == pytest.approx(-want, abs=1e-13)
        # derivatives against central differences in psi
        step = 1e-5
        xp, tp = sphere_generating_curve(h, psi + step)[:2]
        xm, tm = sphere_generating_curve(h, psi - step)[:2]
        assert dx == pytest.approx((xp - xm) / (2 * step), abs=1e-8)
        assert dt == pytest.approx((tp - tm) / (2 * step), abs=1e-8)
        assert ddx == pytest.approx((xp - 2 * x + xm) / step ** 2, abs=1e-4)
        assert ddt == pytest.approx((tp - 2 * t + tm) / step ** 2, abs=1e-4)


# ---------------------------------------------------------------------------
# catenoid closed form


def test_catenoid_profile_frozen_values():
    assert catenoid_profile_h1(1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert catenoid_profile_h1(1.0, math.sqrt(3.0)) == pytest.approx(2.0, abs=1e-14)
    assert catenoid_profile_h1(2.0, 0.0) == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(ValueError):
        catenoid_profile_h1(0.0, 1.0)
    with pytest.raises(ValueError):
        catenoid_generating_curve(-1.0, 0.0)


@pytest.mark.parametrize("e", [0.5, 1.0, 2.0])
def test_catenoid_curve_derivatives(e):
    step = 1e-5
    for t in np.linspace(-4.0, 4.0, 21):
        x, _, dx, dt, ddx, ddt = catenoid_generating_curve(e, t)
        assert dt == 1.0 and ddt == 0.0
        xp = catenoid_profile_h1(e, t + step)
        xm = catenoid_profile_h1(e, t - step)
        assert dx == pytest.approx((xp - xm) / (2 * step), abs=1e-8)
        assert ddx == pytest.approx((xp - 2 * x + xm) / step ** 2, abs=1e-4)


@pytest.mark.parametrize("e", [0.5, 1.0, 2.0])
def test_catenoid_satisfies_profile_ode(e):
    # x'' = (2n-1)/x^3 + 2(n-1) x'^2/x collapses to x'' = 1/x^3 at n = 1
    for t in np.linspace(-5.0, 5.0, 11):
        x, _, dx, _, ddx, _ = catenoid_generating_curve(e, t)
        assert abs(ddx - 1.0 / x ** 3) <= 1e-8


# ---------------------------------------------------------------------------
# slab half-width


def test_slab_diverges_for_n1():
    with pytest.raises(DivergentIntegralError) as info:
        catenoid_slab_halfwidth(1, 1.0)
    assert "linearly" in str(info.value)
    with pytest.raises(ValueError):
        catenoid_slab_halfwidth(2, -1.0)


def test_slab_schemes_agree():
    a = catenoid_slab_halfwidth(2, 1.0)
    b = catenoid_slab_halfwidth(2, 1.0, scheme="tanh_sinh")
    assert a.value > 0.0
    assert a.value == pytest.approx(b.value, abs=1e-6)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_slab_partial_integrals_increase_to_limit():
    e = 1.0
    total = catenoid_slab_halfwidth(2, e).value

    def near(x, da, db):
        s = math.fsum(x ** i for i in range(3))
        return e * x / math.sqrt(da * s * (x ** 3 + e))

    previous = 0.0
    for cutoff in (1.5, 2.0, 4.0, 8.0):
        partial = singular_quadrature(near, 1.0, cutoff, "lower").value
        assert partial > previous
        assert partial < total
        previous = partial


def test_slab_matches_ode_tail():
    e = 1.0
    tinf = catenoid_slab_halfwidth(2, e).value
    cfg = SolveConfig(max_arclength=60.0, rel_tol=1e-12, abs_tol=1e-14)
    traj = integrate(2, 0.0, e=e, config=cfg)
    x_end, t_end = traj.states[-1, 0], traj.states[-1, 1]

    # partial integral to a finite radius equals the ODE height there
    cut = 3.0

    def near(x, da, db):
        s = math.fsum(x ** i for i in range(3))
        return e * x / math.sqrt(da * s * (x ** 3 + e))

    partial = singular_quadrature(near, 1.0, cut, "lower").value
    s_cross = brentq(lambda s: traj.state_at(s).x - cut, 0.0, traj.s_end, xtol=1e-13)
    assert partial == pytest.approx(traj.state_at(s_cross).t, abs=1e-8)

    # the remaining tail behaves like the comparison integral E/x_end
    gap = tinf - t_end
    assert 0.9 * e / x_end < gap < 1.1 * e / x_end


# ---------------------------------------------------------------------------
# half-period heights


NODOID_CASES = [(1, 1.0, -0.1), (2, 0.75, -0.3), (3, 1.0, -1.0), (1, 2.0, -0.05)]


@pytest.mark.parametrize("n,h,e", NODOID_CASES)
def test_nodoid_halfperiod_matches_ode(n, h, e):
    t2 = nodoid_halfperiod(n, h, e)
    assert t2.value > 0.0
    cfg = SolveConfig(stop_event=(EventKind.CRITICAL_RADIUS, 1),
                      rel_tol=1e-12, abs_tol=1e-14)
    traj = integrate(n, h, e=e, config=cfg)
    assert t2.value == pytest.approx(traj.states[-1, 1], abs=1e-8)

    # t1 is the height of the vertical-tangent contact at x0
    t1, t2_again = halfperiod_heights(n, h, e)
    assert t2_again.value == pytest.approx(t2.value, abs=1e-12)
    vertical = [ev for ev in traj.events if ev.kind is EventKind.VERTICAL_TANGENT]
    assert vertical, "nodoid sweep must cross its vertical tangent"
    assert t1.value == pytest.approx(vertical[0].state.t, abs=1e-8)


def test_nodoid_halfperiod_frozen():
    # independently verified: t2(1, 1, -0.1) = pi/4
    r = nodoid_halfperiod(1, 1.0, -0.1)
    assert r.value == pytest.approx(math.pi / 4.0, abs=1e-11)
    assert r.error_estimate < 1e-8
    assert r.evaluations > 0


def test_nodoid_sign_normalization():
    direct = nodoid_halfperiod(2, 0.75, -0.3)
    mirrored = nodoid_halfperiod(2, -0.75, 0.3)
    assert mirrored.value == pytest.approx(direct.value, abs=1e-14)


def test_nodoid_schemes_agree():
    a = nodoid_halfperiod(1, 1.0, -0.1)
    b = nodoid_halfperiod(1, 1.0, -0.1, scheme="tanh_sinh")
    assert a.value == pytest.approx(b.value, abs=1e-11)


UNDULOID_CASES = [(1, 1.0, 0.4), (2, 0.75, 0.7), (1, 0.5, 0.9)]


@pytest.mark.parametrize("n,h,frac", UNDULOID_CASES)
def test_unduloid_halfperiod_matches_ode(n, h, frac):
    e = frac * cylinder_energy(n, h)
    t2 = unduloid_halfperiod(n, h, e)
    assert t2.value > 0.0
    cfg = SolveConfig(stop_event=(EventKind.CRITICAL_RADIUS, 1),
                      rel_tol=1e-12, abs_tol=1e-14)
    traj = integrate(n, h, e=e, config=cfg)
    assert t2.value == pytest.approx(traj.states[-1, 1], abs=1e-8)

    # t1 is the height where the profile crosses the inflection radius x0
    cls = classify(n, h, e)
    t1, _ = halfperiod_heights(n, h, e)
    s_cross = brentq(lambda s: traj.state_at(s).x - cls.x0, 0.0, traj.s_end,
                     xtol=1e-13)
    assert t1.value == pytest.approx(traj.state_at(s_cross).t, abs=1e-8)


def test_halfperiod_heights_degenerate_and_invalid():
    t1, t2 = halfperiod_heights(1, 0.5, cylinder_energy(1, 0.5))
    assert t1.value == 0.0 and t2.value == 0.0
    with pytest.raises(ValueError):
        unduloid_halfperiod(1, 1.0, -0.1)
    with pytest.raises(ValueError):
        nodoid_halfperiod(1, 1.0, 0.1)
    with pytest.raises(ValueError):
        nodoid_halfperiod(1, 0.0, -0.1)
    with pytest.raises(ValueError):
        halfperiod_heights(1, 0.0, 0.5)  # catenoid has no period
    with pytest.raises(ValueError):
        halfperiod_heights(1, 1.0, 0.0)  # sphere has no period


@pytest.mark.parametrize("h,e", [(1.0, -5.0), (1.0, -0.1), (1.0, 0.1),
                                 (1.0, 0.2499), (3.0, -0.7), (0.5, 0.45)])
def test_n1_halfperiod_height_is_parameter_free(h, e):
    # for n = 1 the half-period height collapses to pi/(4H^2) for every E
    if e > 0:
        value = unduloid_halfperiod(1, h, e).value
    else:
        value = nodoid_halfperiod(1, h, e).value
    assert value == pytest.approx(math.pi / (4.0 * h * h), abs=1e-10)
