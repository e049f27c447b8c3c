import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convasym import genfun, ratefn

LN2 = math.log(2)
ENS = ["srwb", "dyck"]
unit_open = st.floats(min_value=1e-3, max_value=1 - 1e-3)
positive = st.floats(min_value=1e-3, max_value=100.0)


def test_u_fn_values():
    assert ratefn.u_fn(0.0, 3.0) == 0.0
    assert ratefn.u_fn(1.0, 1.0) == pytest.approx(2 * LN2, rel=1e-15)


@settings(max_examples=200)
@given(st.floats(0, 50), st.floats(0, 50))
def test_u_fn_symmetric_nonnegative(x, y):
    assert ratefn.u_fn(x, y) == ratefn.u_fn(y, x)
    assert ratefn.u_fn(x, y) >= -1e-12


def test_u_fn_rejects_negative():
    with pytest.raises(ValueError):
        ratefn.u_fn(-0.1, 1.0)


@pytest.mark.parametrize("ens, y, expected", [("srwb", 0.0, 0.0), ("dyck", 0.0, 0.0), ("srwb", 2.0, 2 * LN2)])
def test_cal_u_values(ens, y, expected):
    assert ratefn.cal_u(ens, y) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("ens", ENS)
@pytest.mark.parametrize("y", [0.01, 0.5, 3.0, 40.0])
def test_cal_u_prime_against_finite_differences(ens, y):
    h = 1e-6 * y
    fd = (ratefn.cal_u(ens, y + h) - ratefn.cal_u(ens, y - h)) / (2 * h)
    assert ratefn.cal_u_prime(ens, y) == pytest.approx(fd, rel=1e-7)


def test_cal_u_rejects_bad_input():
    with pytest.raises(ValueError):
        ratefn.cal_u("srwb", -1.0)
    with pytest.raises(ValueError):
        ratefn.cal_u("srwb2", 1.0)


def test_rate_explicit_endpoints():
    assert ratefn.rate_explicit("srwb", 1.0) == pytest.approx(LN2, rel=1e-15)
    assert ratefn.rate_explicit("dyck", 1.0) == pytest.approx(2 * LN2, rel=1e-15)
    assert ratefn.rate_explicit("srwb", 0.0) == 0.0
    assert ratefn.rate_explicit("dyck", 0.0) == 0.0


def test_rate_srwb_at_half():
    assert ratefn.rate_explicit("srwb", 0.5) == pytest.approx(0.08494951839769871, rel=1e-14)


@settings(max_examples=200)
@given(st.floats(0, 1))
def test_dyck_minus_srwb_is_linear(x):
    diff = ratefn.rate_explicit("dyck", x) - ratefn.rate_explicit("srwb", x)
    assert diff == pytest.approx(x * LN2, abs=1e-14)


@pytest.mark.parametrize("ens", ENS)
def test_rate_monotone(ens):
    vals = [ratefn.rate_explicit(ens, float(x)) for x in np.linspace(0, 1, 1000)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_dyck_right_derivative_at_zero():
    h = 1e-7
    assert ratefn.rate_explicit("dyck", h) / h == pytest.approx(LN2, abs=1e-4)


def test_srwb_quadratic_near_zero():
    ratios = [ratefn.rate_explicit("srwb", x) / x**2 for x in (1e-1, 1e-2, 1e-3)]
    assert all(abs(b - 0.25) < abs(a - 0.25) for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(0.25, abs=1e-3)


@pytest.mark.parametrize("x", [-0.01, 1.01])
def test_rate_domain(x):
    with pytest.raises(ValueError):
        ratefn.rate_explicit("srwb", x)


def test_optimiser_examples():
    assert ratefn.y_star("srwb", 0.5) == pytest.approx(0.25)
    assert ratefn.x_star("dyck", 1.0) == pytest.approx(0.5)


@pytest.mark.parametrize("ens", ENS)
@settings(max_examples=100)
@given(x=unit_open)
def test_x_star_inverts_y_star(ens, x):
    assert ratefn.x_star(ens, ratefn.y_star(ens, x)) == pytest.approx(x, rel=1e-12)


def test_x_star_srwb_matches_unrationalised_form():
    y = 0.7
    assert ratefn.x_star("srwb", y) == pytest.approx(math.sqrt(y * (y + 2)) - y, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_y_star_boundary(x):
    with pytest.raises(ValueError):
        ratefn.y_star("srwb", x)


def test_v_identity_srwb_half():
    x = 0.5
    v, _ = ratefn.v_w_identities("srwb", x, ratefn.y_star("srwb", x))
    assert v + ratefn.rate_explicit("srwb", x) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("y", [0.1, 1.0, 10.0])
def test_w_identity_dyck(y):
    _, w = ratefn.v_w_identities("dyck", ratefn.x_star("dyck", y), y)
    assert w - ratefn.cal_u("dyck", y) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("ens", ENS)
@settings(max_examples=100)
@given(x=st.floats(0.2, 0.95), y=st.floats(0.05, 10.0))
def test_optimiser_identities(ens, x, y):
    ys = ratefn.y_star(ens, x)
    assert ratefn.v_fn(ens, x, ys) == pytest.approx(-ratefn.rate_explicit(ens, x), abs=1e-12)
    assert ratefn.v_fn(ens, x, ys + 0.01) > ratefn.v_fn(ens, x, ys)
    assert ratefn.v_fn(ens, x, ys - 0.01) > ratefn.v_fn(ens, x, ys)
    xs = ratefn.x_star(ens, y)
    assert ratefn.w_fn(ens, xs, y) == pytest.approx(ratefn.cal_u(ens, y), abs=1e-12)
    assert ratefn.w_fn(ens, xs + 0.01, y) < ratefn.w_fn(ens, xs, y)
    assert ratefn.w_fn(ens, xs - 0.01, y) < ratefn.w_fn(ens, xs, y)


@pytest.mark.parametrize("ens, x, expected", [("srwb", 0.5, 0.25), ("dyck", 0.5, 1.0)])
def test_moment_equation_examples(ens, x, expected):
    assert ratefn.solve_y_from_moment_eq(ens, x) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("ens", ENS)
@pytest.mark.parametrize("x", [i / 10 for i in range(1, 10)])
def test_moment_equation_matches_y_star(ens, x):
    assert ratefn.solve_y_from_moment_eq(ens, x) == pytest.approx(ratefn.y_star(ens, x), abs=1e-10)


def test_moment_equation_small_x():
    assert ratefn.solve_y_from_moment_eq("srwb", 1e-4) < 1e-7


def mp_parametric(t):
    with mpmath.workdps(50):
        t = mpmath.mpf(t)
        m = 16 * t
        k, e = mpmath.ellipk(m), mpmath.ellipe(m)
        x = 2 * (1 - m) * k / (e - (1 - m) * k) * (2 / mpmath.pi * k - 1)
        i = -x * mpmath.log(1 - mpmath.pi / (2 * k)) + mpmath.log(t) + 4 * mpmath.log(2)
        return float(x), float(i)


@pytest.mark.parametrize("t", [1e-9, 1e-4, 1 / 64, 1 / 32, 0.05, 1 / 16 - 1e-6])
def test_parametric_against_mpmath(t):
    p = ratefn.rate_parametric_2srwb(t)
    x, i = mp_parametric(t)
    assert p.x == pytest.approx(x, rel=1e-11)
    assert p.i_val == pytest.approx(i, rel=1e-10, abs=1e-15)


def test_parametric_fixture_half_radius():
    p = ratefn.rate_parametric_2srwb(1 / 32)
    assert p.x == pytest.approx(0.7893290222411912, rel=1e-13)
    assert p.i_val == pytest.approx(0.789773967231487, rel=1e-13)


def test_parametric_endpoints():
    left = ratefn.rate_parametric_2srwb(1e-9)
    assert left.x == pytest.approx(1, abs=1e-6)
    assert left.i_val == pytest.approx(2 * LN2, abs=1e-6)
    right = ratefn.rate_parametric_2srwb(1 / 16 - 1e-9)
    assert right.i_val == pytest.approx(0, abs=1e-6)
    # x approaches 0 like eps ln^2 eps, so only ~2e-6 at this t
    assert right.x < 2e-6
    assert right.i_val / right.x < 0.2


def test_parametric_left_endpoint_ratio_vanishes():
    ratios = [ratefn.rate_parametric_2srwb(1 / 16 - e) for e in (1e-4, 1e-6, 1e-8, 1e-10)]
    r = [p.i_val / p.x for p in ratios]
    assert all(b < a for a, b in zip(r, r[1:]))


def test_parametric_x_decreasing():
    ts = np.linspace(0, 1 / 16, 2002)[1:-1]
    xs = [ratefn.rate_parametric_2srwb(float(t)).x for t in ts]
    assert all(b < a for a, b in zip(xs, xs[1:]))


@pytest.mark.parametrize("t", [0.0, 1 / 16])
def test_parametric_domain(t):
    with pytest.raises(ValueError):
        ratefn.rate_parametric_2srwb(t)


@pytest.mark.parametrize("family, ens", [("central", "srwb"), ("catalan", "dyck")])
def test_rate_from_gf_matches_explicit(family, ens):
    gf = genfun.closed_form(family)
    for t in np.linspace(0, gf.radius, 52)[1:-1]:
        p = ratefn.rate_from_gf(gf, float(t))
        assert p.i_val == pytest.approx(ratefn.rate_explicit(ens, p.x), abs=1e-9)


def test_rate_from_gf_matches_parametric():
    gf = genfun.closed_form("central_sq")
    for t in np.linspace(0, 1 / 16, 52)[1:-1]:
        a, b = ratefn.rate_from_gf(gf, float(t)), ratefn.rate_parametric_2srwb(float(t))
        assert a.x == pytest.approx(b.x, abs=1e-9)
        assert a.i_val == pytest.approx(b.i_val, abs=1e-9)


def test_rate_from_series_matches_closed():
    ser, closed = genfun.series("central_sq", 4000), genfun.closed_form("central_sq")
    for t in (0.005, 0.03, 0.05):
        assert ratefn.rate_from_gf(ser, t).i_val == pytest.approx(ratefn.rate_from_gf(closed, t).i_val, abs=1e-9)


def test_rate_ordering_two_bridges_above_one():
    two = ratefn.TwoBridgeRate()
    xs = np.linspace(0, 1, 201)
    assert all(ratefn.rate_explicit("srwb", float(x)) <= two(x) + 1e-12 for x in xs)
    assert two(1.0) == pytest.approx(2 * LN2, abs=1e-6)
    assert ratefn.rate_explicit("dyck", 1.0) == pytest.approx(two(1.0), abs=1e-6)


def test_rate_curve_shapes():
    pts = ratefn.rate_curve("dyck", 3)
    assert [p.x for p in pts] == [0, 0.5, 1]
    pts = ratefn.rate_curve("srwb2", 200)
    xs = [p.x for p in pts]
    assert xs == sorted(xs)
    assert all(p.i_val >= -1e-15 for p in pts)
    with pytest.raises(ValueError):
        ratefn.rate_curve("motzkin", 10)
    curve = ratefn.rate_curve_from_gf(genfun.closed_form("central"), 20)
    assert curve[0].x == 0 and curve[0].i_val == 0


@pytest.mark.parametrize("family, ens", [("central", "srwb"), ("catalan", "dyck")])
def test_rate_at_x_inverts(family, ens):
    gf = genfun.closed_form(family)
    for x in np.linspace(0, 1, 41):
        assert ratefn.rate_at_x(gf, float(x)) == pytest.approx(ratefn.rate_explicit(ens, float(x)), abs=1e-9)


def test_rate_at_x_below_reach():
    with pytest.raises(ValueError):
        ratefn.rate_at_x(genfun.series("central_cube"), 0.05)
