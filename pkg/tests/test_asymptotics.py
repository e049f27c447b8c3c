import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convasym import asymptotics, genfun, seqcore
from convasym.asymptotics import SaddleAtRadius

CENTRAL = genfun.closed_form("central")
CENTRAL_SQ = genfun.closed_form("central_sq")
CATALAN = genfun.closed_form("catalan")


def test_saddle_central_kappa_one():
    sp = asymptotics.solve_saddle(CENTRAL, 1.0)
    assert sp.t_star == pytest.approx(1 / 6, rel=1e-13)
    assert sp.v == pytest.approx(3.0, rel=1e-12)
    assert sp.exp_rate == pytest.approx(0.5 * math.log(3) + math.log(6), rel=1e-13)
    assert sp.exp_rate == pytest.approx(2.3411, abs=1e-4)


@pytest.mark.parametrize("kappa", [0.1, 0.5, 1.0, 2.0, 10.0])
def test_saddle_central_closed_form(kappa):
    assert asymptotics.solve_saddle(CENTRAL, kappa).t_star == pytest.approx(1 / (2 * kappa + 4), abs=1e-12)


def test_saddle_central_sq_fixture():
    sp = asymptotics.solve_saddle(CENTRAL_SQ, 1.0)
    assert abs(sp.residual(CENTRAL_SQ)) <= 1e-12
    assert sp.t_star == pytest.approx(0.052270790517236244, rel=1e-12)
    assert sp.v == pytest.approx(5.387442573802094, rel=1e-10)
    assert sp.exp_rate == pytest.approx(3.353656558547295, rel=1e-12)


@pytest.mark.parametrize("gf", [CATALAN, CENTRAL, CENTRAL_SQ], ids=["catalan", "central", "central_sq"])
@pytest.mark.parametrize("kappa", [0.05, 0.3, 1.0, 4.0, 50.0])
def test_saddle_residual(gf, kappa):
    sp = asymptotics.solve_saddle(gf, kappa)
    assert 0 < sp.t_star < gf.radius
    assert abs(sp.residual(gf)) <= 1e-12
    assert sp.v > 0


def test_saddle_small_kappa_pushes_to_radius():
    sp = asymptotics.solve_saddle(CENTRAL, 1e-9)
    assert 0.25 - 1e-9 < sp.t_star < 0.25


def test_cube_small_kappa_saddle_at_radius():
    cube = genfun.series("central_cube")
    with pytest.raises(SaddleAtRadius):
        asymptotics.solve_saddle(cube, 0.1)
    sp = asymptotics.solve_saddle(cube, 1.0)
    assert abs(sp.residual(cube)) <= 1e-12


def test_saddle_rejects_nonpositive_kappa():
    with pytest.raises(ValueError):
        asymptotics.solve_saddle(CENTRAL, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.01, max_value=100.0), st.floats(min_value=0.001, max_value=0.999))
def test_exp_rate_is_minimum(kappa, frac):
    t = frac * CENTRAL.radius
    rate = asymptotics.exp_rate(CENTRAL, kappa)
    assert rate <= kappa * math.log(CENTRAL.value(t)) - math.log(t) + 1e-12


def test_exp_rate_concave_increasing():
    ks = np.linspace(0.1, 5.0, 50)
    for gf in (CENTRAL, CENTRAL_SQ, CATALAN):
        r = [asymptotics.exp_rate(gf, float(k)) for k in ks]
        assert all(b > a for a, b in zip(r, r[1:]))
        assert all(r[i] >= 0.5 * (r[i - 1] + r[i + 1]) - 1e-12 for i in range(1, len(r) - 1))


def test_t_star_decreasing_in_kappa():
    ts = [asymptotics.solve_saddle(CENTRAL_SQ, k).t_star for k in (0.1, 0.5, 1, 2, 8)]
    assert all(b < a for a, b in zip(ts, ts[1:]))


def test_asymptotic_central_50_200():
    exact = seqcore.multifold_closed_central(50, 200)
    ratio = math.exp(asymptotics.multifold_asymptotic(CENTRAL, 50, 200) - math.log(exact))
    assert 0.95 <= ratio <= 1.05


def test_asymptotic_central_sq_10_40():
    exact = seqcore.multifold_exact("central_sq", 10, 40)
    ratio = math.exp(asymptotics.multifold_asymptotic(CENTRAL_SQ, 10, 40) - math.log(exact))
    assert 0.90 <= ratio <= 1.10


@pytest.mark.parametrize("gf, family", [(CENTRAL, "central"), (CENTRAL_SQ, "central_sq"), (CATALAN, "catalan")])
def test_asymptotic_improves_with_n(gf, family):
    errs = []
    for n in (40, 80, 160, 320):
        exact = seqcore.multifold_exact(family, n // 4, n)
        errs.append(abs(math.exp(asymptotics.multifold_asymptotic(gf, n // 4, n) - math.log(exact)) - 1))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_catalan_diagonal_exponential_rate():
    rate = asymptotics.exp_rate(CATALAN, 1.0)
    for n in (100, 400):
        val = math.log(seqcore.multifold_closed_catalan(n, n)) / n
        assert abs(val - rate) < 2 * math.log(n) / n


def test_multifold_asymptotic_rejects_bad_arguments():
    with pytest.raises(ValueError):
        asymptotics.multifold_asymptotic(CENTRAL, 0, 5)


def test_circle_integral_matches_prefactor():
    ser = genfun.series("central", 2000)
    c = asymptotics.circle_integral_numeric(ser, 20, 40)
    pref = asymptotics.gaussian_prefactor(CENTRAL, 20, 40)
    assert abs(c.imag) < 1e-9
    assert c.real > 0
    assert c.real == pytest.approx(pref, rel=0.10)


def test_circle_integral_reconstructs_coefficients():
    ser = genfun.series("central", 2000)
    assert asymptotics.cauchy_coefficient(ser, 2, 2) == pytest.approx(16.0, rel=1e-12)
    for k, n in ((3, 5), (5, 10), (10, 30)):
        exact = seqcore.multifold_exact("central", k, n)
        assert asymptotics.cauchy_coefficient(ser, k, n) == pytest.approx(exact, rel=1e-9)


def test_circle_integral_constant_term():
    ser = genfun.series("central", 2000)
    assert asymptotics.cauchy_coefficient(ser, 1, 0) == pytest.approx(1.0, rel=1e-12)


def test_circle_integral_needs_series():
    with pytest.raises(TypeError):
        asymptotics.circle_integral_numeric(CENTRAL, 2, 2)


def test_three_bridge_constant():
    assert 1 / asymptotics.three_bridge_constant() == pytest.approx(0.7178, abs=5e-5)


@pytest.mark.parametrize("n", [100, 10_000])
def test_stirling_k1(n):
    b = math.comb(2 * n, n)
    assert math.exp(asymptotics.asympt_2srwb(1, n) - 2 * math.log(b)) == pytest.approx(1, rel=1e-4 * 10_000 / n)
    assert math.exp(asymptotics.asympt_3srwb(1, n) - 3 * math.log(b)) == pytest.approx(1, rel=1e-4 * 10_000 / n)


@pytest.mark.parametrize("k", [2, 3])
def test_two_bridge_trend(k):
    dev = [abs(math.exp(seqcore.multifold_logspace("central_sq", k, n) - asymptotics.asympt_2srwb(k, n)) - 1)
           for n in (2**8, 2**10, 2**12)]
    assert dev[0] > dev[1] > dev[2]


@pytest.mark.parametrize("k", [2, 3])
def test_three_bridge_at_2000(k):
    ratio = math.exp(seqcore.multifold_logspace("central_cube", k, 2000) - asymptotics.asympt_3srwb(k, 2000))
    assert abs(ratio - 1) <= 0.10


def test_closed_asymptotics_reject_bad_arguments():
    with pytest.raises(ValueError):
        asymptotics.asympt_2srwb(1, 1)
    with pytest.raises(ValueError):
        asymptotics.asympt_3srwb(0, 10)
