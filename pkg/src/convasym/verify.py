"""Numbered acceptance checks, grouped into suites for ``convasym verify``.

Each criterion function returns a list of :class:`Check` records; a
criterion passes when all of its checks do. Tolerances are pinned here and
nowhere else, so the CLI and the test-suite run identical checks.
"""

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import asymptotics, ensembles, genfun, ratefn, seqcore, specfn

LN2 = math.log(2.0)
MC_SEED = 2024


@dataclass
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str
    claim: str


def _check(criterion, name, passed, detail, claim):
    return Check(criterion, name, bool(passed), detail, claim)


# -- 1: closed forms -----------------------------------------------------------

def criterion_1():
    claim = "multifold Catalan and central binomial convolutions have closed forms"
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 11):
        for n in range(0, 61):
            if seqcore.multifold_exact("catalan", k, n) != seqcore.multifold_closed_catalan(k, n):
                bad.append(("catalan", k, n))
            if seqcore.multifold_exact("central", k, n) != seqcore.multifold_closed_central(k, n):
                bad.append(("central", k, n))
    elapsed = time.perf_counter() - t0
    return [
        _check(1, "exact == closed form, k in 1..10, n in 0..60", not bad,
               f"mismatches: {bad[:5]}" if bad else "1342 pairs agree", claim),
        _check(1, "runtime < 10 s", elapsed < 10.0, f"{elapsed:.2f} s", claim),
    ]


# -- 2: stars and bars -----------------------------------------------------------

def criterion_2():
    claim = "sum over paths of binom(|Z|+k-1, k) equals the (k+1)-fold convolution"
    t0 = time.perf_counter()
    bad = [(ens, k, n) for ens in ("dyck", "srwb") for k in range(0, 5) for n in range(0, 8)
           if not seqcore.verify_lemma1(ens, k, n)]
    elapsed = time.perf_counter() - t0
    return [
        _check(2, "identity for dyck and srwb, k <= 4, n <= 7", not bad,
               f"failures: {bad}" if bad else "80 cases exact", claim),
        _check(2, "runtime < 5 s", elapsed < 5.0, f"{elapsed:.2f} s", claim),
    ]


# -- 3: saddle-point accuracy ------------------------------------------------------

def _asympt_ratio(gf, k, n, exact):
    return math.exp(asymptotics.multifold_asymptotic(gf, k, n) - math.log(exact))


def criterion_3():
    claim = "saddle-point estimate g(T)^k T^-n / sqrt(2 pi k V) of M^(k)_n"
    central = genfun.closed_form("central")
    sq = genfun.closed_form("central_sq")
    out = []
    r = _asympt_ratio(central, 50, 200, seqcore.multifold_closed_central(50, 200))
    out.append(_check(3, "central (k, n) = (50, 200) ratio in [0.95, 1.05]",
                      0.95 <= r <= 1.05, f"ratio {r:.6f}", claim))
    r = _asympt_ratio(sq, 10, 40, seqcore.multifold_exact("central_sq", 10, 40))
    out.append(_check(3, "central_sq (k, n) = (10, 40) ratio in [0.90, 1.10]",
                      0.90 <= r <= 1.10, f"ratio {r:.6f}", claim))
    # kappa = 1/4: k = 50 at n = 200; n = 50 has no integer k, k = round(12.5) = 12
    for fam, gf in (("central", central), ("central_sq", sq)):
        errs = {}
        for k, n in ((12, 50), (50, 200)):
            exact = seqcore.multifold_exact(fam, k, n)
            errs[n] = abs(_asympt_ratio(gf, k, n, exact) - 1.0)
        out.append(_check(3, f"{fam} relative error at n=200 < n=50 (kappa ~ 1/4)",
                          errs[200] < errs[50],
                          f"err(50, k=12) {errs[50]:.4g}, err(200, k=50) {errs[200]:.4g}", claim))
    return out


# -- 4: exponential rate of the diagonal ------------------------------------------

def criterion_4():
    claim = "(1/n) ln M^(n)_n for binom(2n,n)^2 tends to the saddle exponential rate"
    t0 = time.perf_counter()
    rate = asymptotics.exp_rate(genfun.closed_form("central_sq"), 1.0)
    gaps = [abs(seqcore.multifold_logspace("central_sq", n, n) / n - rate) for n in (50, 100, 200)]
    elapsed = time.perf_counter() - t0
    dec = gaps[0] > gaps[1] > gaps[2]
    txt = ", ".join(f"{g:.5f}" for g in gaps)
    return [
        _check(4, "gap decreasing over n = 50, 100, 200", dec, f"gaps {txt}", claim),
        _check(4, "gap < 0.05 at n = 200", gaps[2] < 0.05, f"gap {gaps[2]:.5f}", claim),
        _check(4, "runtime < 30 s", elapsed < 30.0, f"{elapsed:.2f} s", claim),
    ]


# -- 5: two-bridge rate curve -------------------------------------------------------

def criterion_5():
    claim = "generic rate-from-generating-function curve equals the elliptic two-bridge curve"
    gf = genfun.closed_form("central_sq")
    ts = np.linspace(0.0, 1.0 / 16.0, 52)[1:-1]
    worst = 0.0
    for t in ts:
        a = ratefn.rate_from_gf(gf, float(t))
        b = ratefn.rate_parametric_2srwb(float(t))
        worst = max(worst, abs(a.x - b.x), abs(a.i_val - b.i_val))
    out = [_check(5, "50 interior t: |difference| <= 1e-9", worst <= 1e-9, f"max {worst:.3g}", claim)]
    left = ratefn.rate_parametric_2srwb(1e-9)
    right = ratefn.rate_parametric_2srwb(1.0 / 16.0 - 1e-9)
    for label, val, target in (
        ("t=1e-9: x -> 1", left.x, 1.0),
        ("t=1e-9: I -> 2 ln 2", left.i_val, 2.0 * LN2),
        ("t=1/16-1e-9: x -> 0", right.x, 0.0),
        ("t=1/16-1e-9: I -> 0", right.i_val, 0.0),
    ):
        err = abs(val - target)
        out.append(_check(5, f"endpoint {label} within 1e-6", err <= 1e-6,
                          f"value {val:.10g}, error {err:.3g}", claim))
    return out


# -- 6: rate machinery -----------------------------------------------------------------

def criterion_6():
    claim = "rate curve rebuilt from g reproduces the explicit bridge and Dyck rates"
    out = []
    for fam, ens in (("central", "srwb"), ("catalan", "dyck")):
        gf = genfun.closed_form(fam)
        ts = np.linspace(0.0, gf.radius, 52)[1:-1]
        worst = 0.0
        for t in ts:
            p = ratefn.rate_from_gf(gf, float(t))
            worst = max(worst, abs(p.i_val - ratefn.rate_explicit(ens, p.x)))
        out.append(_check(6, f"{fam} gf vs explicit {ens}, 50 points, 1e-9", worst <= 1e-9,
                          f"max {worst:.3g}", claim))
    for ens in ratefn.EXPLICIT:
        worst = max(abs(ratefn.solve_y_from_moment_eq(ens, x / 10) - ratefn.y_star(ens, x / 10))
                    for x in range(1, 10))
        out.append(_check(6, f"{ens} moment equation root == y_star, 1e-10", worst <= 1e-10,
                          f"max {worst:.3g}", "stationarity equation in y has the closed-form minimiser"))
    return out


# -- 7: calculus identities -------------------------------------------------------

def criterion_7(seed: int = 7):
    claim = "substitution identities at the optimisers and their second-order conditions"
    rng = np.random.default_rng(seed)
    out = []
    for ens in ratefn.EXPLICIT:
        xs = rng.uniform(0.2, 0.95, 100)
        ys = rng.uniform(0.05, 10.0, 100)
        worst_v = worst_w = 0.0
        order_ok = True
        for x, y in zip(xs, ys):
            x, y = float(x), float(y)
            ys_ = ratefn.y_star(ens, x)
            v, _ = ratefn.v_w_identities(ens, x, ys_)
            worst_v = max(worst_v, abs(v + ratefn.rate_explicit(ens, x)))
            xs_ = ratefn.x_star(ens, y)
            _, w = ratefn.v_w_identities(ens, xs_, y)
            worst_w = max(worst_w, abs(w - ratefn.cal_u(ens, y)))
            if not (ratefn.v_fn(ens, x, ys_ - 0.01) > v and ratefn.v_fn(ens, x, ys_ + 0.01) > v):
                order_ok = False
            if not (ratefn.w_fn(ens, xs_ - 0.01, y) < w and ratefn.w_fn(ens, xs_ + 0.01, y) < w):
                order_ok = False
        out.append(_check(7, f"{ens}: V(x, y*) = -I(x), 100 draws, 1e-12", worst_v <= 1e-12,
                          f"max {worst_v:.3g}", claim))
        out.append(_check(7, f"{ens}: W(x*, y) = cal_U(y), 100 draws, 1e-12", worst_w <= 1e-12,
                          f"max {worst_w:.3g}", claim))
        out.append(_check(7, f"{ens}: V min at y*, W max at x* (+-0.01)", order_ok,
                          "all draws" if order_ok else "violated", claim))
    return out


# -- 8: finite-n large deviations --------------------------------------------------

def criterion_8():
    claim = "-(1/n) ln P(|Z_n| - 1 >= n x) converges to the explicit rate I(x)"
    out = []
    for fam, ens in (("central", "srwb"), ("catalan", "dyck")):
        for x in (0.25, 0.5, 0.75):
            gaps = [ensembles.ldp_gap(fam, n, x) for n in (50, 100, 200)]
            txt = ", ".join(f"{g:.5f}" for g in gaps)
            out.append(_check(8, f"{ens} x={x}: gap strictly decreasing over n = 50, 100, 200",
                              gaps[0] > gaps[1] > gaps[2], f"gaps {txt}", claim))
    n = 100
    c_n = math.comb(2 * n, n) // (n + 1)
    b_n = math.comb(2 * n, n)
    for fam, target, label in (
        ("catalan", math.log(c_n) / n, "(1/n) ln C_n"),
        ("central", (math.log(b_n) - n * LN2) / n, "(1/n) ln(B_n / 2^n)"),
    ):
        val = ensembles.ldp_tail_exact(fam, n, 1.0)
        err = abs(val - target)
        out.append(_check(8, f"{fam} x=1, n=100 equals {label} to 1e-12", err <= 1e-12,
                          f"value {val:.15g}, error {err:.3g}", "only the all-returns path has |Z| = n + 1"))
    return out


# -- 9: limit laws by simulation --------------------------------------------------

MC_PLAN = {
    "dyck": (10_000, 100_000),
    "srwb_1": (10_000, 20_000),
    "srwb_3": (10_000, 20_000),
    "srwb_2": ((2**12, 2**16), 5_000),
}


def criterion_9(seed: int = MC_SEED, workers=None):
    out = []
    t0 = time.perf_counter()

    def run(ens, n, samples):
        return ensembles.monte_carlo_stats(ensembles.SampleConfig(ens, n, samples, seed), workers)

    n, samples = MC_PLAN["dyck"]
    s = run("dyck", n, samples).stat("P(|Z|=2)")
    out.append(_check(9, f"dyck n={n}: P(|Z|=2) within 3 sigma of 1/4",
                      abs(s.estimate - 0.25) <= 3 * s.stderr,
                      f"{s.estimate:.5f} +- {s.stderr:.5f}", "Dyck zero count tends to NegBin(2, 1/2)"))
    n, samples = MC_PLAN["srwb_1"]
    s = run("srwb_1", n, samples).stat("E[(|Z|/sqrt(n))^2]")
    out.append(_check(9, f"srwb n={n}: E[|Z|^2/n] within 3 sigma of 4",
                      abs(s.estimate - 4.0) <= 3 * s.stderr,
                      f"{s.estimate:.5f} +- {s.stderr:.5f}", "bridge moments 2^k Gamma(k/2 + 1)"))
    n, samples = MC_PLAN["srwb_3"]
    p = ensembles.three_bridge_p()
    s = run("srwb_3", n, samples).stat("P(|Z|=2)")
    out.append(_check(9, f"3 bridges n={n}: P(|Z|=2) within 3 sigma + 0.02 of p^2",
                      abs(s.estimate - p * p) <= 3 * s.stderr + 0.02,
                      f"{s.estimate:.5f} +- {s.stderr:.5f}, p^2 = {p * p:.5f}",
                      "three-bridge zero count tends to NegBin(2, Gamma(3/4)^4 / pi)"))
    (n_small, n_big), samples = MC_PLAN["srwb_2"]
    means = {}
    for nn in (n_small, n_big):
        means[nn] = run("srwb_2", nn, samples).stat("E[(pi|Z|/ln n)^1]")
    a, b = means[n_small], means[n_big]
    out.append(_check(9, f"2 bridges: (pi/ln n) E|Z| moves toward 2 from n=2^12 to 2^16",
                      abs(b.estimate - 2.0) < abs(a.estimate - 2.0),
                      f"{a.estimate:.4f} +- {a.stderr:.4f} -> {b.estimate:.4f} +- {b.stderr:.4f}",
                      "(pi / ln n)|Z| tends to Gamma(2, 1), mean 2"))
    elapsed = time.perf_counter() - t0
    out.append(_check(9, "runtime < 120 s", elapsed < 120.0, f"{elapsed:.1f} s",
                      "desk-scale simulation budget"))
    return out


# -- 10: multi-bridge convolution asymptotics ----------------------------------------

def criterion_10():
    claim = "k-fold convolutions of binom(2n,n)^2 and binom(2n,n)^3 against their asymptotics"
    out = []
    n = 10_000
    b = math.comb(2 * n, n)
    for label, exact_log, approx in (
        ("binom(2n,n)^2", 2 * math.log(b), asymptotics.asympt_2srwb(1, n)),
        ("binom(2n,n)^3", 3 * math.log(b), asymptotics.asympt_3srwb(1, n)),
    ):
        rel = abs(math.expm1(approx - exact_log))
        out.append(_check(10, f"k=1 {label} vs Stirling at n=1e4 within 0.01%", rel <= 1e-4,
                          f"relative error {rel:.3g}", claim))
    for k in (2, 3):
        dev = []
        for e in (8, 10, 12):
            nn = 2**e
            lg = seqcore.multifold_logspace("central_sq", k, nn)
            dev.append(abs(math.exp(lg - asymptotics.asympt_2srwb(k, nn)) - 1.0))
        txt = ", ".join(f"{d:.4f}" for d in dev)
        out.append(_check(10, f"2 bridges k={k}: |ratio - 1| decreasing over n = 2^8, 2^10, 2^12",
                          dev[0] > dev[1] > dev[2], f"|ratio - 1| {txt}", claim))
    for k in (2, 3):
        lg = seqcore.multifold_logspace("central_cube", k, 2000)
        r = math.exp(lg - asymptotics.asympt_3srwb(k, 2000))
        out.append(_check(10, f"3 bridges k={k}: ratio within 10% at n=2000", abs(r - 1.0) <= 0.10,
                          f"ratio {r:.6f}", claim))
    return out


# -- 11: special functions -----------------------------------------------------------

def _k_series(m, tol=1e-17):
    """(pi/2) sum (binom(2j,j)/4^j)^2 m^j, summed until terms drop below tol."""
    c = 1.0
    total = 1.0
    j = 0
    term = 1.0
    while term > tol or j < 10:
        j += 1
        c *= ((2 * j - 1) / (2 * j)) ** 2
        term = c * m**j
        total += term
    return specfn.HALF_PI * total


def criterion_11():
    out = []
    ms = np.linspace(0.0, 0.9, 91)
    worst = max(abs(specfn.elliptic_ke(float(m)).k_val - _k_series(float(m))) / _k_series(float(m))
                for m in ms)
    out.append(_check(11, "K by AGM vs power series on m in [0, 0.9], 1e-10", worst <= 1e-10,
                      f"max relative {worst:.3g}", "K(m) = (pi/2) sum (binom(2j,j)/4^j)^2 m^j"))
    worst = 0.0
    h = 1e-6
    for m in np.linspace(0.05, 0.9, 18):
        m = float(m)
        dk, de = specfn.elliptic_ke_derivs(m)
        p, q = specfn.elliptic_ke(m + h), specfn.elliptic_ke(m - h)
        fd_k = (p.k_val - q.k_val) / (2 * h)
        fd_e = (p.e_val - q.e_val) / (2 * h)
        worst = max(worst, abs(dk - fd_k) / abs(dk), abs(de - fd_e) / abs(de))
    out.append(_check(11, "dK/dm, dE/dm vs central differences, 1e-6", worst <= 1e-6,
                      f"max relative {worst:.3g}", "dK/dm = (E - (1-m)K)/(2m(1-m)), dE/dm = (E-K)/(2m)"))
    return out


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11,
}

SUITES = {
    "lemma1": (2,),
    "closed-forms": (1,),
    "rate-identities": (5, 6, 7, 11),
    "circle": (3, 4, 10),
    "trends": (8, 9),
}


def run_suite(name: str) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    checks = []
    for c in SUITES[name]:
        checks.extend(CRITERIA[c]())
    return checks
