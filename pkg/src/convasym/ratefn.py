"""Large-deviation rate functions for the density of returns to the origin.

Ensembles: ``srwb`` (one bridge), ``dyck`` (Dyck paths) and ``srwb2`` (two
independent bridges, jointly at zero). The first two are explicit; the
third is a parametric curve through complete elliptic integrals. The
generic route :func:`rate_from_gf` builds the curve from any generating
function and reproduces all three.

Conventions: 0 ln 0 = 0 throughout; x is the zero density |Z_n| / n.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfn
from .genfun import GeneratingFunction, TailBoundError

LN2 = math.log(2.0)
EXPLICIT = ("srwb", "dyck")
ENSEMBLES = ("srwb", "dyck", "srwb2")


@dataclass(frozen=True)
class RateCurvePoint:
    x: float
    i_val: float


def xlogx(x: float) -> float:
    if x < 0:
        raise ValueError(f"x ln x needs x >= 0, got {x!r}")
    return 0.0 if x == 0 else x * math.log(x)


def _check_ensemble(ens):
    if ens not in EXPLICIT:
        raise ValueError(f"ensemble must be one of {EXPLICIT}, got {ens!r}")


def u_fn(x: float, y: float) -> float:
    """(x+y) ln(x+y) - x ln x - y ln y; symmetric, nonnegative, increasing in x."""
    if x < 0 or y < 0:
        raise ValueError(f"U needs nonnegative arguments, got ({x!r}, {y!r})")
    return xlogx(x + y) - (xlogx(x) + xlogx(y))


def cal_u(ens: str, y: float) -> float:
    """Limit of (1/n) ln E[exp(-n U(Z_n/n, y))] for the srwb or dyck ensemble.

    srwb: (1 + y/2) ln(1 + y/2) - (y/2) ln(y/2)
    dyck: (2 + y) ln(2 + y) - (1 + y) ln(1 + y) - 2 ln 2
    """
    _check_ensemble(ens)
    if y < 0:
        raise ValueError(f"y must be >= 0, got {y!r}")
    if ens == "srwb":
        h = 0.5 * y
        return xlogx(1.0 + h) - xlogx(h)
    return xlogx(2.0 + y) - xlogx(1.0 + y) - 2.0 * LN2


def cal_u_prime(ens: str, y: float) -> float:
    """d/dy of :func:`cal_u`, for y > 0."""
    _check_ensemble(ens)
    if not y > 0:
        raise ValueError(f"y must be > 0, got {y!r}")
    if ens == "srwb":
        return 0.5 * math.log1p(2.0 / y)
    return math.log1p(1.0 / (1.0 + y))


def rate_explicit(ens: str, x: float) -> float:
    """I(x) for srwb or dyck on [0, 1]."""
    _check_ensemble(ens)
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    common = xlogx(1.0 - x) - xlogx(2.0 - x)
    if ens == "srwb":
        return (2.0 - x) * LN2 + common
    return 2.0 * LN2 + common


def y_star(ens: str, x: float) -> float:
    """Minimiser in y of cal_u(y) - U(x, y), for x in (0, 1)."""
    _check_ensemble(ens)
    if not (0.0 < x < 1.0):
        raise ValueError(f"x must lie in (0, 1), got {x!r}")
    if ens == "srwb":
        return x * x / (2.0 - 2.0 * x)
    return x / (1.0 - x)


def x_star(ens: str, y: float) -> float:
    """Maximiser in x of U(x, y) - I(x), for y > 0."""
    _check_ensemble(ens)
    if not y > 0:
        raise ValueError(f"y must be > 0, got {y!r}")
    if ens == "srwb":
        # sqrt(y (y + 2)) - y, rationalised
        return 2.0 * y / (math.sqrt(y * (y + 2.0)) + y)
    return y / (1.0 + y)


def v_fn(ens: str, x: float, y: float) -> float:
    return cal_u(ens, y) - u_fn(x, y)


def w_fn(ens: str, x: float, y: float) -> float:
    return u_fn(x, y) - rate_explicit(ens, x)


def v_w_identities(ens: str, x: float, y: float) -> tuple[float, float]:
    """(V(x, y), W(x, y)) with V = cal_u - U and W = U - I.

    At the optimisers, V(x, y_star(x)) = -I(x) and W(x_star(y), y) = cal_u(y).
    """
    _check_ensemble(ens)
    if not (0.0 < x < 1.0) or not y > 0:
        raise ValueError(f"need x in (0, 1) and y > 0, got ({x!r}, {y!r})")
    return v_fn(ens, x, y), w_fn(ens, x, y)


def rate_parametric_2srwb(t: float) -> RateCurvePoint:
    """Point (X(t), I(t)) on the two-bridge rate curve, 0 < t < 1/16.

    With m = 16 t, D = E(m) - (1 - m) K(m):
        X = 2 (1 - m) K / D * ((2/pi) K - 1)
        I = -X ln(1 - pi / (2K)) + ln t + 4 ln 2
    t -> 0 gives (1, 2 ln 2); t -> 1/16 gives (0, 0).
    """
    if not (0.0 < t < 1.0 / 16.0):
        raise ValueError(f"t must lie in (0, 1/16), got {t!r}")
    m = 16.0 * t
    k_val = specfn.elliptic_ke(m).k_val
    k_minus, d = specfn.elliptic_excess(m)
    x = 2.0 * (1.0 - m) * k_val / d * (k_minus / specfn.HALF_PI)
    i_val = -x * math.log(k_minus / k_val) + math.log(t) + 4.0 * LN2
    return RateCurvePoint(x=x, i_val=i_val)


def rate_from_gf(gf: GeneratingFunction, t: float) -> RateCurvePoint:
    """Rate-curve point from a generating function at tilt t in (0, rho).

    U(t) = g / (t g') is the inverse saddle map, x(t) = U(t) (g(t) - 1) and
    I(t) = -x(t) ln(1 - 1/g(t)) + ln t + alpha, with alpha = -ln rho.
    """
    g = gf.value(t)
    excess = gf.excess(t)
    if excess <= 0:
        raise ValueError("degenerate point: g(t) = 1")
    x = excess / gf.logderiv(t)
    i_val = -x * math.log(excess / g) + math.log(t) + gf.alpha
    return RateCurvePoint(x=x, i_val=i_val)


def solve_y_from_moment_eq(ens: str, x: float) -> float:
    """Solve d/dy U(x, y) = d/dy cal_u(y), i.e. ln((x+y)/y) = cal_u'(y), by bisection.

    The root is the minimiser y_star(x). Bisection runs on ln y.
    """
    _check_ensemble(ens)
    if not (0.0 < x < 1.0):
        raise ValueError(f"x must lie in (0, 1), got {x!r}")

    def h(log_y):
        y = math.exp(log_y)
        return math.log1p(x / y) - cal_u_prime(ens, y)

    lo, hi = -700.0, 700.0
    if not (h(lo) > 0 > h(hi)):
        raise ArithmeticError(f"no root bracketed for x={x}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def parametric_grid_2srwb(points: int = 10_000) -> tuple[np.ndarray, np.ndarray]:
    """Two-bridge curve sampled on a t-grid, returned sorted by increasing x.

    The t-grid is dense near both ends (log-spaced in t and in 1/16 - t),
    reaching within 1e-14 of each, so the curve spans x in [0, 1] to
    better than 1e-9 without adding the limiting endpoints by hand.
    """
    if points < 4:
        raise ValueError("need at least 4 grid points")
    half = points // 2
    eps = np.logspace(-14, math.log10(1.0 / 32.0), half)
    ts = np.concatenate((eps, 1.0 / 16.0 - eps[::-1]))
    ts = np.unique(ts[(ts > 0) & (ts < 1.0 / 16.0)])
    pts = [rate_parametric_2srwb(float(t)) for t in ts]
    xs = np.array([p.x for p in pts])
    ys = np.array([p.i_val for p in pts])
    order = np.argsort(xs)
    return xs[order], ys[order]


class TwoBridgeRate:
    """I(x) for two bridges, by linear interpolation of the parametric curve."""

    def __init__(self, points: int = 10_000):
        self.xs, self.ys = parametric_grid_2srwb(points)

    def __call__(self, x):
        return np.interp(x, self.xs, self.ys)


def rate_curve(ens: str, grid: int) -> list[RateCurvePoint]:
    """Rate curve on an x-grid of ``grid`` points (srwb, dyck) or a t-grid (srwb2)."""
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    if ens in EXPLICIT:
        xs = np.linspace(0.0, 1.0, grid)
        return [RateCurvePoint(float(x), rate_explicit(ens, float(x))) for x in xs]
    if ens == "srwb2":
        xs, ys = parametric_grid_2srwb(max(grid, 4))
        return [RateCurvePoint(float(x), float(y)) for x, y in zip(xs, ys)]
    raise ValueError(f"unknown ensemble {ens!r}; expected one of {ENSEMBLES}")


def rate_curve_from_gf(gf: GeneratingFunction, grid: int) -> list[RateCurvePoint]:
    """rate_from_gf on a t-grid, sorted by x, with the (0, 0) endpoint added."""
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    rho = gf.radius
    ts = rho * np.linspace(0.0, 1.0, grid + 2)[1:-1]
    pts = [rate_from_gf(gf, float(t)) for t in ts]
    pts.append(RateCurvePoint(0.0, 0.0))
    return sorted(pts, key=lambda p: p.x)


def rate_at_x(gf: GeneratingFunction, x: float) -> float:
    """I(x) from a generating function by inverting x(t), for x in [0, 1].

    x(t) decreases from 1 (t -> 0) to its value at the radius. The endpoint
    x = 1 uses the limit I = alpha - ln a_1; x = 0 gives 0 when the curve
    reaches it.
    """
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    if x == 1.0:
        a1 = gf.excess(gf.radius * 1e-300) / (gf.radius * 1e-300)
        return gf.alpha - math.log(a1)
    if x == 0.0:
        return 0.0
    rho = gf.radius
    lo, hi = 0.0, 1.0  # u = t / rho
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        try:
            xm = rate_from_gf(gf, rho * mid).x
        except TailBoundError:
            hi = mid
            continue
        if xm > x:
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        raise ArithmeticError(f"x = {x} not bracketed")
    p = rate_from_gf(gf, rho * lo)
    if abs(p.x - x) > 1e-6:
        raise ValueError(f"x = {x} lies below the range reached by this generating function")
    return p.i_val
