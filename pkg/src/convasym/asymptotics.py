"""Saddle-point (simplified circle method) asymptotics for multifold convolutions.

For k/n -> kappa the estimate is

    M^(k)_n ~ g(T)^k T^(-n) / sqrt(2 pi k V(T)),

where T = T_*(kappa) minimises kappa ln g(t) - ln t on (0, rho), i.e.
kappa L(T) = 1 with L = t (ln g)', and V = t L'. Also provides the closed
asymptotics for binom(2n, n)^2 and binom(2n, n)^3 convolutions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .genfun import GeneratingFunction, TailBoundError
from .specfn import ln_gamma

# Bisection stops once the bracket is this close to rho (relative).
RADIUS_GAP = 1e-14
MAX_CIRCLE_WORK = 10**6


class SaddleAtRadius(ArithmeticError):
    """No interior critical point could be bracketed below the radius."""


@dataclass(frozen=True)
class SaddlePoint:
    kappa: float
    t_star: float
    v: float
    exp_rate: float

    def residual(self, gf: GeneratingFunction) -> float:
        return self.kappa * gf.logderiv(self.t_star) - 1.0


def _upper_bracket(gf, kappa):
    """Largest evaluable t with kappa L(t) >= 1, walking towards rho."""
    rho = gf.radius
    gap = 0.5
    last_ok = None
    while gap * rho > RADIUS_GAP * rho:
        t = rho * (1.0 - gap)
        try:
            val = kappa * gf.logderiv(t)
        except TailBoundError:
            break
        last_ok = t
        if val >= 1.0:
            return t
        gap *= 0.5
    where = f"t = {last_ok!r}" if last_ok is not None else "any evaluable t"
    raise SaddleAtRadius(
        f"saddle at radius: kappa * t (ln g)'(t) < 1 up to {where} (rho = {rho})"
    )


def solve_saddle(gf: GeneratingFunction, kappa: float) -> SaddlePoint:
    """Unique minimiser of kappa ln g(t) - ln t by bisection on kappa L(t) - 1.

    L is strictly increasing (g is log-convex), so the sign change is unique.
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    lo = 0.0
    hi = _upper_bracket(gf, kappa)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if kappa * gf.logderiv(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with smaller residual
    t_star = hi
    if lo > 0 and abs(kappa * gf.logderiv(lo) - 1.0) < abs(kappa * gf.logderiv(hi) - 1.0):
        t_star = lo
    if gf.radius - t_star <= RADIUS_GAP * gf.radius:
        raise SaddleAtRadius(f"saddle at radius for kappa={kappa}")
    v = float(gf.logderiv2(t_star))
    rate = float(kappa * math.log(gf.value(t_star)) - math.log(t_star))
    return SaddlePoint(kappa=kappa, t_star=t_star, v=v, exp_rate=rate)


def exp_rate(gf: GeneratingFunction, kappa: float) -> float:
    """min over t of kappa ln g(t) - ln t."""
    return solve_saddle(gf, kappa).exp_rate


def multifold_asymptotic(gf: GeneratingFunction, k: int, n: int) -> float:
    """Natural log of the saddle-point estimate of M^(k)_n."""
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    sp = solve_saddle(gf, k / n)
    t = sp.t_star
    return (k * math.log(gf.value(t)) - n * math.log(t)
            - 0.5 * math.log(2.0 * math.pi * k * sp.v))


def circle_integral_numeric(gf_series: GeneratingFunction, k: int, n: int,
                            t: float = None) -> complex:
    """(1/2pi) int_{-pi}^{pi} (g(t e^{i theta}) / g(t))^k e^{-i n theta} d theta.

    Trapezoid rule on max(4n, k (N - 1) + 1) nodes, where N is the series
    truncation; with that many nodes the rule is exact for the truncated
    polynomial, so the only error is the truncation tail. ``t`` defaults to
    the saddle T_*(k/n) (for n = 0, to rho / 2).
    """
    if gf_series.source != "series":
        raise TypeError("circle integral needs a series generating function")
    if k < 1 or n < 0:
        raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    if t is None:
        t = solve_saddle(gf_series, k / n).t_star if n > 0 else 0.5 * gf_series.radius
    w = gf_series.coefficients(t)
    # drop negligible trailing weights before sizing the node set
    keep = np.nonzero(w > 1e-18 * w.max())[0]
    w = w[: keep[-1] + 1]
    w = w / w.sum()
    if k * len(w) > MAX_CIRCLE_WORK:
        raise ValueError(f"k * N = {k * len(w)} exceeds the direct-evaluation cap")
    nodes = max(4 * n, k * (len(w) - 1) + 1)
    theta = -math.pi + 2.0 * math.pi * np.arange(nodes) / nodes
    z = np.exp(1j * theta)
    vals = np.polynomial.polynomial.polyval(z, w) ** k * np.exp(-1j * n * theta)
    return complex(vals.mean())


def cauchy_coefficient(gf_series: GeneratingFunction, k: int, n: int, t: float = None) -> float:
    """Reconstruct M^(k)_n = g(t)^k t^(-n) C_{n,k}(t) from the circle integral."""
    if t is None:
        t = solve_saddle(gf_series, k / n).t_star if n > 0 else 0.5 * gf_series.radius
    c = circle_integral_numeric(gf_series, k, n, t)
    return math.exp(k * math.log(gf_series.value(t)) - n * math.log(t)) * c.real


def gaussian_prefactor(gf: GeneratingFunction, k: int, n: int) -> float:
    """1 / sqrt(2 pi k V(T_*(k/n))), the predicted value of the circle integral."""
    sp = solve_saddle(gf, k / n)
    return 1.0 / math.sqrt(2.0 * math.pi * k * sp.v)


def three_bridge_constant() -> float:
    """pi / Gamma(3/4)^4, the value of sum_n binom(2n, n)^3 / 64^n."""
    return math.pi * math.exp(-4.0 * ln_gamma(0.75))


def asympt_2srwb(k: int, n: int) -> float:
    """ln of 16^n / (n pi) * (ln n / pi)^(k-1) * k."""
    if k < 1 or n < 2:
        raise ValueError(f"need k >= 1 and n >= 2, got k={k}, n={n}")
    return (n * math.log(16.0) - math.log(n * math.pi)
            + (k - 1) * math.log(math.log(n) / math.pi) + math.log(k))


def asympt_3srwb(k: int, n: int) -> float:
    """ln of 64^n / (n pi)^(3/2) * (pi / Gamma(3/4)^4)^(k-1) * k."""
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    return (n * math.log(64.0) - 1.5 * math.log(n * math.pi)
            + (k - 1) * math.log(three_bridge_constant()) + math.log(k))
