"""Special functions: log-Gamma and complete elliptic integrals.

Elliptic integrals use the *parameter* convention (the one Mathematica uses):

    K(m) = int_0^1 dx / sqrt((1 - x^2)(1 - m x^2))
    E(m) = int_0^1 sqrt(1 - m x^2) / sqrt(1 - x^2) dx

so that m is the squared modulus. With this convention the generating
function of binom(2n, n)^2 is (2/pi) K(16 t).
"""

import math
from dataclasses import dataclass

HALF_PI = 0.5 * math.pi

# Relative stopping threshold for the AGM loop.
_AGM_TOL = 1e-16
# Below this parameter the small-m quantities are summed as power series.
_SERIES_CUTOFF = 0.25


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


@dataclass(frozen=True)
class EllipticPair:
    """Values of K(m) and E(m) at a parameter m in [0, 1)."""

    k_val: float
    e_val: float
    m: float


def _check_parameter(m, lo_open=False):
    if not (0.0 <= m < 1.0) or (lo_open and m == 0.0):
        interval = "(0, 1)" if lo_open else "[0, 1)"
        raise ValueError(f"elliptic parameter m must lie in {interval}, got {m!r}")


def elliptic_ke(m: float) -> EllipticPair:
    """Complete elliptic integrals K(m), E(m) by the arithmetic-geometric mean.

    K = pi / (2 AGM(1, sqrt(1 - m))) and E = K (1 - sum_j 2^(j-1) c_j^2)
    with c_0^2 = m and c_{j+1} = (a_j - b_j) / 2.
    """
    _check_parameter(m)
    a = 1.0
    b = math.sqrt(1.0 - m)
    acc = 0.5 * m
    weight = 0.5
    for _ in range(64):
        if abs(a - b) <= _AGM_TOL * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        weight *= 2.0
        acc += weight * c * c
    k_val = HALF_PI / a
    return EllipticPair(k_val=k_val, e_val=k_val * (1.0 - acc), m=m)


def _small_m_series(m):
    # K - pi/2 = (pi/2) sum_{j>=1} c_j m^j, E - (1-m) K = (pi/2) sum_{j>=1} c_{j-1} m^j / (2j),
    # where c_j = (binom(2j, j) / 4^j)^2.
    k_minus = 0.0
    d = 0.0
    c_prev = 1.0
    power = 1.0
    j = 1
    while True:
        power *= m
        c_cur = c_prev * ((2 * j - 1) / (2 * j)) ** 2
        dk = c_cur * power
        dd = c_prev * power / (2 * j)
        k_minus += dk
        d += dd
        if dd < 1e-18 * d:
            break
        c_prev = c_cur
        j += 1
    return HALF_PI * k_minus, HALF_PI * d


def elliptic_excess(m: float) -> tuple[float, float]:
    """Return (K(m) - pi/2, E(m) - (1 - m) K(m)) without cancellation near m = 0.

    Both quantities vanish linearly at m = 0 and appear as small differences
    in the 2SRWB rate curve near its right endpoint.
    """
    _check_parameter(m)
    if m == 0.0:
        return 0.0, 0.0
    if m < _SERIES_CUTOFF:
        return _small_m_series(m)
    pair = elliptic_ke(m)
    return pair.k_val - HALF_PI, pair.e_val - (1.0 - m) * pair.k_val


def elliptic_ke_derivs(m: float) -> tuple[float, float]:
    """Derivatives (dK/dm, dE/dm) for 0 < m < 1."""
    _check_parameter(m, lo_open=True)
    pair = elliptic_ke(m)
    _, d = elliptic_excess(m)
    dk = d / (2.0 * m * (1.0 - m))
    de = (pair.e_val - pair.k_val) / (2.0 * m)
    return dk, de
