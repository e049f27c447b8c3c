"""Generating functions g(t) = sum a_n t^n with their logarithmic derivatives.

Two derived quantities drive the saddle-point machinery:

    L(t) = t (ln g)'(t)                     (t times the tilted mean)
    V(t) = t (ln g)'(t) + t^2 (ln g)''(t)   (= t L'(t), a tilted variance)

For a series source, with weights a_n t^n, L is the mean of n and V its
variance, so both are computed from the moment sums S0, S1, S2 directly.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import specfn
from .seqcore import SequenceSpec, as_spec

CLOSED_SOURCES = ("closed_catalan", "closed_central", "closed_central_sq")
TAIL_TOL = 1e-12

# radius of convergence per built-in family; alpha = -ln(radius)
RADII = {
    "catalan": 0.25,
    "central": 0.25,
    "central_sq": 1.0 / 16.0,
    "central_cube": 1.0 / 64.0,
}


class TailBoundError(ArithmeticError):
    """Series truncation is too short for the requested accuracy at this t."""


@dataclass
class GeneratingFunction:
    """g(t) from a closed form or from a truncated coefficient series.

    ``source`` is one of ``closed_catalan``, ``closed_central``,
    ``closed_central_sq`` or ``series``. Series sources hold the scaled
    coefficients c_j = a_j rho^j (floats) for j < N, computed once at
    construction and never mutated afterwards.
    """

    source: str
    radius: float
    spec: Optional[SequenceSpec] = None
    truncation: Optional[int] = None
    scaled: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def alpha(self) -> float:
        return -math.log(self.radius)

    @property
    def family(self) -> str:
        if self.source == "series":
            return self.spec.family
        return self.source[len("closed_"):]

    def _check_t(self, t):
        if not (0.0 < t < self.radius):
            raise ValueError(f"t must lie in (0, {self.radius}), got {t!r}")

    # -- series machinery ------------------------------------------------

    def _moment_sums(self, t):
        """S_p = sum_j j^p c_j r^j for p = 0, 1, 2 with r = t / rho, plus tail checks."""
        r = t / self.radius
        c = self.scaled
        j = np.arange(len(c), dtype=float)
        w = c * np.exp(j * math.log(r))
        s0 = float(w.sum())
        s1 = float((j * w).sum())
        s2 = float((j * j * w).sum())
        # Ratios c_{j+1}/c_j of the built-in families increase to 1, so the
        # tail past the last term is bounded by a geometric series in r.
        last = len(c) - 1
        if r >= 1.0:
            raise TailBoundError("series sources cannot be evaluated at the radius")
        grow = (last + 2.0) / (last + 1.0)
        for p, s in ((0, s0), (1, s1), (2, s2)):
            ratio = r * grow**p
            if ratio >= 1.0:
                raise TailBoundError(f"tail bound diverges at t={t}")
            tail = w[last] * last**p * ratio / (1.0 - ratio) if last > 0 else 0.0
            if s > 0 and tail > TAIL_TOL * s:
                raise TailBoundError(
                    f"truncation N={len(c)} leaves relative tail {tail / s:.2e} at t={t}"
                )
        return s0, s1, s2

    def coefficients(self, t: float) -> np.ndarray:
        """Weights a_j t^j for the stored truncation (series sources only)."""
        if self.source != "series":
            raise TypeError("coefficients are only stored for series sources")
        self._check_t(t)
        self._moment_sums(t)
        r = t / self.radius
        return self.scaled * np.exp(np.arange(len(self.scaled)) * math.log(r))

    # -- public evaluators ------------------------------------------------

    def value(self, t: float) -> float:
        self._check_t(t)
        src = self.source
        if src == "closed_catalan":
            return 2.0 / (1.0 + math.sqrt(1.0 - 4.0 * t))
        if src == "closed_central":
            return 1.0 / math.sqrt(1.0 - 4.0 * t)
        if src == "closed_central_sq":
            return specfn.elliptic_ke(16.0 * t).k_val / specfn.HALF_PI
        s0, _, _ = self._moment_sums(t)
        return s0

    def excess(self, t: float) -> float:
        """g(t) - 1 computed without cancellation for small t."""
        self._check_t(t)
        src = self.source
        if src == "closed_catalan":
            g = self.value(t)
            return t * g * g
        if src == "closed_central":
            return math.expm1(-0.5 * math.log1p(-4.0 * t))
        if src == "closed_central_sq":
            k_minus, _ = specfn.elliptic_excess(16.0 * t)
            return k_minus / specfn.HALF_PI
        r = t / self.radius
        c = self.scaled
        j = np.arange(1, len(c), dtype=float)
        self._moment_sums(t)
        return float((c[1:] * np.exp(j * math.log(r))).sum())

    def logderiv(self, t: float) -> float:
        """t g'(t) / g(t)."""
        self._check_t(t)
        src = self.source
        if src == "closed_catalan":
            s = math.sqrt(1.0 - 4.0 * t)
            return 2.0 * t / (s * (1.0 + s))
        if src == "closed_central":
            return 2.0 * t / (1.0 - 4.0 * t)
        if src == "closed_central_sq":
            m = 16.0 * t
            k_val = specfn.elliptic_ke(m).k_val
            _, d = specfn.elliptic_excess(m)
            return d / (2.0 * (1.0 - m) * k_val)
        s0, s1, _ = self._moment_sums(t)
        return s1 / s0

    def logderiv2(self, t: float) -> float:
        """t (ln g)'(t) + t^2 (ln g)''(t); strictly positive on (0, rho)."""
        self._check_t(t)
        src = self.source
        if src == "closed_catalan":
            return t * (1.0 - 4.0 * t) ** -1.5
        if src == "closed_central":
            return 2.0 * t / (1.0 - 4.0 * t) ** 2
        if src == "closed_central_sq":
            # V = m dL/dm with L = D / (2 (1-m) K), D = E - (1-m) K, dD/dm = K / 2
            m = 16.0 * t
            k_val = specfn.elliptic_ke(m).k_val
            _, d = specfn.elliptic_excess(m)
            dk, _ = specfn.elliptic_ke_derivs(m)
            denom = 2.0 * (1.0 - m) * k_val
            ddenom = 2.0 * ((1.0 - m) * dk - k_val)
            dl = (0.5 * k_val * denom - d * ddenom) / denom**2
            return m * dl
        s0, s1, s2 = self._moment_sums(t)
        mean = s1 / s0
        return s2 / s0 - mean * mean


def closed_form(family: str) -> GeneratingFunction:
    """Closed-form generating function for catalan, central or central_sq."""
    source = f"closed_{family}"
    if source not in CLOSED_SOURCES:
        raise ValueError(f"no closed form for {family!r}; available: catalan, central, central_sq")
    return GeneratingFunction(source=source, radius=RADII[family])


def _scaled_coefficients(spec, n_terms, radius):
    if spec.family in RADII:
        inv = round(1.0 / radius)
        terms = spec.prefix(n_terms - 1)
        return np.array([a / inv**j for j, a in enumerate(terms)], dtype=float)
    rho = Fraction(radius)
    out = []
    power = Fraction(1)
    for j in range(n_terms):
        out.append(float(spec.term(j) * power))
        power *= rho
    return np.array(out, dtype=float)


def series(spec, truncation: int = 2000, radius: Optional[float] = None) -> GeneratingFunction:
    """Truncated power series sum_{j < N} a_j t^j.

    Built-in families know their radius; ``custom`` sequences must pass it
    (and should have coefficient ratios increasing towards 1/radius, which
    the geometric tail bound relies on).
    """
    spec = as_spec(spec)
    if radius is None:
        if spec.family not in RADII:
            raise ValueError("custom series need an explicit radius of convergence")
        radius = RADII[spec.family]
    elif spec.family in RADII and radius != RADII[spec.family]:
        raise ValueError(f"{spec.family} has radius {RADII[spec.family]}, got {radius}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if spec.family == "custom":
        truncation = min(truncation, len(spec.terms))
    if truncation < 2:
        raise ValueError("series truncation must keep at least two terms")
    scaled = _scaled_coefficients(spec, truncation, radius)
    return GeneratingFunction(source="series", radius=radius, spec=spec,
                              truncation=truncation, scaled=scaled)


def make_gf(family: str, truncation: int = 2000) -> GeneratingFunction:
    """Closed form when one exists, otherwise a truncated series."""
    if f"closed_{family}" in CLOSED_SOURCES:
        return closed_form(family)
    return series(family, truncation)


def gf_eval(gf: GeneratingFunction, t: float) -> float:
    return gf.value(t)


def gf_logderiv(gf: GeneratingFunction, t: float) -> float:
    return gf.logderiv(t)


def gf_logderiv2(gf: GeneratingFunction, t: float) -> float:
    return gf.logderiv2(t)


def boundary_value(family: str, terms: int = 100_000) -> float:
    """g(rho) for central_cube (or any summable central power) from partial sums.

    Scaled terms behave like (pi j)^(-p/2) (1 - p/(8j) + ...); the tail
    past ``terms`` is estimated by the integral of the leading term plus
    its first correction.
    """
    powers = {"central": 1, "central_sq": 2, "central_cube": 3}
    if family not in powers:
        raise ValueError(f"boundary sums are defined for central powers, got {family!r}")
    p = powers[family]
    if p < 3:
        raise ValueError(f"{family} diverges at its radius")
    # b_j = binom(2j, j) / 4^j via its ratio recurrence, kept in floats
    j = np.arange(1, terms, dtype=float)
    ratios = (2.0 * j - 1.0) / (2.0 * j)
    b = np.concatenate(([1.0], np.cumprod(ratios)))
    partial = float(np.sum(b**p))
    big_n = terms - 0.5
    lead = math.pi ** (-p / 2.0)
    tail = lead * (big_n ** (1 - p / 2.0) / (p / 2.0 - 1.0)
                   - (p / 8.0) * big_n ** (-p / 2.0) / (p / 2.0))
    return partial + tail
