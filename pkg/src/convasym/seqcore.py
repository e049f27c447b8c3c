"""Exact combinatorial sequences, multifold convolutions and small-n oracles.

A multifold convolution is

    M^(k)_n(a) = sum_{j_1 + ... + j_k = n} a_{j_1} ... a_{j_k},

the coefficient of t^n in g(t)^k where g is the generating function of a.
Everything here is exact integer (or rational) arithmetic except
:func:`multifold_logspace`, which is a floating-point variant for large n.

Path conventions: a path of half-length n is a sequence of 2n steps in
{+1, -1}. Its zero set is {0} U {t in 1..n : x_{2t} = 0}, so one abstract
"letter" of the regenerative structure is a pair of walk steps, and the
zero-set size always counts the mandatory time 0.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

FAMILIES = ("catalan", "central", "central_sq", "central_cube", "custom")
ENUMERATION_CAP = 8


@dataclass(frozen=True)
class SequenceSpec:
    """A named combinatorial sequence with exact term access.

    ``terms`` is only used by the ``custom`` family and must start with 1.
    """

    family: str
    terms: Optional[tuple] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "custom":
            if not self.terms:
                raise ValueError("custom sequences need explicit terms")
            terms = tuple(int(v) for v in self.terms)
            if any(v < 0 for v in terms):
                raise ValueError("custom terms must be nonnegative integers")
            if terms[0] != 1:
                raise ValueError("custom sequences must supply a_0 = 1")
            object.__setattr__(self, "terms", terms)
        elif self.terms is not None:
            raise ValueError(f"family {self.family!r} does not take explicit terms")

    def term(self, n: int) -> int:
        return seq_term(self, n)

    def prefix(self, n: int) -> list[int]:
        """Terms a_0 .. a_n."""
        if self.family == "custom":
            return [seq_term(self, j) for j in range(n + 1)]
        # binom(2j, j) = binom(2j-2, j-1) * 2 (2j - 1) / j, exact
        central = [1] * (n + 1)
        for j in range(1, n + 1):
            central[j] = central[j - 1] * 2 * (2 * j - 1) // j
        if self.family == "catalan":
            return [b // (j + 1) for j, b in enumerate(central)]
        power = {"central": 1, "central_sq": 2, "central_cube": 3}[self.family]
        return [b**power for b in central]


CATALAN = SequenceSpec("catalan")
CENTRAL = SequenceSpec("central")
CENTRAL_SQ = SequenceSpec("central_sq")
CENTRAL_CUBE = SequenceSpec("central_cube")


def as_spec(spec) -> SequenceSpec:
    """Accept either a SequenceSpec or a built-in family name."""
    if isinstance(spec, SequenceSpec):
        return spec
    return SequenceSpec(spec)


def seq_term(spec, n: int) -> int:
    spec = as_spec(spec)
    if n < 0:
        raise IndexError(f"sequence index must be nonnegative, got {n}")
    fam = spec.family
    if fam == "custom":
        if n >= len(spec.terms):
            raise IndexError(f"custom sequence has {len(spec.terms)} terms, index {n} requested")
        return spec.terms[n]
    b = math.comb(2 * n, n)
    if fam == "catalan":
        return b // (n + 1)
    if fam == "central":
        return b
    if fam == "central_sq":
        return b * b
    return b * b * b


def cauchy_product(a: Sequence[int], b: Sequence[int], length: int) -> list:
    """First ``length`` coefficients of the product of two power series."""
    out = []
    for m in range(length):
        lo = max(0, m - len(b) + 1)
        hi = min(m, len(a) - 1)
        out.append(sum(a[i] * b[m - i] for i in range(lo, hi + 1)))
    return out


def multifold_exact(spec, k: int, n: int) -> int:
    """M^(k)_n by k - 1 repeated Cauchy products of the prefix a_0..a_n."""
    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    base = as_spec(spec).prefix(n)
    acc = base
    for _ in range(k - 1):
        acc = cauchy_product(acc, base, n + 1)
    return acc[n]


def multifold_logspace(spec, k: int, n: int) -> float:
    """Natural log of M^(k)_n computed in floating point.

    Terms are tilted by s^j with s = a_n^(-1/n) and every partial product
    is renormalised by its maximum, the scale being carried as a log. All
    terms are positive so there is no cancellation; the relative error
    grows like k * n * eps. No exactness claim is made.
    """
    import numpy as np

    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    terms = as_spec(spec).prefix(n)
    if n == 0:
        return k * math.log(terms[0])
    log_a = np.array([math.log(v) if v > 0 else -np.inf for v in terms])
    log_s = -log_a[-1] / n
    tilted = log_a + log_s * np.arange(n + 1)
    shift = tilted.max()
    base = np.exp(tilted - shift)
    log_scale = shift
    acc = base
    acc_log = log_scale
    for _ in range(k - 1):
        acc = np.convolve(acc, base)[: n + 1]
        top = acc.max()
        acc /= top
        acc_log += log_scale + math.log(top)
    return math.log(acc[n]) + acc_log - n * log_s


def _exact_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"{what} produced a non-integral value {q}")
    return q.numerator


def multifold_closed_catalan(k: int, n: int) -> int:
    """k / (2n + k) * binom(2n + k, n)."""
    if k < 1 or n < 0:
        raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    return _exact_int(Fraction(k, 2 * n + k) * math.comb(2 * n + k, n), "Catalan closed form")


def falling_factorial(x: Fraction, n: int) -> Fraction:
    """(x)_n = x (x - 1) ... (x - n + 1), exact."""
    out = Fraction(1)
    for i in range(n):
        out *= x - i
    return out


def multifold_closed_central(k: int, n: int) -> int:
    """4^n (n - 1 + k/2)_n / n!  with the falling-factorial Pochhammer symbol.

    For odd k the argument is a half-integer, so this is evaluated in exact
    rationals and checked to be integral at the end.
    """
    if k < 1 or n < 0:
        raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    x = Fraction(2 * n - 2 + k, 2)
    val = 4**n * falling_factorial(x, n) / math.factorial(n)
    return _exact_int(val, "central binomial closed form")


def _sequence_for(ensemble):
    if ensemble == "dyck":
        return CATALAN
    if ensemble == "srwb":
        return CENTRAL
    raise ValueError(f"unknown ensemble {ensemble!r}; expected 'dyck' or 'srwb'")


def enumerate_paths(ensemble: str, n: int) -> list[tuple]:
    """All Dyck paths or bridges of length 2n as tuples of +1/-1 steps."""
    _sequence_for(ensemble)
    if n < 0:
        raise ValueError(f"half-length must be >= 0, got {n}")
    if n > ENUMERATION_CAP:
        raise ValueError(f"enumeration capped at n = {ENUMERATION_CAP}, got {n}")
    paths = []
    for ups in itertools.combinations(range(2 * n), n):
        steps = [-1] * (2 * n)
        for i in ups:
            steps[i] = 1
        if ensemble == "dyck":
            h = 0
            ok = True
            for s in steps:
                h += s
                if h < 0:
                    ok = False
                    break
            if not ok:
                continue
        paths.append(tuple(steps))
    return paths


def zero_set(steps: Sequence[int]) -> list[int]:
    """{0} U {t >= 1 : x_{2t} = 0} for a walk given by its steps."""
    zs = [0]
    h = 0
    for i, s in enumerate(steps):
        h += s
        if i % 2 == 1 and h == 0:
            zs.append((i + 1) // 2)
    return zs


def verify_lemma1(ensemble: str, k: int, n: int) -> bool:
    """Check the stars-and-bars identity by enumeration.

    sum over paths of binom(|Z_n| + k - 1, k) must equal M^(k+1)_n of the
    matching sequence (Catalan for Dyck paths, central binomial for bridges).
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    spec = _sequence_for(ensemble)
    lhs = sum(math.comb(len(zero_set(p)) + k - 1, k) for p in enumerate_paths(ensemble, n))
    return lhs == multifold_exact(spec, k + 1, n)


def first_return_sequence(spec, n_max: int) -> list[int]:
    """f_1 .. f_{n_max} with a = 1 / (1 - F), i.e. f_n = a_n - sum_{j<n} f_j a_{n-j}.

    f_n counts paths whose first return to the origin is at letter n. A
    negative value means the input is not of regenerative form.
    """
    a = as_spec(spec).prefix(n_max)
    if a[0] != 1:
        raise ValueError("first-return decomposition needs a_0 = 1")
    f = [0] * (n_max + 1)
    for m in range(1, n_max + 1):
        f[m] = a[m] - sum(f[j] * a[m - j] for j in range(1, m))
    return f[1:]


@dataclass
class ReturnHistogram:
    """Distribution of the zero-set size |Z_n| (which counts time 0).

    In exact mode ``counts`` maps size -> Fraction probability and ``total``
    is 1; in empirical mode it maps size -> sample count and ``total`` is
    the number of samples.
    """

    n: int
    counts: dict
    total: object
    exact: bool = True

    def pmf(self) -> dict:
        if self.exact:
            return {r: Fraction(w) / self.total for r, w in sorted(self.counts.items())}
        return {r: w / self.total for r, w in sorted(self.counts.items())}

    def tail(self, size: int):
        """P(|Z_n| >= size)."""
        return sum(p for r, p in self.pmf().items() if r >= size)


def return_counts(spec, n: int) -> list[int]:
    """Counts c_r = (f^{*r})_n of paths with exactly r returns, for r = 0..n."""
    f = [0] + first_return_sequence(spec, n) if n > 0 else [0]
    counts = [1 if n == 0 else 0]
    # row[m] = (f^{*r})_m; only m >= r can be nonzero
    row = list(f)
    for r in range(1, n + 1):
        counts.append(row[n])
        if r == n:
            break
        nxt = [0] * (n + 1)
        for m in range(r + 1, n + 1):
            nxt[m] = sum(f[j] * row[m - j] for j in range(1, m - r + 1))
        row = nxt
    return counts


def return_distribution_exact(spec, n: int) -> ReturnHistogram:
    """Exact law of |Z_n| under the uniform measure on paths counted by a_n.

    P(|Z_n| = r + 1) = (f^{*r})_n / a_n, r = 1..n.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    spec = as_spec(spec)
    total = spec.term(n)
    counts = return_counts(spec, n)
    if any(c < 0 for c in counts):
        raise ArithmeticError("negative return counts; input is not regenerative")
    probs = {r + 1: Fraction(c, total) for r, c in enumerate(counts) if c}
    if sum(probs.values()) != 1:
        raise ArithmeticError("return distribution does not normalise; input is not regenerative")
    return ReturnHistogram(n=n, counts=probs, total=Fraction(1), exact=True)
