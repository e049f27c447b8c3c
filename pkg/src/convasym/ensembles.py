"""Random Dyck paths and simple random walk bridges, and their zero sets.

Samplers
  * bridges: Fisher-Yates shuffle of n up-steps and n down-steps;
  * Dyck paths: shuffle n up-steps and n + 1 down-steps, rotate to start
    just after the first minimum of the partial sums (cycle lemma), drop
    the final down-step.

Both are exactly uniform. Monte Carlo runs are split into fixed-size
chains; chain i draws from PCG64 seeded with ``seed + i``, so results do not
depend on how many worker threads are used.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from . import ratefn
from .asymptotics import three_bridge_constant
from .seqcore import ReturnHistogram, as_spec, return_distribution_exact

RNG_ALGORITHM = "numpy PCG64, chain seed = seed + chain index"
CHAIN_SIZE = 2000
THREADS_ENV = "CONVASYM_THREADS"


# -- compiled kernels ------------------------------------------------------
#
# Shuffle indices are floor(u * (i + 1)) with u uniform on [0, 1) in 53-bit
# steps; the relative bias per draw is at most (i + 1) / 2^53.

@numba.njit(cache=True, nogil=True)
def _shuffle(rng, steps):
    for i in range(steps.shape[0] - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        tmp = steps[i]
        steps[i] = steps[j]
        steps[j] = tmp


@numba.njit(cache=True, nogil=True)
def _fill_bridge(rng, steps, n):
    steps[:n] = 1
    steps[n:] = -1
    _shuffle(rng, steps)


@numba.njit(cache=True, nogil=True)
def _fill_dyck(rng, buf, out, n):
    buf[:n] = 1
    buf[n:] = -1
    _shuffle(rng, buf)
    # first index of the minimum of S_0..S_{2n+1}
    h = 0
    low = 0
    start = 0
    for i in range(2 * n + 1):
        h += buf[i]
        if h < low:
            low = h
            start = i + 1
    size = 2 * n + 1
    for s in range(2 * n):
        out[s] = buf[(start + s) % size]


@numba.njit(cache=True, nogil=True)
def _bridge_zero_counts(rng, n, m, count, out):
    steps = np.empty(2 * n, np.int8)
    joint = np.empty(n + 1, np.int32)
    for s in range(count):
        joint[:] = 0
        for _ in range(m):
            _fill_bridge(rng, steps, n)
            h = 0
            for i in range(2 * n):
                h += steps[i]
                if h == 0 and (i & 1) == 1:
                    joint[(i + 1) >> 1] += 1
        z = 1
        for t in range(1, n + 1):
            if joint[t] == m:
                z += 1
        out[s] = z


@numba.njit(cache=True, nogil=True)
def _dyck_zero_counts(rng, n, count, out):
    buf = np.empty(2 * n + 1, np.int8)
    path = np.empty(2 * n, np.int8)
    for s in range(count):
        _fill_dyck(rng, buf, path, n)
        h = 0
        z = 1
        for i in range(2 * n):
            h += path[i]
            if h == 0:
                z += 1
        out[s] = z


# -- single paths ----------------------------------------------------------

def sample_bridge(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform bridge of length 2n as an int8 array of +1/-1 steps."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    steps = np.empty(2 * n, np.int8)
    _fill_bridge(rng, steps, n)
    return steps


def sample_dyck(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform Dyck path of length 2n as an int8 array of +1/-1 steps."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    buf = np.empty(2 * n + 1, np.int8)
    out = np.empty(2 * n, np.int8)
    _fill_dyck(rng, buf, out, n)
    return out


def joint_zero_count(paths, n: int) -> int:
    """|{0} U {t in 1..n : every walk is at 0 at time 2t}|."""
    if not len(paths):
        raise ValueError("need at least one path")
    at_zero = np.ones(n, dtype=bool)
    for p in paths:
        p = np.asarray(p)
        if p.shape != (2 * n,):
            raise ValueError(f"path length {p.shape[0]} does not match 2n = {2 * n}")
        heights = np.cumsum(p, dtype=np.int64)[1::2]
        at_zero &= heights == 0
    return 1 + int(at_zero.sum())


# -- limit laws --------------------------------------------------------------

def three_bridge_p() -> float:
    """Gamma(3/4)^4 / pi."""
    return 1.0 / three_bridge_constant()


def dyck_limit_pmf(k: int) -> float:
    """lim P(|Z_n| = k) = (k - 1) 2^-k for Dyck paths."""
    return (k - 1) * 2.0**-k if k >= 2 else 0.0


def srwb_limit_moment(k: int) -> float:
    """lim E[(n^-1/2 |Z_n|)^k] = 2^k Gamma(k/2 + 1) for one bridge."""
    return 2.0**k * math.gamma(0.5 * k + 1.0)


def srwb2_limit_moment(k: int) -> float:
    """lim E[((pi / ln n) |Z_n|)^k] = (k + 1)! for two bridges."""
    return float(math.factorial(k + 1))


def srwb3_limit_pmf(k: int) -> float:
    """lim P(|Z_n| = k) = (k - 1)(1 - p)^(k - 2) p^2 for three bridges."""
    p = three_bridge_p()
    return (k - 1) * (1.0 - p) ** (k - 2) * p * p if k >= 2 else 0.0


# -- Monte Carlo ---------------------------------------------------------------

@dataclass(frozen=True)
class SampleConfig:
    """``ensemble`` is ``dyck`` or ``srwb_<m>`` (m independent bridges)."""

    ensemble: str
    n: int
    num_samples: int
    seed: int

    def __post_init__(self):
        self.walks  # validates the ensemble name
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.num_samples < 1:
            raise ValueError(f"need at least one sample, got {self.num_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def walks(self) -> int:
        """Number of bridges per sample (0 for Dyck paths)."""
        if self.ensemble == "dyck":
            return 0
        if self.ensemble.startswith("srwb_"):
            try:
                m = int(self.ensemble[5:])
            except ValueError:
                m = 0
            if m >= 1:
                return m
        raise ValueError(f"ensemble must be 'dyck' or 'srwb_<m>' with m >= 1, got {self.ensemble!r}")


@dataclass
class Statistic:
    name: str
    estimate: float
    stderr: float
    limit: Optional[float] = None

    def z_score(self) -> float:
        if self.limit is None or self.stderr == 0:
            return float("nan")
        return (self.estimate - self.limit) / self.stderr


@dataclass
class MonteCarloResult:
    config: SampleConfig
    histogram: ReturnHistogram
    zero_counts: np.ndarray = field(repr=False)
    statistics: list
    rng: str = RNG_ALGORITHM

    def stat(self, name: str) -> Statistic:
        for s in self.statistics:
            if s.name == name:
                return s
        raise KeyError(name)


def _worker_count():
    raw = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if raw:
        try:
            return max(1, min(int(raw), cap))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return cap


def _run_chain(cfg, index, size):
    rng = np.random.Generator(np.random.PCG64(cfg.seed + index))
    out = np.empty(size, np.int64)
    if cfg.walks == 0:
        _dyck_zero_counts(rng, cfg.n, size, out)
    else:
        _bridge_zero_counts(rng, cfg.n, cfg.walks, size, out)
    return out


def sample_zero_counts(cfg: SampleConfig, workers: Optional[int] = None) -> np.ndarray:
    """Zero-set sizes for ``cfg.num_samples`` independent samples, in chain order."""
    sizes = [CHAIN_SIZE] * (cfg.num_samples // CHAIN_SIZE)
    if cfg.num_samples % CHAIN_SIZE:
        sizes.append(cfg.num_samples % CHAIN_SIZE)
    workers = workers or _worker_count()
    if workers == 1 or len(sizes) == 1:
        parts = [_run_chain(cfg, i, s) for i, s in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _run_chain(cfg, *a), enumerate(sizes)))
    return np.concatenate(parts)


def _mean_stat(name, values, limit):
    n = len(values)
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return Statistic(name, float(values.mean()), se, limit)


def _pmf_stats(z, limit_fn, kmax=6):
    out = []
    for k in range(2, kmax + 1):
        out.append(_mean_stat(f"P(|Z|={k})", (z == k).astype(float), limit_fn(k) if limit_fn else None))
    return out


def monte_carlo_stats(cfg: SampleConfig, workers: Optional[int] = None) -> MonteCarloResult:
    """Empirical law of |Z_n| plus the scaled statistics with standard errors.

    dyck: P(|Z| = k); srwb_1: moments of n^-1/2 |Z|; srwb_2: moments of
    (pi / ln n) |Z|; srwb_3 and larger m: P(|Z| = k). Limits are attached
    where known (m <= 3).
    """
    z = sample_zero_counts(cfg, workers)
    values, counts = np.unique(z, return_counts=True)
    hist = ReturnHistogram(n=cfg.n, counts={int(v): int(c) for v, c in zip(values, counts)},
                           total=int(len(z)), exact=False)
    m = cfg.walks
    zf = z.astype(float)
    if m == 0:
        stats = _pmf_stats(z, dyck_limit_pmf)
    elif m == 1:
        x = zf / math.sqrt(cfg.n)
        stats = [_mean_stat(f"E[(|Z|/sqrt(n))^{k}]", x**k, srwb_limit_moment(k)) for k in range(1, 5)]
    elif m == 2:
        if cfg.n < 2:
            raise ValueError("two-bridge scaling needs n >= 2")
        x = zf * math.pi / math.log(cfg.n)
        stats = [_mean_stat(f"E[(pi|Z|/ln n)^{k}]", x**k, srwb2_limit_moment(k)) for k in range(1, 5)]
    else:
        stats = _pmf_stats(z, srwb3_limit_pmf if m == 3 else None)
    return MonteCarloResult(config=cfg, histogram=hist, zero_counts=z, statistics=stats)


# -- exact finite-n large deviations -------------------------------------------

def ldp_tail_exact(spec, n: int, x: float) -> float:
    """-(1/n) ln P(|Z_n| - 1 >= n x), from the exact return distribution."""
    if not (0.0 < x <= 1.0):
        raise ValueError(f"x must lie in (0, 1], got {x!r}")
    if n * x < 1.0 - 1e-12:
        raise ValueError(f"n * x must be >= 1, got {n * x}")
    # tolerate n * x landing just above an integer through rounding
    threshold = math.ceil(n * x - 1e-9)
    hist = return_distribution_exact(as_spec(spec), n)
    prob = hist.tail(threshold + 1)
    if prob == 0:
        raise ValueError(f"P(|Z_n| - 1 >= {threshold}) is zero")
    return -(math.log(prob.numerator) - math.log(prob.denominator)) / n


def explicit_rate_for(spec) -> str:
    """Name of the explicit rate function matching a sequence."""
    fam = as_spec(spec).family
    mapping = {"catalan": "dyck", "central": "srwb"}
    if fam not in mapping:
        raise ValueError(f"no explicit rate for family {fam!r}")
    return mapping[fam]


def ldp_gap(spec, n: int, x: float) -> float:
    """|ldp_tail_exact - I(x)| against the matching explicit rate function."""
    return abs(ldp_tail_exact(spec, n, x) - ratefn.rate_explicit(explicit_rate_for(spec), x))
