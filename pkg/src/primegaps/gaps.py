"""Empirical prime-gap statistics against the random (Cramer) model.

Normalized gaps (p_next - p)/log p are histogrammed against the exponential
density e^{-t}; counts of primes in random unit-mean intervals are compared
with the Poisson weights e^{-1}/k!; a seeded Bernoulli simulation of the
prime indicator reproduces the model directly; and the classical factorial
and primorial composite runs are constructed and verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .errors import EmptyRangeError, PreconditionError, require
from .sieve import next_prime, prime_indicator, primes_between

# Reference constants for the limsup of gap/(log p)^2: the random model
# predicts 1; the corrected heuristic gives at least 2 e^{-gamma}.
CRAMER_LIMSUP_CONSTANT = 1.0
CORRECTED_LIMSUP_CONSTANT = 2.0 * math.exp(-np.euler_gamma)

_RNG_ALGORITHM = "numpy-pcg64"


def make_rng(seed: int) -> np.random.Generator:
    """Seeded 64-bit generator (PCG64 via SeedSequence, splittable)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def default_bin_edges() -> np.ndarray:
    """Edges 0.0, 0.1, ..., 4.0; the overflow bin catches the rest
    (about 2% of the predicted mass)."""
    return np.round(np.arange(0, 41) * 0.1, 10)


def exponential_bin_mass(bin_edges: np.ndarray) -> np.ndarray:
    """Predicted mass per bin for the density e^{-t}, overflow last."""
    edges = np.asarray(bin_edges, dtype=np.float64)
    masses = np.empty(len(edges))
    masses[:-1] = np.exp(-edges[:-1]) - np.exp(-edges[1:])
    masses[-1] = math.exp(-edges[-1])
    return masses


@dataclass(frozen=True)
class GapHistogram:
    """Histogram of normalized gaps over primes p in [x_lo, x_hi).

    counts[i] covers [bin_edges[i], bin_edges[i+1]) and counts[-1] is the
    overflow bin for gaps at or beyond the last edge, so the bins partition
    [0, inf) and the counts sum to total.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    x_lo: int
    x_hi: int

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / self.total

    def mass_below(self, t: float) -> float:
        """Empirical fraction of normalized gaps <= t (exact bin edges only)."""
        idx = int(np.searchsorted(self.bin_edges, t, side="left"))
        require(
            idx < len(self.bin_edges) and self.bin_edges[idx] == t,
            f"{t} is not a bin edge",
        )
        return float(self.counts[:idx].sum() / self.total)


def _validate_edges(bin_edges) -> np.ndarray:
    edges = np.asarray(bin_edges, dtype=np.float64)
    require(edges.ndim == 1 and len(edges) >= 2, "need at least two bin edges")
    require(bool((np.diff(edges) > 0).all()), "bin edges must be ascending")
    require(edges[0] == 0.0, "first bin edge must be 0 so the bins partition")
    return edges


def _histogram_from_normalized(
    normalized: np.ndarray, edges: np.ndarray, x_lo: int, x_hi: int
) -> GapHistogram:
    idx = np.searchsorted(edges, normalized, side="right") - 1
    idx = np.minimum(idx, len(edges) - 1)
    counts = np.bincount(idx, minlength=len(edges))
    return GapHistogram(edges, counts, int(len(normalized)), x_lo, x_hi)


def gap_histogram(x_lo: int, x_hi: int, bin_edges=None) -> GapHistogram:
    """Histogram the normalized gap of every prime in [x_lo, x_hi).

    Each prime contributes its true gap; the successor of the last prime is
    found past the range end.  Normalization divides by log p at the lower
    endpoint.
    """
    require(x_lo >= 3, "x_lo must be at least 3")
    require(x_hi > x_lo, "empty range")
    edges = _validate_edges(default_bin_edges() if bin_edges is None else bin_edges)
    primes = primes_between(x_lo, x_hi)
    if len(primes) == 0:
        raise EmptyRangeError(f"no primes in [{x_lo}, {x_hi})")
    seq = np.append(primes, next_prime(int(primes[-1])))
    normalized = np.diff(seq) / np.log(seq[:-1].astype(np.float64))
    return _histogram_from_normalized(normalized, edges, x_lo, x_hi)


# ---------------------------------------------------------------------------
# interval counts (Poisson comparison)

UNIT_POISSON = tuple(math.exp(-1.0) / math.factorial(k) for k in range(16))


def poisson_unit_pmf(k: int) -> float:
    """e^{-1} / k!, the Poisson(1) weight."""
    require(k >= 0, "k must be nonnegative")
    return math.exp(-1.0) / math.factorial(k)


@dataclass(frozen=True)
class IntervalCountStats:
    """Observed frequencies of k-prime counts in intervals [n, n + log n].

    n is drawn uniformly from [x, 2x]; fractions maps each observed count k
    to its frequency; exact_mean averages the interval count over every
    integer n in [x, 2x] (computed from the sieve, no sampling).
    """

    x: int
    n_samples: int
    seed: int
    fractions: dict[int, float]
    empirical_mean: float
    empirical_std: float
    exact_mean: float

    def poisson(self, k: int) -> float:
        return poisson_unit_pmf(k)

    def mean_sigma(self) -> float:
        """Standard error of the empirical mean."""
        return self.empirical_std / math.sqrt(self.n_samples)


def _counts_in_intervals(cum: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """Prime counts in [n, n + log n] for each start n; cum[i] = pi(i)."""
    length = np.floor(np.log(starts.astype(np.float64))).astype(np.int64)
    hi = np.minimum(starts + length, len(cum) - 1)
    return cum[hi] - cum[starts - 1]


def _indicator_cumsum(ind: np.ndarray) -> np.ndarray:
    # int32 keeps the table at 4 bytes/entry; counts stay far below 2^31
    # for any range the package will sieve
    return np.cumsum(ind, dtype=np.int32)


def _exact_interval_mean(cum: np.ndarray, x: int) -> float:
    """Average interval count over every integer start in [x, 2x]."""
    total = 0
    for lo in range(x, 2 * x + 1, _CHUNK):
        hi = min(lo + _CHUNK, 2 * x + 1)
        starts = np.arange(lo, hi, dtype=np.int64)
        total += int(_counts_in_intervals(cum, starts).sum())
    return total / (x + 1)


_CHUNK = 1 << 22


def interval_counts_from_indicator(
    ind: np.ndarray, x: int, n_samples: int, seed: int
) -> IntervalCountStats:
    """Interval-count statistics over an arbitrary 0/1 prime indicator.

    ind[m] marks m as (simulated or real) prime; sampled starts n come from
    [x, 2x] and must satisfy n + log n < len(ind).
    """
    require(x >= 100, "x must be at least 100")
    require(n_samples >= 1, "need at least one sample")
    require(2 * x + int(math.log(2 * x)) + 1 < len(ind), "indicator too short")
    cum = _indicator_cumsum(ind)
    rng = make_rng(seed)
    starts = rng.integers(x, 2 * x + 1, size=n_samples)
    counts = _counts_in_intervals(cum, starts)
    ks, freq = np.unique(counts, return_counts=True)
    fractions = {int(k): float(c / n_samples) for k, c in zip(ks, freq)}
    return IntervalCountStats(
        x=x,
        n_samples=n_samples,
        seed=seed,
        fractions=fractions,
        empirical_mean=float(counts.mean()),
        empirical_std=float(counts.std()),
        exact_mean=_exact_interval_mean(cum, x),
    )


def interval_count_distribution(x: int, n_samples: int, seed: int) -> IntervalCountStats:
    """Frequencies of k primes in [n, n + log n] for random n in [x, 2x]."""
    require(x >= 100, "x must be at least 100")
    hi = 2 * x + int(math.log(2 * x)) + 2
    ind = prime_indicator(0, hi)
    return interval_counts_from_indicator(ind, x, n_samples, seed)


# ---------------------------------------------------------------------------
# Cramer-model simulation

@dataclass(frozen=True)
class CramerConfig:
    """Length and seed of one simulated prime-indicator stream."""

    n_max: int
    seed: int = 0

    def __post_init__(self):
        require(self.n_max >= 3, "n_max must be at least 3")


@dataclass(frozen=True)
class CramerResult:
    """A simulated indicator stream and its derived gap histogram.

    indicators[n] is the simulated primality of n (index 0 unused);
    X(1) = 0 and X(2) = 1 are fixed, X(n) for n >= 3 is an independent
    Bernoulli(1/log n) draw from the seeded generator.
    """

    config: CramerConfig
    indicators: np.ndarray
    simulated_count: int
    expected_count: float
    count_sigma: float
    histogram: GapHistogram

    @property
    def positions(self) -> np.ndarray:
        return np.flatnonzero(self.indicators)


_CRAMER_CHUNK = 1 << 20


def cramer_simulate(cfg: CramerConfig, bin_edges=None) -> CramerResult:
    """Simulate X(n) over n <= n_max; deterministic for a fixed seed.

    The random stream is consumed in index order, so results do not depend
    on internal chunking.  The derived histogram normalizes consecutive
    simulated-prime gaps by log p; the final simulated prime has no
    successor inside the stream and contributes no gap.
    """
    n = cfg.n_max
    ind = np.zeros(n + 1, dtype=bool)
    ind[2] = True
    rng = make_rng(cfg.seed)
    expected_terms = []
    var_terms = []
    for lo in range(3, n + 1, _CRAMER_CHUNK):
        hi = min(lo + _CRAMER_CHUNK, n + 1)
        probs = 1.0 / np.log(np.arange(lo, hi, dtype=np.float64))
        ind[lo:hi] = rng.random(hi - lo) < probs
        expected_terms.append(float(probs.sum()))
        var_terms.append(float((probs * (1.0 - probs)).sum()))
    expected = 1.0 + math.fsum(expected_terms)
    sigma = math.sqrt(math.fsum(var_terms))
    positions = np.flatnonzero(ind)
    edges = _validate_edges(default_bin_edges() if bin_edges is None else bin_edges)
    if len(positions) >= 2:
        normalized = np.diff(positions) / np.log(positions[:-1].astype(np.float64))
        hist = _histogram_from_normalized(normalized, edges, 2, n)
    else:
        hist = GapHistogram(edges, np.zeros(len(edges), dtype=np.int64), 0, 2, n)
    return CramerResult(
        config=cfg,
        indicators=ind,
        simulated_count=int(len(positions)),
        expected_count=expected,
        count_sigma=sigma,
        histogram=hist,
    )


# ---------------------------------------------------------------------------
# long composite runs

@dataclass(frozen=True)
class LongGapReport:
    """A guaranteed composite run seeded at N + 2 and its observed extent.

    construction 'factorial' takes N = m!; 'primorial' takes N as the
    product of the primes up to m.  Either way N+2, ..., N+m are composite
    (each shares a factor at most m with N), a run of m - 1 integers.
    rankin_bound_at_N evaluates the record lower-bound expression at N with
    c = 1 (NaN when the iterated logs are undefined); the limsup constants
    are the reference values for gap/(log p)^2.
    """

    construction: str
    m: int
    N: int
    run_start: int
    guaranteed_run: int
    observed_run: int
    rankin_bound_at_N: float
    cramer_limsup_constant: float = CRAMER_LIMSUP_CONSTANT
    corrected_limsup_constant: float = CORRECTED_LIMSUP_CONSTANT

    @property
    def observed_run_over_log_sq(self) -> float:
        """Observed run scaled like the limsup statistic gap/(log p)^2."""
        return self.observed_run / math.log(self.run_start) ** 2


_FACTORIAL_MAX = 20   # 21! exceeds 64 bits
_PRIMORIAL_MAX = 52   # including the prime 53 exceeds 64 bits


def _primorial(m: int) -> int:
    out = 1
    for p in primes_between(2, m + 1):
        out *= int(p)
    return out


def long_gap_construct(kind: str, m: int) -> LongGapReport:
    """Build the factorial or primorial composite run for a given m.

    Verifies directly that every integer in [N+2, N+m] has a prime factor
    at most m, then extends forward to the first prime to report the run
    actually observed.
    """
    require(kind in ("factorial", "primorial"), f"unknown construction {kind!r}")
    require(m >= 2, "m must be at least 2")
    if kind == "factorial":
        if m > _FACTORIAL_MAX:
            raise OverflowError(f"{m}! exceeds 64 bits (max m = {_FACTORIAL_MAX})")
        N = math.factorial(m)
    else:
        if m > _PRIMORIAL_MAX:
            raise OverflowError(
                f"primorial({m}) exceeds 64 bits (max m = {_PRIMORIAL_MAX})"
            )
        N = _primorial(m)
    small = [int(p) for p in primes_between(2, m + 1)]
    for j in range(2, m + 1):
        if not any((N + j) % p == 0 for p in small):
            raise AssertionError(f"{N + j} unexpectedly has no factor <= {m}")
    run_start = N + 2
    q = next_prime(N + 1)
    observed = q - run_start
    try:
        rb = rankin_bound(float(N), 1.0)
    except PreconditionError:
        rb = math.nan
    return LongGapReport(
        construction=kind,
        m=m,
        N=N,
        run_start=run_start,
        guaranteed_run=m - 1,
        observed_run=observed,
        rankin_bound_at_N=rb,
    )


def rankin_bound(p: float, c: float) -> float:
    """The record long-gap lower bound

        c * log p * (log log p) * (log log log log p) / (log log log p)^2,

    valid once all four iterated logs are positive (p > e^(e^e))."""
    require(p > 1, "p must exceed 1")
    l1 = math.log(p)
    l2 = math.log(l1) if l1 > 0 else math.nan
    l3 = math.log(l2) if l2 > 0 else math.nan
    require(not math.isnan(l3) and l3 > 0, "iterated logs undefined: need p > e^(e^e)")
    l4 = math.log(l3)
    require(l4 > 0, "iterated logs not positive: need p > e^(e^e)")
    return c * l1 * l2 * l4 / (l3 * l3)
