"""Admissible offset tuples and the Hardy-Littlewood singular series.

An offset tuple H = {h_1 < ... < h_k} is admissible when its elements never
cover all residue classes modulo a prime; equivalently its singular series

    S(H) = prod over primes ell of (1 - nu_H(ell)/ell) (1 - 1/ell)^(-k)

is nonzero, where nu_H(ell) counts the distinct residues of H mod ell.
The product here is truncated at a level L with a rigorous tail bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import BudgetExceededError, require
from .sieve import is_prime, prime_indicator, primes_upto


@dataclass(frozen=True)
class OffsetTuple:
    """Strictly increasing nonnegative offsets h_1 < ... < h_k.

    Repeated offsets are rejected outright rather than deduplicated: a
    repeat would silently change k and with it the singular series.
    """

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        require(len(offs) >= 1, "tuple must contain at least one offset")
        require(all(h >= 0 for h in offs), "offsets must be nonnegative")
        if len(set(offs)) != len(offs):
            dupes = sorted(h for h in set(offs) if offs.count(h) > 1)
            require(False, f"repeated offsets not allowed: {dupes}")
        require(
            all(a < b for a, b in zip(offs, offs[1:])),
            "offsets must be strictly increasing",
        )
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def parse(cls, text: str) -> "OffsetTuple":
        """Parse comma-separated offsets, e.g. '0,2,6'."""
        try:
            offs = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            require(False, f"cannot parse offsets {text!r}: {exc}")
        return cls(offs)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def __str__(self) -> str:
        return ",".join(str(h) for h in self.offsets)


@lru_cache(maxsize=1 << 16)
def _nu_cached(offsets: tuple[int, ...], ell: int) -> int:
    return len({h % ell for h in offsets})


def nu(H: OffsetTuple, ell: int) -> int:
    """Number of distinct residue classes mod ell occupied by H.

    Equals k as soon as ell exceeds every element of H.
    """
    require(ell >= 2 and is_prime(ell), f"modulus {ell} is not prime")
    return _nu_cached(H.offsets, ell)


def is_admissible(H: OffsetTuple) -> tuple[bool, int | None]:
    """Whether H avoids covering all residues mod every prime.

    Only primes ell <= k can be covered (nu <= k < ell otherwise).  Returns
    (True, None) or (False, witness_prime).
    """
    for ell in primes_upto(H.k):
        ell = int(ell)
        if _nu_cached(H.offsets, ell) == ell:
            return False, ell
    return True, None


@dataclass(frozen=True)
class SingularSeriesValue:
    """Truncated singular series with a rigorous truncation bound.

    value multiplies the Euler factors over primes ell <= truncation_L
    exactly (in double precision); tail_bound bounds |log| of the omitted
    factor product, so the full value lies within value * exp(+-tail_bound).
    is_zero is set, with the covering witness prime, when some factor
    vanishes; the product is then exactly zero, no truncation involved.
    """

    value: float
    truncation_L: int
    tail_bound: float
    is_zero: bool
    witness: int | None = None


def default_truncation(H: OffsetTuple) -> int:
    """Default level: 10^5 covers k <= 10 comfortably, raised when needed."""
    return max(100_000, H.offsets[-1], 2 * H.k)


def singular_series(H: OffsetTuple, L: int | None = None) -> SingularSeriesValue:
    """Truncated Euler product for S(H) over primes ell <= L.

    Requires L >= max(h_k, 2k): the first condition keeps every prime with
    nontrivial residue behavior inside the product, the second validates
    the tail estimate |log factor| <= k(k+1)/ell^2 (true for ell >= 2k),
    which sums to the reported tail_bound k(k+1)/L.
    """
    if L is None:
        L = default_truncation(H)
    k = H.k
    require(
        L >= max(H.offsets[-1], 2 * k),
        f"L-too-small: need L >= max(h_k, 2k) = {max(H.offsets[-1], 2 * k)}, got {L}",
    )
    ok, witness = is_admissible(H)
    if not ok:
        return SingularSeriesValue(0.0, L, 0.0, True, witness)
    if k == 1:
        # every factor is (1 - 1/ell)(1 - 1/ell)^-1 = 1 exactly
        return SingularSeriesValue(1.0, L, 0.0, False, None)
    primes = primes_upto(L)
    offs = np.array(H.offsets, dtype=np.int64)
    res = np.sort(offs[:, None] % primes[None, :], axis=0)
    nu_arr = 1 + (np.diff(res, axis=0) != 0).sum(axis=0)
    ell = primes.astype(np.float64)
    factors = (1.0 - nu_arr / ell) * (1.0 - 1.0 / ell) ** (-k)
    value = float(np.prod(factors))
    tail = k * (k + 1) / L
    return SingularSeriesValue(value, L, tail, False, None)


class HLCount(NamedTuple):
    actual: int
    predicted: float


def hl_count(H: OffsetTuple, x: int, L: int | None = None) -> HLCount:
    """Exact count of n <= x with every n + h_j prime, next to the
    Hardy-Littlewood prediction S(H) x / (log x)^k."""
    require(x >= 3, "x must be at least 3")
    ind = prime_indicator(0, x + H.offsets[-1] + 1)
    acc = ind[H.offsets[0] + 1 : H.offsets[0] + x + 1].copy()
    for h in H.offsets[1:]:
        acc &= ind[h + 1 : h + x + 1]
    actual = int(acc.sum())
    ss = singular_series(H, L)
    predicted = ss.value * x / math.log(x) ** H.k
    return HLCount(actual, predicted)


class GallagherAverage(NamedTuple):
    lhs: float
    rhs: int
    ratio: float


def gallagher_average(
    k: int, h: int, L: int | None = None, budget: int | None = 10_000_000
) -> GallagherAverage:
    """Average of S over all k-subsets of [1, h] against their plain count.

    lhs sums singular-series values (inadmissible subsets contribute 0),
    rhs is binomial(h, k); the ratio tends to 1 as h grows.  Subsets are
    enumerated lexicographically; values are memoized on the translated
    tuple h - h_1 since nu, hence S, is translation invariant.
    """
    require(k >= 1, "k must be at least 1")
    require(h >= k, "h must be at least k")
    if L is None:
        L = max(100_000, h, 2 * k)
    require(L >= max(h, 2 * k), f"L-too-small: need L >= max(h, 2k) = {max(h, 2 * k)}")
    rhs = math.comb(h, k)
    if budget is not None and rhs > budget:
        raise BudgetExceededError(
            f"binomial({h}, {k}) = {rhs} exceeds the {budget} subset budget"
        )
    counts: dict[tuple[int, ...], int] = {}
    for combo in itertools.combinations(range(1, h + 1), k):
        base = combo[0]
        key = tuple(c - base for c in combo)
        counts[key] = counts.get(key, 0) + 1
    lhs = math.fsum(
        mult * singular_series(OffsetTuple(key), L).value
        for key, mult in sorted(counts.items())
    )
    return GallagherAverage(lhs, rhs, lhs / rhs)
