"""Selberg-style sieve weights and the two-primes detector machinery.

Weights lambda_d = mu(d) P(log(R/d)/log R) live on squarefree d <= R and
define the nonnegative detector

    a(n) = ( sum over d | (n+h_1)...(n+h_k), d <= R of lambda_d )^2.

Summed over n in [x, 2x], a(n) has the quadratic-form main term

    x * sum_{d1,d2 <= R} f([d1,d2]) / [d1,d2] * lambda_d1 lambda_d2,

with f multiplicative, f(p) = nu_H(p); restricting to n with n + h_j prime
replaces f/[d1,d2] by g/phi([d1,d2]) with g(p) = nu_H(p) - 1 and a factor
x/log x.  Both forms have beta-integral asymptotics whose ratio, times
log R/log x, is the quantity that would exceed 1/k if bounded prime gaps
followed; the closed form for P(y) = y^(k+r) and the strict inequality
blocking improvement past 4/k are implemented exactly over the rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import LevelTooLargeError, require
from .polys import PolynomialSpec, RationalPoly, weighted_square_integral
from .progressions import euler_phi
from .sieve import factorize, prime_indicator
from .tuples import OffsetTuple, nu, singular_series


# ---------------------------------------------------------------------------
# multiplicative helpers

def mobius(d: int) -> int:
    """Moebius function: 0 on square divisors, else (-1)^(number of primes)."""
    require(d >= 1, "d must be positive")
    out = 1
    for _, e in factorize(d):
        if e > 1:
            return 0
        out = -out
    return out


def mobius_log_identity(m: int, k: int) -> float:
    """Exact evaluation of sum over d | m of mu(d) (log(m/d))^k.

    Vanishes when m has more than k distinct prime factors; equals
    k! log(p_1)...log(p_k) when m is a squarefree product of k primes.
    """
    require(m >= 1, "m must be positive")
    require(k >= 1, "k must be at least 1")
    primes = [p for p, _ in factorize(m)]
    terms = []
    for r in range(len(primes) + 1):
        sign = -1.0 if r % 2 else 1.0
        for subset in combinations(primes, r):
            d = math.prod(subset)
            terms.append(sign * math.log(m / d) ** k)
    return math.fsum(terms)


def squarefree_upto(R: int) -> list[int]:
    """Squarefree integers in [1, R], ascending."""
    require(R >= 1, "R must be at least 1")
    return [d for d in range(1, R + 1) if mobius(d) != 0]


def f_of(d: int, H: OffsetTuple) -> int:
    """Residue-class count f(d) = prod over p | d of nu_H(p), squarefree d.

    f(d) is the number of residue classes n mod d with
    d | (n+h_1)...(n+h_k)."""
    require(d >= 1, "d must be positive")
    out = 1
    for p, e in factorize(d):
        require(e == 1, f"non-squarefree modulus {d} (p={p} repeats)")
        out *= nu(H, p)
    return out


def g_of(d: int, H: OffsetTuple) -> int:
    """Like f but with the class forcing a fixed n + h_j composite removed:
    g(d) = prod over p | d of (nu_H(p) - 1), squarefree d."""
    require(d >= 1, "d must be positive")
    out = 1
    for p, e in factorize(d):
        require(e == 1, f"non-squarefree modulus {d} (p={p} repeats)")
        out *= nu(H, p) - 1
    return out


# ---------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class WeightScheme:
    """Weights lambda_d on squarefree d <= R; zero elsewhere.

    lam holds only the squarefree support; lambda_of returns 0.0 outside
    it, matching mu(d) = 0 and the cutoff at R.
    """

    R: int
    lam: dict[int, float]
    P: PolynomialSpec | None = None

    def lambda_of(self, d: int) -> float:
        return self.lam.get(d, 0.0)

    @property
    def support(self) -> list[int]:
        return sorted(self.lam)


def build_weights(P: PolynomialSpec, R: int) -> WeightScheme:
    """Populate lambda_d = mu(d) P(log(R/d)/log R) for squarefree d <= R.

    lambda_1 = P(1) = 1 exactly; d = R lands on P(0) = 0.  PolynomialSpec
    already enforces P(1) = 1 and the vanishing order, so an invalid
    polynomial never reaches this point.
    """
    require(R >= 1, "R must be at least 1")
    lam: dict[int, float] = {1: 1.0}
    if R >= 2:
        log_r = math.log(R)
        for d in squarefree_upto(R):
            if d == 1:
                continue
            y = math.log(R / d) / log_r
            lam[d] = mobius(d) * _eval_float(P, y)
    return WeightScheme(R=R, lam=lam, P=P)


def _eval_float(P: PolynomialSpec, y: float) -> float:
    acc = 0.0
    for c in reversed(P.coeffs):
        acc = acc * y + float(c)
    return acc


def detector_a(n: int, H: OffsetTuple, w: WeightScheme) -> float:
    """The squared weighted divisor sum a(n) over d | (n+h_1)...(n+h_k).

    Only the squarefree d <= R in the scheme's support can contribute.
    When n > R and every n + h_j is prime, only d = 1 survives and
    a(n) = 1.
    """
    require(n >= 1, "n must be positive")
    prod = 1
    for h in H.offsets:
        prod *= n + h
    s = sum(lam for d, lam in sorted(w.lam.items()) if prod % d == 0)
    return s * s


# ---------------------------------------------------------------------------
# quadratic forms

@dataclass(frozen=True)
class FormEvaluation:
    """One sieve-sum evaluated three ways.

    direct_sum runs over every integer n in [x, 2x] (inclusive);
    form_value is the quadratic-form main term; asymptotic is the
    beta-integral prediction (NaN when the scheme carries no polynomial).
    The three agree only up to the error terms being studied; none is
    substituted for another.
    """

    direct_sum: float
    form_value: float
    asymptotic: float
    x: int
    R: int
    H: OffsetTuple
    j: int | None = None


def _divisor_residues(d: int, H: OffsetTuple) -> np.ndarray:
    """Residues r mod d with d | (r+h_1)...(r+h_k)."""
    r = np.arange(d, dtype=np.int64)
    prodmod = np.ones(d, dtype=np.int64)
    for h in H.offsets:
        prodmod = (prodmod * ((r + h) % d)) % d
    return np.flatnonzero(prodmod == 0)


def _weight_profile(w: WeightScheme, H: OffsetTuple, x: int) -> np.ndarray:
    """S[n - x] = sum of lambda_d over d dividing (n+h_1)...(n+h_k)."""
    n_arr = np.arange(x, 2 * x + 1, dtype=np.int64)
    S = np.zeros(x + 1, dtype=np.float64)
    for d in w.support:
        lam = w.lam[d]
        if d == 1:
            S += lam
            continue
        table = np.zeros(d, dtype=bool)
        table[_divisor_residues(d, H)] = True
        S[table[n_arr % d]] += lam
    return S


def _require_level(R: int, x: int) -> None:
    if R * R >= x:
        raise LevelTooLargeError(f"level-too-large: need R^2 < x, got R={R}, x={x}")


def denominator_form(w: WeightScheme, H: OffsetTuple, x: int) -> FormEvaluation:
    """Sum of a(n) over x <= n <= 2x, its quadratic form, and asymptotic.

    form_value = x * sum f([d1,d2])/[d1,d2] lambda_d1 lambda_d2; the
    asymptotic is x/(log R)^k * S(H) * integral_0^1 y^(k-1)/(k-1)! *
    P^(k)(1-y)^2 dy.
    """
    require(x >= 4, "x too small")
    _require_level(w.R, x)
    S = _weight_profile(w, H, x)
    direct = float((S * S).sum())
    terms = []
    support = w.support
    for d1 in support:
        for d2 in support:
            D = d1 * d2 // math.gcd(d1, d2)
            terms.append(w.lam[d1] * w.lam[d2] * f_of(D, H) / D)
    form_value = x * math.fsum(terms)
    asym = _denominator_asymptotic(w, H, x)
    return FormEvaluation(direct, form_value, asym, x, w.R, H)


def numerator_form(w: WeightScheme, H: OffsetTuple, j: int, x: int) -> FormEvaluation:
    """Same as denominator_form but over n with n + h_j prime (j is
    1-based).

    form_value = x/log x * sum g([d1,d2])/phi([d1,d2]) lambda lambda; the
    asymptotic is x/((log x)(log R)^(k-1)) * S(H) * integral_0^1
    y^(k-2)/(k-2)! P^(k-1)(1-y)^2 dy.
    """
    require(1 <= j <= H.k, f"j must be in [1, {H.k}]")
    require(x >= 4, "x too small")
    _require_level(w.R, x)
    h_j = H.offsets[j - 1]
    S = _weight_profile(w, H, x)
    pmask = prime_indicator(x + h_j, 2 * x + h_j + 1)
    sel = S[pmask]
    direct = float((sel * sel).sum())
    terms = []
    support = w.support
    for d1 in support:
        for d2 in support:
            D = d1 * d2 // math.gcd(d1, d2)
            terms.append(w.lam[d1] * w.lam[d2] * g_of(D, H) / euler_phi(D))
    form_value = x / math.log(x) * math.fsum(terms)
    asym = _numerator_asymptotic(w, H, x)
    return FormEvaluation(direct, form_value, asym, x, w.R, H, j=j)


def _denominator_asymptotic(w: WeightScheme, H: OffsetTuple, x: int) -> float:
    if w.P is None or w.R < 2:
        return math.nan
    k = w.P.k
    integral = weighted_square_integral(w.P.poly.deriv(k), k - 1)
    ss = singular_series(H).value
    return x / math.log(w.R) ** k * ss * float(integral)


def _numerator_asymptotic(w: WeightScheme, H: OffsetTuple, x: int) -> float:
    if w.P is None or w.R < 2 or w.P.k < 2:
        return math.nan
    k = w.P.k
    integral = weighted_square_integral(w.P.poly.deriv(k - 1), k - 2)
    ss = singular_series(H).value
    return x / (math.log(x) * math.log(w.R) ** (k - 1)) * ss * float(integral)


# ---------------------------------------------------------------------------
# exact double-counting oracle

class DoubleCount(NamedTuple):
    per_n: Fraction
    pair: Fraction


def exact_double_count(
    w: WeightScheme, H: OffsetTuple, x: int, j: int | None = None
) -> DoubleCount:
    """Both routes to sum a(n), in exact rational arithmetic.

    The float weights are lifted exactly to rationals (every double is a
    rational), making the identity

      sum_n (sum_{d | prod} lambda_d)^2
        = sum_{d1,d2} lambda_d1 lambda_d2 #{n : [d1,d2] | prod(n)}

    an exact equality of fractions.  per_n enumerates divisors of each n;
    pair counts arithmetic progressions per (d1, d2).  With j set (1-based)
    both sides restrict to n with n + h_j prime.
    """
    require(x >= 4, "x too small")
    _require_level(w.R, x)
    lamF = {d: Fraction(v) for d, v in sorted(w.lam.items())}
    ds = sorted(lamF)
    pmask = None
    h_j = 0
    if j is not None:
        require(1 <= j <= H.k, f"j must be in [1, {H.k}]")
        h_j = H.offsets[j - 1]
        pmask = prime_indicator(x + h_j, 2 * x + h_j + 1)

    # route 1: per-n divisor enumeration; squares cached per divisor subset
    sq_cache: dict[int, Fraction] = {}
    pattern_counts: dict[int, int] = {}
    for n in range(x, 2 * x + 1):
        if pmask is not None and not pmask[n - x]:
            continue
        prod = 1
        for h in H.offsets:
            prod *= n + h
        key = 0
        for i, d in enumerate(ds):
            if prod % d == 0:
                key |= 1 << i
        pattern_counts[key] = pattern_counts.get(key, 0) + 1
    per_n = Fraction(0)
    for key, cnt in sorted(pattern_counts.items()):
        if key not in sq_cache:
            s = sum(
                (lamF[d] for i, d in enumerate(ds) if key >> i & 1), Fraction(0)
            )
            sq_cache[key] = s * s
        per_n += cnt * sq_cache[key]

    # route 2: pair sum with exact progression counts
    pair = Fraction(0)
    for d1 in ds:
        for d2 in ds:
            D = d1 * d2 // math.gcd(d1, d2)
            residues = _divisor_residues(D, H)
            count = 0
            for r in residues:
                r = int(r)
                if pmask is None:
                    count += (2 * x - r) // D - (x - 1 - r) // D
                else:
                    first = x + (r - x) % D
                    for n in range(first, 2 * x + 1, D):
                        if pmask[n - x]:
                            count += 1
            pair += lamF[d1] * lamF[d2] * count
    return DoubleCount(per_n, pair)


# ---------------------------------------------------------------------------
# the ratio and the inequality blocking it

def gpy_ratio(k: int, r: int, theta: float) -> float:
    """Closed form theta * 2(2r+1) / ((r+1)(k+2r+1)) for P(y) = y^(k+r)."""
    require(k >= 2, "k must be at least 2")
    require(r >= 0, "r must be nonnegative")
    require(0.0 < theta <= 0.5, "theta must lie in (0, 1/2]")
    return theta * (2 * (2 * r + 1)) / ((r + 1) * (k + 2 * r + 1))


def gpy_ratio_general(P: PolynomialSpec, k: int, theta: float) -> float:
    """The ratio of beta-integral main terms for an arbitrary valid P:

        theta * (int y^(k-2)/(k-2)! P^(k-1)(1-y)^2 dy)
              / (int y^(k-1)/(k-1)! P^(k)(1-y)^2 dy),

    with both integrals evaluated exactly over the rationals."""
    require(k >= 2, "k must be at least 2")
    require(0.0 < theta <= 0.5, "theta must lie in (0, 1/2]")
    order = P.poly.vanishing_order()
    require(order is not None and order >= k, "P must vanish to order >= k at 0")
    num = weighted_square_integral(P.poly.deriv(k - 1), k - 2)
    den = weighted_square_integral(P.poly.deriv(k), k - 1)
    require(den != 0, "denominator integral vanishes")
    return theta * float(num / den)


def gpy_ratio_quadrature(P: PolynomialSpec, k: int, theta: float, order: int = 80) -> float:
    """Independent Gauss-Legendre evaluation of the same ratio.

    Exists purely as a cross-check on the exact rational path; the node
    count makes the rule exact (to rounding) for all polynomial degrees
    in range here.
    """
    require(k >= 2, "k must be at least 2")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    y = 0.5 * (nodes + 1.0)
    wts = 0.5 * weights

    def integral(Q: RationalPoly, a: int) -> float:
        vals = np.array([float(Q(1.0 - yi)) for yi in y])
        return float((wts * y**a * vals * vals).sum() / math.factorial(a))

    num = integral(P.poly.deriv(k - 1), k - 2)
    den = integral(P.poly.deriv(k), k - 1)
    return theta * num / den


def best_power_r(k: int, r_max: int = 50) -> int:
    """Integer r maximizing 2(2r+1)/((r+1)(k+2r+1)), by exact scan.

    The maximizer sits near sqrt(k)/2; ties resolve to the smaller r.
    """
    require(k >= 2, "k must be at least 2")
    require(r_max >= 0, "r_max must be nonnegative")
    best, best_val = 0, Fraction(-1)
    for r in range(r_max + 1):
        val = Fraction(2 * (2 * r + 1), (r + 1) * (k + 2 * r + 1))
        if val > best_val:
            best, best_val = r, val
    return best


class InequalityCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    holds: bool


def unfortunate_inequality(Q, k: int) -> InequalityCheck:
    """The strict bound capping the ratio: for Q != 0 with Q(0) = 0,

        int y^(k-2)/(k-2)! Q(1-y)^2 dy  <  (4/k) int y^(k-1)/(k-1)! Q'(1-y)^2 dy.

    Returns exact rational (lhs, rhs, lhs < rhs); rhs includes the 4/k
    factor.  Both sides scale by c^2 under Q -> cQ, so holds is
    scale-invariant.
    """
    require(k >= 2, "k must be at least 2")
    poly = Q if isinstance(Q, RationalPoly) else RationalPoly(Q)
    require(not poly.is_zero, "invalid-Q: polynomial is identically zero")
    require(poly(Fraction(0)) == 0, "invalid-Q: need Q(0) = 0")
    lhs = weighted_square_integral(poly, k - 2)
    rhs = Fraction(4, k) * weighted_square_integral(poly.deriv(), k - 1)
    return InequalityCheck(lhs, rhs, lhs < rhs)
