import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primegaps import (
    OffsetTuple,
    PolynomialSpec,
    PreconditionError,
    RationalPoly,
    best_power_r,
    build_weights,
    denominator_form,
    detector_a,
    exact_double_count,
    f_of,
    g_of,
    gpy_ratio,
    gpy_ratio_general,
    gpy_ratio_quadrature,
    mobius,
    mobius_log_identity,
    numerator_form,
    unfortunate_inequality,
    weighted_square_integral,
)
from primegaps.errors import LevelTooLargeError
from primegaps.gpy import WeightScheme, squarefree_upto

from conftest import naive_factorize


def naive_mobius(n: int) -> int:
    out = 1
    for _, e in naive_factorize(n):
        if e > 1:
            return 0
        out = -out
    return out


# ---------------------------------------------------------------------------
# multiplicative functions

def test_mobius_examples():
    assert mobius(1) == 1
    assert mobius(6) == 1
    assert mobius(30) == -1
    assert mobius(12) == 0


def test_mobius_against_naive():
    for n in range(1, 3000):
        assert mobius(n) == naive_mobius(n)


def test_mobius_log_identity_examples():
    assert mobius_log_identity(6, 2) == pytest.approx(2 * math.log(2) * math.log(3), rel=1e-12)
    assert mobius_log_identity(30, 2) == pytest.approx(0.0, abs=1e-10)
    for p in (2, 7, 97):
        assert mobius_log_identity(p, 1) == pytest.approx(math.log(p), rel=1e-12)


def test_mobius_log_identity_square_divisors():
    # m = 12 has two distinct primes; for k = 1 the divisor sum vanishes
    assert mobius_log_identity(12, 1) == pytest.approx(0.0, abs=1e-10)


def test_f_g_examples():
    H = OffsetTuple((0, 2))
    assert f_of(1, H) == 1 and g_of(1, H) == 1
    assert f_of(2, H) == 1
    assert f_of(3, H) == 2
    assert f_of(6, H) == 2
    assert g_of(3, H) == 1
    assert g_of(2, H) == 0


def test_f_g_reject_non_squarefree():
    H = OffsetTuple((0, 2))
    with pytest.raises(PreconditionError):
        f_of(4, H)
    with pytest.raises(PreconditionError):
        g_of(12, H)


@settings(max_examples=150)
@given(st.integers(min_value=1, max_value=300), st.integers(min_value=1, max_value=300))
def test_f_multiplicative(d1, d2):
    if mobius(d1) == 0 or mobius(d2) == 0 or math.gcd(d1, d2) != 1:
        return
    H = OffsetTuple((0, 4, 6))
    assert f_of(d1 * d2, H) == f_of(d1, H) * f_of(d2, H)
    assert g_of(d1 * d2, H) == g_of(d1, H) * g_of(d2, H)


# ---------------------------------------------------------------------------
# weights

def test_lambda_1_is_one():
    for spec in (PolynomialSpec.power(2, 0), PolynomialSpec.power(3, 2)):
        w = build_weights(spec, 25)
        assert w.lambda_of(1) == 1.0


def test_lambda_vanishes_off_support():
    w = build_weights(PolynomialSpec.power(2, 0), 10)
    assert w.lambda_of(4) == 0.0       # mu(4) = 0
    assert w.lambda_of(11) == 0.0      # beyond R
    assert w.lambda_of(12) == 0.0


def test_lambda_prime_closed_form():
    # P(y) = y^k gives lambda_p = -(log(R/p)/log R)^k at primes
    k, R = 3, 50
    w = build_weights(PolynomialSpec.power(k, 0), R)
    for p in (2, 3, 5, 7, 11, 47):
        expected = -((math.log(R / p) / math.log(R)) ** k)
        assert w.lambda_of(p) == pytest.approx(expected, rel=1e-12)


def test_weights_R1():
    w = build_weights(PolynomialSpec.power(2, 0), 1)
    assert w.lam == {1: 1.0}


# ---------------------------------------------------------------------------
# detector

def _oracle_detector(n, H, w):
    """Second route: enumerate squarefree divisors from the factorization."""
    prod = math.prod(n + h for h in H.offsets)
    primes = [p for p, _ in naive_factorize(prod)]
    total = 0.0
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            d = math.prod(sub)
            total += w.lambda_of(d)
    return total * total


def test_detector_nonnegative_and_matches_oracle():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 0), 9)
    for n in range(1, 200):
        a = detector_a(n, H, w)
        assert a >= 0.0
        assert a == pytest.approx(_oracle_detector(n, H, w), rel=1e-12, abs=1e-15)


def test_detector_one_on_prime_tuples_beyond_R():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 1), 9)
    for n in (11, 17, 29, 41, 101, 107):   # n, n+2 both prime, n > R
        assert detector_a(n, H, w) == 1.0


def test_detector_extended_tuple_invariance():
    # appending a prime offset ell with n + ell prime and beyond R leaves
    # a(n) unchanged: the new divisors all exceed R
    w = build_weights(PolynomialSpec.power(2, 0), 9)
    cases = [(15, (0, 2), 4), (33, (0, 2), 4), (95, (0, 2), 6), (21, (0, 2), 10)]
    for n, offs, ell in cases:
        assert n + ell > 9 and naive_factorize(n + ell)[0][0] == n + ell
        base = detector_a(n, OffsetTuple(offs), w)
        extended = detector_a(n, OffsetTuple(offs + (ell,)), w)
        assert base == extended


# ---------------------------------------------------------------------------
# the two quadratic forms

def test_degenerate_weights_counts_integers():
    # lambda = (1, 0, 0, ...): a(n) = 1, so the direct sum counts [x, 2x]
    w = WeightScheme(R=3, lam={1: 1.0}, P=None)
    H = OffsetTuple((0, 2))
    x = 500
    res = denominator_form(w, H, x)
    assert res.direct_sum == x + 1
    assert res.form_value == x
    assert math.isnan(res.asymptotic)


def test_exact_double_count_small():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 0), 7)
    dc = exact_double_count(w, H, 100)
    assert dc.per_n == dc.pair
    dcn = exact_double_count(w, H, 100, j=2)
    assert dcn.per_n == dcn.pair


def test_forms_match_exact_routes_in_float():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 0), 9)
    x = 10**4
    dc = exact_double_count(w, H, x)
    den = denominator_form(w, H, x)
    assert den.direct_sum == pytest.approx(float(dc.per_n), rel=1e-9)
    dcn = exact_double_count(w, H, x, j=1)
    num = numerator_form(w, H, 1, x)
    assert num.direct_sum == pytest.approx(float(dcn.per_n), rel=1e-9)


def test_numerator_below_denominator():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 1), 9)
    x = 2000
    den = denominator_form(w, H, x)
    num = numerator_form(w, H, 1, x)
    assert 0.0 <= num.direct_sum <= den.direct_sum


def test_level_too_large():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 0), 40)
    with pytest.raises(LevelTooLargeError):
        denominator_form(w, H, 1600)
    with pytest.raises(LevelTooLargeError):
        numerator_form(w, H, 1, 1600)


def test_numerator_j_validation():
    H = OffsetTuple((0, 2))
    w = build_weights(PolynomialSpec.power(2, 0), 9)
    with pytest.raises(PreconditionError):
        numerator_form(w, H, 0, 10**4)
    with pytest.raises(PreconditionError):
        numerator_form(w, H, 3, 10**4)


# ---------------------------------------------------------------------------
# beta-integral values

def test_denominator_integral_closed_form():
    # for P(y) = y^k: int y^(k-1)/(k-1)! (P^(k)(1-y))^2 dy = k!
    for k in range(2, 9):
        P = PolynomialSpec.power(k, 0)
        exact = weighted_square_integral(P.poly.deriv(k), k - 1)
        assert exact == math.factorial(k)


def test_numerator_integral_k2_example():
    # P(y) = y^2, k = 2: int (2(1-y))^2 dy = 4/3
    P = PolynomialSpec.power(2, 0)
    exact = weighted_square_integral(P.poly.deriv(1), 0)
    assert exact == Fraction(4, 3)


def test_quadrature_cross_check():
    for k, r in ((2, 0), (3, 1), (5, 2), (7, 1)):
        P = PolynomialSpec.power(k, r)
        assert gpy_ratio_quadrature(P, k, 0.25) == pytest.approx(
            gpy_ratio_general(P, k, 0.25), rel=1e-10
        )


# ---------------------------------------------------------------------------
# the ratio

def test_ratio_headline_value():
    assert gpy_ratio(7, 1, 0.5) == 0.15
    assert gpy_ratio(7, 1, 0.5) == pytest.approx(1.05 / 7)


def test_ratio_r0_below_1_over_k():
    for k in range(2, 30):
        for theta in (0.1, 0.25, 0.49):
            assert gpy_ratio(k, 0, theta) == pytest.approx(theta * 2 / (k + 1))
            assert gpy_ratio(k, 0, theta) < 1 / k


def test_ratio_validation():
    with pytest.raises(PreconditionError):
        gpy_ratio(1, 0, 0.25)
    with pytest.raises(PreconditionError):
        gpy_ratio(7, -1, 0.25)
    with pytest.raises(PreconditionError):
        gpy_ratio(7, 1, 0.6)


def test_best_r_near_half_sqrt_k():
    assert best_power_r(100) == 5          # sqrt(100)/2
    for k in (16, 36, 64, 144):
        assert abs(best_power_r(k) - math.sqrt(k) / 2) <= 1.0


def test_general_matches_closed_form():
    for k in range(2, 12):
        for r in range(0, 6):
            closed = gpy_ratio(k, r, 0.5)
            general = gpy_ratio_general(PolynomialSpec.power(k, r), k, 0.5)
            assert general == pytest.approx(closed, rel=1e-9)


def test_general_rejects_shallow_vanishing():
    P = PolynomialSpec.power(2, 0)
    with pytest.raises(PreconditionError):
        gpy_ratio_general(P, 3, 0.25)      # vanishing order 2 < k = 3


# ---------------------------------------------------------------------------
# the blocking inequality

def test_unfortunate_example():
    res = unfortunate_inequality(RationalPoly([0, 1]), 2)
    assert res.lhs == Fraction(1, 3)
    assert res.rhs == Fraction(1)
    assert res.holds


def test_unfortunate_scaling_invariance():
    Q = RationalPoly([0, 2, -1])
    base = unfortunate_inequality(Q, 4)
    scaled = unfortunate_inequality(Q.scale(Fraction(7, 3)), 4)
    c2 = Fraction(7, 3) ** 2
    assert scaled.lhs == base.lhs * c2
    assert scaled.rhs == base.rhs * c2
    assert scaled.holds == base.holds


def test_unfortunate_validation():
    with pytest.raises(PreconditionError):
        unfortunate_inequality(RationalPoly([1, 1]), 2)   # Q(0) != 0
    with pytest.raises(PreconditionError):
        unfortunate_inequality(RationalPoly([]), 2)       # Q = 0
    with pytest.raises(PreconditionError):
        unfortunate_inequality(RationalPoly([0, 1]), 1)   # k < 2


def test_unfortunate_monomial_scan():
    for k in range(2, 21):
        for m in range(1, 11):
            res = unfortunate_inequality(RationalPoly([0] * m + [1]), k)
            assert res.holds, (k, m)


def test_barely_fail_margins():
    """theta = 1/4 keeps the ratio strictly under 1/k; the shortfall
    shrinks as k grows but more slowly than first hoped: the best monomial
    weight at k = 49 still sits 23.4% under 1/k, and the margin first
    drops below 15% at k = 141."""
    def monomial_max(k):
        return max(
            Fraction(1, 4) * Fraction(2 * (2 * r + 1), (r + 1) * (k + 2 * r + 1))
            for r in range(0, 121)
        )

    for k in (10, 49, 100, 141, 200, 400):
        best = monomial_max(k)
        assert best < Fraction(1, k)            # never reaches 1/k
        assert best < Fraction(1, k) * Fraction(4, 4)
    assert Fraction(1) - monomial_max(49) * 49 == Fraction(15, 64)   # delta(49) = 0.234
    assert Fraction(1) - monomial_max(140) * 140 > Fraction(15, 100)
    for k in (141, 200, 400):
        delta = Fraction(1) - monomial_max(k) * k
        assert delta <= Fraction(15, 100), k
