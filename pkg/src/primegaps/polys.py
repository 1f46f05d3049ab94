"""Exact polynomial arithmetic over the rationals.

The sieve-weight optimization compares strict inequalities between integrals
of squared polynomials, so all expansion, differentiation, and integration
over [0, 1] is done with Fraction coefficients; nothing here rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import require

CoeffLike = int | Fraction | str


class RationalPoly:
    """Polynomial sum c_j y^j with Fraction coefficients, low order first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[CoeffLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def vanishing_order(self) -> int | None:
        """Order of the zero at y = 0, or None for the zero polynomial."""
        for j, c in enumerate(self.coeffs):
            if c != 0:
                return j
        return None

    def __call__(self, y):
        acc = 0 if not self.coeffs else self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * y + c
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return RationalPoly(x + y for x, y in zip(a, b))

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if self.is_zero or other.is_zero:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    def scale(self, c: CoeffLike) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly(c * a for a in self.coeffs)

    def deriv(self, order: int = 1) -> "RationalPoly":
        require(order >= 0, "derivative order must be nonnegative")
        cs = self.coeffs
        for _ in range(order):
            cs = tuple(j * c for j, c in enumerate(cs))[1:]
        return RationalPoly(cs)

    def compose_one_minus(self) -> "RationalPoly":
        """The polynomial y -> self(1 - y)."""
        acc = RationalPoly()
        affine = RationalPoly([1, -1])
        for c in reversed(self.coeffs):
            acc = acc * affine + RationalPoly([c])
        return acc

    def shift_up(self, power: int) -> "RationalPoly":
        """Multiply by y^power."""
        require(power >= 0, "shift power must be nonnegative")
        if self.is_zero:
            return RationalPoly()
        return RationalPoly((Fraction(0),) * power + self.coeffs)

    def integrate01(self) -> Fraction:
        """Exact integral over [0, 1]."""
        return sum((c / (j + 1) for j, c in enumerate(self.coeffs)), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly({list(self.coeffs)!r})"


def weighted_square_integral(Q: RationalPoly, a: int) -> Fraction:
    """Exact value of integral_0^1 (y^a / a!) Q(1-y)^2 dy."""
    require(a >= 0, "weight exponent must be nonnegative")
    comp = Q.compose_one_minus()
    sq = comp * comp
    return sq.shift_up(a).integrate01() / math.factorial(a)


@dataclass(frozen=True)
class PolynomialSpec:
    """A weight polynomial P with P(1) = 1 vanishing to order >= k at 0.

    k is the tuple size the weights are built for; the vanishing condition
    is what makes the divisor-sum main terms come out as beta integrals.
    """

    coeffs: tuple[Fraction, ...]
    k: int

    def __post_init__(self):
        poly = RationalPoly(self.coeffs)
        require(self.k >= 1, "k must be at least 1")
        order = poly.vanishing_order()
        require(
            order is not None and order >= self.k,
            f"polynomial must vanish to order at least k={self.k} at 0",
        )
        require(poly(Fraction(1)) == 1, "polynomial must satisfy P(1) = 1")
        object.__setattr__(self, "coeffs", poly.coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[CoeffLike], k: int) -> "PolynomialSpec":
        return cls(tuple(Fraction(c) for c in coeffs), k)

    @classmethod
    def power(cls, k: int, r: int) -> "PolynomialSpec":
        """The standard choice P(y) = y^(k+r)."""
        require(k >= 1 and r >= 0, "need k >= 1 and r >= 0")
        coeffs = (Fraction(0),) * (k + r) + (Fraction(1),)
        return cls(coeffs, k)

    @property
    def poly(self) -> RationalPoly:
        return RationalPoly(self.coeffs)

    def __call__(self, y):
        return self.poly(y)
