"""Binomial machinery: generalized binomials, Catalan numbers, restricted
harmonic sums, Lucas' theorem and incremental row scanning."""
from __future__ import annotations

import math
from fractions import Fraction

from .exact_arith import PrimePowerCtx, ValUnit, is_prime, ParameterError


def binomial(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)/k! for any integer n; zero for k < 0.

    Negative upper arguments use C(n, k) = (-1)^k C(k-n-1, k).
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    c = math.comb(k - n - 1, k)
    return -c if k & 1 else c


def central_binomial(k: int) -> int:
    return math.comb(2 * k, k)


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def restricted_harmonic(k: int, p: int) -> Fraction:
    """Sum of 1/j over 1 <= j <= k with p not dividing j."""
    num, den = 0, 1
    for j in range(1, k + 1):
        if j % p:
            num = num * j + den
            den *= j
    return Fraction(num, den)


def binomial_mod_lucas(n: int, k: int, p: int) -> int:
    """C(n, k) mod p as the product of base-p digit binomials."""
    if n < 0 or k < 0:
        raise ParameterError("Lucas' theorem needs nonnegative arguments")
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    r = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        r = r * math.comb(ni, ki) % p
    return r


class BinomRowScanner:
    """Walks C(upper, 0), C(upper, 1), ... as ValUnits.

    Each step multiplies by (upper - k + 1)/k; the unit/valuation split
    makes the division by p-divisible k lossless.
    """

    def __init__(self, upper: int, ctx: PrimePowerCtx, guard: int = 0):
        self.upper = upper
        self.ctx = ctx
        self.k = 0
        self.value = ValUnit.one(ctx, guard)

    def next(self) -> ValUnit:
        self.k += 1
        self.value = self.value.mul_div(Fraction(self.upper - self.k + 1, self.k))
        return self.value

    def __iter__(self):
        yield self.value
        while True:
            yield self.next()


def row_scan_next(s: BinomRowScanner) -> ValUnit:
    return s.next()
