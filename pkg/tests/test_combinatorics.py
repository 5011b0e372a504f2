import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supercong.combinatorics import (
    BinomRowScanner,
    binomial,
    binomial_mod_lucas,
    catalan,
    central_binomial,
    restricted_harmonic,
    row_scan_next,
)
from supercong.exact_arith import PrimePowerCtx, ValUnit, reduce, strip_p, vp


def falling_binomial(n, k):
    """n(n-1)...(n-k+1)/k! straight from the definition."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, math.factorial(k))


class TestBinomial:
    def test_examples(self):
        assert binomial(5, 2) == 10
        assert binomial(-1, 3) == -1
        assert binomial(14, 4) == math.factorial(14) // (math.factorial(4) * math.factorial(10)) == 1001

    def test_vanishing(self):
        assert binomial(3, 5) == 0
        assert binomial(-3, 5) != 0
        assert binomial(7, -1) == 0

    @given(st.integers(-60, 60), st.integers(0, 30))
    def test_falling_factorial(self, n, k):
        assert binomial(n, k) == falling_binomial(n, k)

    def test_pascal(self):
        for n in range(1, 61):
            for k in range(1, n + 1):
                assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)

    def test_chu_vandermonde(self):
        for x in range(-10, 11):
            for y in range(-10, 11):
                for n in range(21):
                    total = sum(binomial(x, k) * binomial(y, n - k) for k in range(n + 1))
                    assert total == binomial(x + y, n)


def test_central_and_catalan():
    assert [central_binomial(k) for k in (0, 3, 4)] == [1, 20, 70]
    assert [catalan(k) for k in (0, 3, 5)] == [1, 5, 42]
    for k in range(201):
        c = central_binomial(k)
        assert c == math.comb(2 * k, k)
        assert catalan(k) * (k + 1) == c
        assert catalan(k) == binomial(2 * k, k) - binomial(2 * k, k + 1)


class TestHarmonic:
    def test_examples(self):
        assert restricted_harmonic(0, 5) == 0
        assert restricted_harmonic(3, 3) == Fraction(3, 2)
        assert restricted_harmonic(4, 5) == Fraction(25, 12)

    @pytest.mark.parametrize("p", [3, 5, 7, 11])
    def test_reduction(self, p):
        ctx = PrimePowerCtx(p, 1)
        for s in range(31):
            for t in range(p):
                full = restricted_harmonic(p * s + t, p)
                head = sum((Fraction(1, j) for j in range(1, t + 1)), Fraction(0))
                assert reduce(full, ctx) == reduce(head, ctx)

    def test_p_integral(self):
        for p in (3, 5, 7):
            for k in range(200):
                assert vp(restricted_harmonic(k, p), p) >= 0


class TestLucas:
    def test_examples(self):
        assert binomial_mod_lucas(6, 3, 3) == 2
        assert binomial_mod_lucas(123, 0, 7) == 1
        assert binomial_mod_lucas(5, 7, 5) == 0

    @pytest.mark.parametrize("p", [3, 5, 7, 13])
    def test_agrees_with_binomial(self, p):
        # every n and k up to 2000 would be 4M pairs; rows are sampled densely instead
        for n in list(range(0, 200)) + list(range(1800, 2001, 7)):
            row = 1
            for k in range(n + 1):
                if k:
                    row = row * (n - k + 1) // k
                assert binomial_mod_lucas(n, k, p) == row % p
            assert binomial_mod_lucas(n, n + 3, p) == 0

    @given(st.integers(0, 2000), st.integers(0, 2000), st.sampled_from([3, 5, 7, 13]))
    def test_random_pairs(self, n, k, p):
        assert binomial_mod_lucas(n, k, p) == math.comb(n, k) % p


def unit_form(x, ctx, guard=0):
    return ValUnit.from_rational(x, ctx, guard)


class TestRowScanner:
    def test_examples(self):
        ctx = PrimePowerCtx(5, 3)
        s = BinomRowScanner(14, ctx, guard=3)
        for _ in range(4):
            val = row_scan_next(s)
        assert s.k == 4 and val.to_residue() == 1001 % 125

        s = BinomRowScanner(-1, PrimePowerCtx(5, 2))
        row_scan_next(s)
        assert row_scan_next(s).to_residue() == 1

        ctx = PrimePowerCtx(5, 1)
        s = BinomRowScanner(5, ctx, guard=2)
        for _ in range(3):
            val = row_scan_next(s)
        assert (val.v, val.u) == (1, 2)

    @given(st.integers(-200, 200), st.sampled_from([3, 5, 7]), st.integers(1, 4))
    def test_every_step(self, upper, p, e):
        ctx = PrimePowerCtx(p, e)
        guard = 8
        s = BinomRowScanner(upper, ctx, guard)
        for k in range(1, 60):
            val = row_scan_next(s)
            exact = binomial(upper, k)
            if exact == 0:
                assert val.zero
                continue
            assert val.valuation() == vp(exact, p)
            v, w = strip_p(exact, p)
            assert val.u % ctx.modulus == w % ctx.modulus
