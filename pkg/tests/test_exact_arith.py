import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from supercong.exact_arith import (
    INF,
    NotInvertible,
    NotPAdicInteger,
    ParameterError,
    PrecisionExhausted,
    PrimePowerCtx,
    ValUnit,
    is_prime,
    mod_inv,
    reduce,
    strip_p,
    vp,
    valunit_mul_div,
)

PRIMES = [3, 5, 7, 11, 13]
primes = st.sampled_from(PRIMES)
nonzero = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Fraction, st.integers(-10**6, 10**6), nonzero)


def trial_division_vp(n, p):
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TestVp:
    def test_examples(self):
        assert vp(18, 3) == 2
        assert vp(0, 7) == INF
        assert vp(Fraction(2650775, 8), 5) == 2

    def test_negative_and_rational(self):
        assert vp(-50, 5) == 2
        assert vp(Fraction(3, 25), 5) == -2

    @pytest.mark.parametrize("bad", [1, 4, 9, 15])
    def test_rejects_non_prime(self, bad):
        with pytest.raises(ParameterError):
            vp(10, bad)

    @given(nonzero, primes)
    def test_matches_trial_division(self, n, p):
        assert vp(n, p) == trial_division_vp(n, p)

    @given(rationals, rationals, primes)
    def test_multiplicative(self, x, y, p):
        assert vp(x * y, p) == vp(x, p) + vp(y, p)

    @given(rationals, rationals, primes)
    def test_ultrametric(self, x, y, p):
        lhs, a, b = vp(x + y, p), vp(x, p), vp(y, p)
        assert lhs >= min(a, b)
        if a != b:
            assert lhs == min(a, b)


def test_strip_p():
    assert strip_p(-72, 3) == (2, -8)
    with pytest.raises((ValueError, ZeroDivisionError)):
        strip_p(0, 3)


def test_is_prime_against_sieve():
    sieve = [True] * 5000
    sieve[0] = sieve[1] = False
    for i in range(2, 71):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    assert [n for n in range(5000) if is_prime(n)] == [n for n in range(5000) if sieve[n]]
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


class TestContext:
    def test_modulus(self):
        assert PrimePowerCtx(5, 3).modulus == 125

    @pytest.mark.parametrize("p,e", [(2, 1), (9, 1), (5, 0), (1, 2)])
    def test_rejects(self, p, e):
        with pytest.raises(ParameterError):
            PrimePowerCtx(p, e)


class TestModInv:
    def test_examples(self):
        assert mod_inv(2, PrimePowerCtx(5, 2)) == 13
        assert mod_inv(3, PrimePowerCtx(7, 1)) == 5
        with pytest.raises(NotInvertible):
            mod_inv(5, PrimePowerCtx(5, 2))

    @given(st.integers(-10**9, 10**9), primes, st.integers(1, 6))
    def test_inverse(self, a, p, e):
        assume(a % p)
        ctx = PrimePowerCtx(p, e)
        u = mod_inv(a, ctx)
        assert 0 <= u < ctx.modulus and a * u % ctx.modulus == 1


class TestReduce:
    def test_examples(self):
        ctx = PrimePowerCtx(5, 2)
        assert reduce(Fraction(3515, 8), ctx) == 5
        assert reduce(0, ctx) == 0
        with pytest.raises(NotPAdicInteger):
            reduce(Fraction(1, 5), PrimePowerCtx(5, 1))

    @given(rationals, rationals, primes, st.integers(1, 5))
    def test_ring_homomorphism(self, x, y, p, e):
        assume(vp(x, p) >= 0 and vp(y, p) >= 0)
        ctx = PrimePowerCtx(p, e)
        M = ctx.modulus
        assert reduce(x + y, ctx) == (reduce(x, ctx) + reduce(y, ctx)) % M
        assert reduce(x * y, ctx) == reduce(x, ctx) * reduce(y, ctx) % M

    @given(rationals, primes, st.integers(1, 5))
    def test_definition(self, x, p, e):
        assume(vp(x, p) >= 0)
        M = p**e
        r = reduce(x, PrimePowerCtx(p, e))
        assert (r * x.denominator - x.numerator) % M == 0


class TestValUnit:
    ctx = PrimePowerCtx(5, 2)

    def test_examples(self):
        x = ValUnit(self.ctx, 1, 3)
        assert valunit_mul_div(x, Fraction(1, 5)) == ValUnit(self.ctx, 0, 3)
        z = ValUnit.zero_of(self.ctx)
        assert valunit_mul_div(z, Fraction(7, 2)).zero
        y = ValUnit(self.ctx, 0, 2)
        assert valunit_mul_div(y, 10) == ValUnit(self.ctx, 1, 4)

    def test_equality_is_structural(self):
        assert ValUnit(self.ctx, 1, 3) != ValUnit(self.ctx, 0, 3)
        assert ValUnit.zero_of(self.ctx) == ValUnit.zero_of(self.ctx)

    def test_guard_exhaustion(self):
        x = ValUnit.one(self.ctx, guard=1)
        x = x.mul_div(Fraction(1, 5))
        with pytest.raises(PrecisionExhausted):
            x.mul_div(Fraction(1, 5))

    def test_from_rational_needs_guard_for_negative_valuation(self):
        with pytest.raises(PrecisionExhausted):
            ValUnit.from_rational(Fraction(1, 25), self.ctx)

    def test_negative_valuation_residue(self):
        x = ValUnit.one(self.ctx, guard=2).mul_div(Fraction(1, 5))
        with pytest.raises(NotPAdicInteger):
            x.to_residue()

    @given(st.lists(st.builds(Fraction, nonzero, nonzero), min_size=1, max_size=12), primes, st.integers(1, 4))
    def test_product_agrees_with_reduce(self, factors, p, e):
        ctx = PrimePowerCtx(p, e)
        exact = Fraction(1)
        vmin = 0
        for f in factors:
            exact *= f
            vmin = min(vmin, vp(exact, p))
        assume(vp(exact, p) >= 0)
        x = ValUnit.one(ctx, guard=-vmin)
        for f in factors:
            x = x.mul_div(f)
        assert x.to_residue() == reduce(exact, ctx)
        assert x.valuation() == vp(exact, p)

    @given(rationals, primes)
    def test_from_rational(self, x, p):
        ctx = PrimePowerCtx(p, 3)
        guard = max(0, -vp(x, p)) if x else 0
        vu = ValUnit.from_rational(x, ctx, guard)
        assert vu.valuation() == vp(x, p)
        if x and vp(x, p) >= 0:
            assert vu.to_residue() == reduce(x, ctx)
        if x:
            assert vu.u % p != 0
