"""Exact rationals, p-adic valuations and residues modulo odd prime powers.

Rationals are plain :class:`fractions.Fraction` objects (always reduced,
positive denominator, zero stored as 0/1).  Valuations are ``int`` or
``math.inf`` for the zero input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

BigRational = Fraction
Valuation = Union[int, float]
INF = math.inf

RationalLike = Union[int, Fraction]


class SuperCongError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(SuperCongError, ValueError):
    pass


class NotInvertible(SuperCongError, ZeroDivisionError):
    pass


class NotPAdicInteger(SuperCongError, ValueError):
    pass


class PrecisionExhausted(SuperCongError, ArithmeticError):
    pass


# Deterministic Miller-Rabin witnesses for n < 3.3e24 (covers all 64-bit n).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> None:
    if not isinstance(p, int) or p < 3 or not is_prime(p):
        raise ParameterError(f"{p!r} is not an odd prime")


def vp_int(n: int, p: int) -> Valuation:
    """Exponent of p in the integer n (sign ignored); +inf for n = 0."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    # square the divisor while it still divides, then back off
    while n % p == 0:
        q = p
        k = 1
        while n % (q * q) == 0:
            q *= q
            k *= 2
        n //= q
        v += k
    return v


def strip_p(n: int, p: int) -> tuple[int, int]:
    """Split nonzero n as p^v * w with p not dividing w; returns (v, w)."""
    if n == 0:
        raise ValueError("cannot strip p from zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def vp(x: RationalLike, p: int) -> Valuation:
    """p-adic valuation of a rational: vp(num) - vp(den), +inf at zero."""
    if not is_prime(p):
        raise ParameterError(f"{p!r} is not prime")
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


@dataclass(frozen=True)
class PrimePowerCtx:
    """The residue ring Z/p^e for an odd prime p."""

    p: int
    e: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        check_odd_prime(self.p)
        if not isinstance(self.e, int) or self.e < 1:
            raise ParameterError(f"exponent must be >= 1, got {self.e!r}")
        object.__setattr__(self, "modulus", self.p**self.e)


def mod_inv(a: int, ctx: PrimePowerCtx) -> int:
    if a % ctx.p == 0:
        raise NotInvertible(f"{a} is not invertible modulo {ctx.p}^{ctx.e}")
    return pow(a, -1, ctx.modulus)


def reduce(x: RationalLike, ctx: PrimePowerCtx) -> int:
    """Image of a p-adic integral rational in Z/p^e, least nonnegative."""
    x = Fraction(x)
    if x.denominator % ctx.p == 0:
        raise NotPAdicInteger(f"{x} has negative {ctx.p}-adic valuation")
    m = ctx.modulus
    return x.numerator * pow(x.denominator, -1, m) % m


@dataclass(frozen=True)
class ValUnit:
    """The value p^v * u, u a p-adic unit known modulo p^(e + guard).

    ``guard`` is the largest total valuation the owner may divide out; a
    running offset below ``-guard`` raises :class:`PrecisionExhausted`.
    """

    ctx: PrimePowerCtx
    v: int = 0
    u: int = 1
    zero: bool = False
    guard: int = 0

    @property
    def unit_modulus(self) -> int:
        return self.ctx.p ** (self.ctx.e + self.guard)

    @classmethod
    def one(cls, ctx: PrimePowerCtx, guard: int = 0) -> "ValUnit":
        return cls(ctx, 0, 1, False, guard)

    @classmethod
    def zero_of(cls, ctx: PrimePowerCtx, guard: int = 0) -> "ValUnit":
        return cls(ctx, 0, 0, True, guard)

    @classmethod
    def from_rational(cls, x: RationalLike, ctx: PrimePowerCtx, guard: int = 0) -> "ValUnit":
        return cls.one(ctx, guard).mul_div(x) if x != 0 else cls.zero_of(ctx, guard)

    def mul_div(self, factor: RationalLike) -> "ValUnit":
        return valunit_mul_div(self, factor)

    def to_residue(self) -> int:
        """p^v * u reduced into [0, p^e); needs v >= 0."""
        if self.zero:
            return 0
        if self.v < 0:
            raise NotPAdicInteger(f"value has {self.ctx.p}-adic valuation {self.v}")
        if self.v >= self.ctx.e:
            return 0
        return self.ctx.p**self.v * self.u % self.ctx.modulus

    def valuation(self) -> Valuation:
        return INF if self.zero else self.v


def valunit_mul_div(x: ValUnit, factor: RationalLike) -> ValUnit:
    """x * factor with valuation offsets added and unit parts multiplied."""
    if x.zero:
        return x
    factor = Fraction(factor)
    if factor == 0:
        return ValUnit.zero_of(x.ctx, x.guard)
    p = x.ctx.p
    vn, wn = strip_p(factor.numerator, p)
    vd, wd = strip_p(factor.denominator, p)
    v = x.v + vn - vd
    if v < -x.guard:
        raise PrecisionExhausted(
            f"valuation offset {v} fell below the declared guard -{x.guard}"
        )
    mod = x.unit_modulus
    u = x.u * wn % mod * pow(wd, -1, mod) % mod
    return ValUnit(x.ctx, v, u, False, x.guard)
