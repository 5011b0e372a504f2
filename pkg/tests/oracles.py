"""Brute-force reference values built straight from the definitions.

Deliberately slow and naive: every term is a fresh Fraction built from
math.comb or the falling-factorial binomial, with no recurrences shared
with the library.
"""
import math
from fractions import Fraction

from supercong import sums
from supercong.exact_arith import PrimePowerCtx


def gbinom(n, k):
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


def S(n, h):
    return sum(Fraction(gbinom(h * n - 1, k) * math.comb(2 * k, k)) * Fraction(-h, 2) ** k for k in range(n))


def T(n, m):
    return sum(Fraction(math.comb(2 * k, k), m**k) for k in range(n))


def TW(n, m):
    return sum(Fraction(math.comb(n - 1, k) * math.comb(2 * k, k), (-m) ** k) for k in range(n))


def central_range(lo, hi, x):
    return sum((math.comb(2 * k, k) * Fraction(x) ** k for k in range(lo, hi)), Fraction(0))


def H(a, h, p):
    total = Fraction(0)
    for k in range(p**a):
        harm = sum((Fraction(1, j) for j in range(1, k + 1) if j % p), Fraction(0))
        total += math.comb(2 * k, k) * Fraction(h, 2) ** k * harm
    return total


def residue(x, M):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, M) % M


def valuation(x, p):
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def random_instance(rng):
    """(fast residue, exact value, ctx) for one random sum-family instance."""
    fam = rng.choice(["S", "T", "TW", "central", "block", "range"])
    p = rng.choice([3, 5, 7, 11, 13, 17, 31])
    e = rng.randint(1, 4)
    ctx = PrimePowerCtx(p, e)
    n = rng.randint(1, 400)
    if fam == "S":
        h = rng.randint(-50, 50)
        return sums.sum_S_mod(n, h, ctx), S(n, h), ctx
    if fam in ("T", "TW"):
        m = rng.choice([x for x in range(-40, 41) if x % p])
        fast = (sums.sum_T_mod if fam == "T" else sums.sum_TW_mod)(n, m, ctx)
        return fast, (T if fam == "T" else TW)(n, m), ctx
    if fam == "central":
        return sums.sum_central_mod(n, ctx), sum(math.comb(2 * k, k) for k in range(n)), ctx
    if fam == "block":
        alpha = rng.randint(0, 2)
        l = rng.randint(0, max(0, 400 // p**alpha - 1))
        h = rng.randint(-20, 20)
        q = p**alpha
        return sums.block_sum(p, alpha, l, h, ctx), central_range(q * l, q * (l + 1), Fraction(h, 2)), ctx
    lo = rng.randint(0, n)
    num = rng.randint(-9, 9)
    den = rng.choice([d for d in range(1, 12) if d % p])
    return sums.central_range_mod(lo, n, num, den, ctx), central_range(lo, n, Fraction(num, den)), ctx
