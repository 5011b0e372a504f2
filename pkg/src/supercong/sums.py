"""The central-binomial sum families, each evaluated two ways.

Exact evaluators return :class:`~fractions.Fraction` (or ``int``) and use
plain integer recurrences over a common power denominator.  The ``*_mod``
evaluators return residues mod p^e and run through the hypergeometric
kernel; the two paths share no code beyond ``math.comb``.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .exact_arith import (
    ParameterError,
    PrimePowerCtx,
    ValUnit,
    reduce,
    strip_p,
)
from .kernel import hyper_sum_mod


def _need_positive(n: int) -> None:
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")


def _need_m(m: int) -> None:
    if m == 0:
        raise ParameterError("m must be nonzero")


def default_guard(n: int, ctx: PrimePowerCtx) -> int:
    """ceil(log_p(2n)) + e."""
    g, q = 0, 1
    while q < 2 * n:
        q *= ctx.p
        g += 1
    return g + ctx.e


# -- exact evaluators ---------------------------------------------------------


def sum_S(n: int, h: int) -> Fraction:
    """sum_{k<n} C(hn-1, k) C(2k, k) (-h/2)^k."""
    _need_positive(n)
    upper = h * n - 1
    b = c = hp = 1
    acc = 0
    for k in range(n):
        if k:
            b = b * (upper - k + 1) // k
            c = c * 2 * (2 * k - 1) // k
            hp *= -h
        acc += (b * c * hp) << (n - 1 - k)
    return Fraction(acc, 1 << (n - 1))


def sum_T(n: int, m: int) -> Fraction:
    """sum_{k<n} C(2k, k) / m^k."""
    _need_positive(n)
    _need_m(m)
    c = 1
    acc = 0
    mp = m ** (n - 1)
    for k in range(n):
        if k:
            c = c * 2 * (2 * k - 1) // k
            mp //= m
        acc += c * mp
    return Fraction(acc, m ** (n - 1))


def sum_TW(n: int, m: int) -> Fraction:
    """sum_{k<n} C(n-1, k) C(2k, k) / (-m)^k."""
    _need_positive(n)
    _need_m(m)
    q = -m
    b = c = 1
    acc = 0
    qp = q ** (n - 1)
    for k in range(n):
        if k:
            b = b * (n - k) // k
            c = c * 2 * (2 * k - 1) // k
            qp //= q
        acc += b * c * qp
    return Fraction(acc, q ** (n - 1))


def central_range(lo: int, hi: int, x: Fraction | int) -> Fraction:
    """sum_{lo <= k < hi} C(2k, k) x^k, exactly."""
    x = Fraction(x)
    if hi <= lo:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    span = hi - 1 - lo
    c = math.comb(2 * lo, lo)
    xp = num**lo
    dp = den**span
    acc = 0
    for k in range(lo, hi):
        if k > lo:
            c = c * 2 * (2 * k - 1) // k
            xp *= num
            dp //= den
        acc += c * xp * dp
    return Fraction(acc, den ** (hi - 1))


def block_sum_exact(p: int, alpha: int, l: int, h: int) -> Fraction:
    """sum of C(2k, k) (h/2)^k over floor(k / p^alpha) = l."""
    q = p**alpha
    return central_range(q * l, q * (l + 1), Fraction(h, 2))


def sum_H_exact(a: int, h: int, p: int) -> Fraction:
    """sum_{k<p^a} C(2k, k) (h/2)^k H'_k with H'_k the p-free harmonic sum."""
    if a < 1:
        raise ParameterError("a must be positive")
    n = p**a
    c = 1
    hk = Fraction(1)
    hn, hd = 0, 1  # running H'_k as hn/hd
    acc = Fraction(0)
    half = Fraction(h, 2)
    for k in range(n):
        if k:
            c = c * 2 * (2 * k - 1) // k
            hk *= half
            if k % p:
                hn, hd = hn * k + hd, hd * k
        if hn:
            acc += c * hk * Fraction(hn, hd)
    return acc


def sum_H(a: int, h: int, p: int) -> int:
    """Residue mod p of :func:`sum_H_exact`."""
    return reduce(sum_H_exact(a, h, p), PrimePowerCtx(p, 1))


def sum_shifted(p: int, d: int) -> int:
    """sum_{k<p} C(2k, k + d)."""
    return sum(math.comb(2 * k, k + d) for k in range(p))


_central_prefix = [0]
_central_last = [1, 0]  # C(2k, k) and k for the next term to add


def sum_central(n: int) -> int:
    """sum_{k<n} C(2k, k); prefix sums are cached."""
    _need_positive(n)
    c, k = _central_last
    while len(_central_prefix) <= n:
        _central_prefix.append(_central_prefix[-1] + c)
        k += 1
        c = c * 2 * (2 * k - 1) // k
    _central_last[:] = [c, k]
    return _central_prefix[n]


# -- modular evaluators -------------------------------------------------------


def _unit_power_start(lo: int, x_num: int, x_den: int, ctx: PrimePowerCtx) -> tuple[int, int] | None:
    """(v, u) for the term C(2lo, lo) (x_num/x_den)^lo, or None if it is zero."""
    if x_num == 0 and lo > 0:
        return None
    p, M = ctx.p, ctx.modulus
    vc, uc = strip_p(math.comb(2 * lo, lo), p)
    vn, un = strip_p(x_num, p) if x_num else (0, 1)
    vd, ud = strip_p(x_den, p)
    v = vc + lo * (vn - vd)
    u = uc % M * pow(un, lo, M) * pow(pow(ud, lo, M), -1, M) % M
    return v, u


def central_range_mod(lo: int, hi: int, x_num: int, x_den: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    """sum_{lo <= k < hi} C(2k, k) (x_num/x_den)^k mod p^e."""
    if hi <= lo:
        return 0
    start = _unit_power_start(lo, x_num, x_den, ctx)
    if start is None:
        return 0
    v0, u0 = start
    return hyper_sum_mod(
        ctx.p, ctx.e, lo, hi, v0, u0, [(2, -1)], [(1, 0)], 2 * x_num, x_den,
        guard + default_guard(hi, ctx),
    )


def sum_S_mod(n: int, h: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    _need_positive(n)
    upper = h * n - 1
    # ratio t_k / t_{k-1} = (upper - k + 1)(2k - 1)(-h) / k^2
    return hyper_sum_mod(
        ctx.p, ctx.e, 0, n, 0, 1,
        [(-1, upper + 1), (2, -1)], [(1, 0), (1, 0)], -h, 1,
        guard + default_guard(n, ctx),
    )


def sum_T_mod(n: int, m: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    _need_positive(n)
    _need_m(m)
    return central_range_mod(0, n, 1, m, ctx, guard)


def sum_TW_mod(n: int, m: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    _need_positive(n)
    _need_m(m)
    # ratio = (n - k)/k * 2(2k - 1)/k / (-m)
    return hyper_sum_mod(
        ctx.p, ctx.e, 0, n, 0, 1,
        [(-1, n), (2, -1)], [(1, 0), (1, 0)], 2, -m,
        guard + default_guard(n, ctx),
    )


def sum_central_mod(n: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    _need_positive(n)
    return central_range_mod(0, n, 1, 1, ctx, guard)


def block_sum(p: int, alpha: int, l: int, h: int, ctx: PrimePowerCtx, guard: int = 0) -> int:
    """Residue of the block sum over floor(k / p^alpha) = l."""
    if ctx.p != p:
        raise ParameterError(f"context prime {ctx.p} differs from p = {p}")
    q = p**alpha
    return central_range_mod(q * l, q * (l + 1), h, 2, ctx, guard)


def sum_H_mod(a: int, h: int, ctx: PrimePowerCtx) -> int:
    """Residue mod p^e of the harmonic-weighted sum, term by term."""
    p, M = ctx.p, ctx.modulus
    n = p**a
    term = ValUnit.one(ctx, default_guard(n, ctx))
    hres = 0
    acc = 0
    half = Fraction(h, 2)
    for k in range(n):
        if k:
            term = term.mul_div(Fraction(2 * (2 * k - 1), k) * half)
            if k % p:
                hres = (hres + pow(k, -1, M)) % M
        acc = (acc + term.to_residue() * hres) % M
    return acc

