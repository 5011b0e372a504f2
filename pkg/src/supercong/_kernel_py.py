"""Pure-Python hypergeometric sum kernel (reference for the compiled one).

Sums t_lo + ... + t_{hi-1} modulo p^e where

    t_k = t_{k-1} * c_num * prod(a*k + b for (a, b) in num_lin)
                  / (c_den * prod(a*k + b for (a, b) in den_lin))

Every term is carried as p^v * (N / D) with N, D units mod p^e and v
exact, so dividing by multiples of p never loses digits.  The running sum
is kept over the current common denominator D; one inversion at the end.
"""
from __future__ import annotations

from .exact_arith import NotPAdicInteger, PrecisionExhausted


def _split(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hyper_sum_mod(p, e, lo, hi, v0, u0, num_lin, den_lin, c_num, c_den, guard):
    """Residue of sum_{lo <= k < hi} t_k mod p^e.

    ``(v0, u0)`` give t_lo = p^v0 * u0 with u0 a unit mod p^e.  Zero start
    terms are the caller's business.  ``guard`` bounds how negative the
    running valuation may go before :class:`PrecisionExhausted`.
    """
    if hi <= lo:
        return 0
    M = p**e
    pw = [p**i for i in range(e)]
    if v0 < -guard:
        raise PrecisionExhausted(f"start valuation {v0} below guard -{guard}")
    if v0 < 0:
        raise NotPAdicInteger(f"term {lo} has valuation {v0}")
    s = pw[v0] * u0 % M if v0 < e else 0
    if c_num == 0:
        return s
    if c_den == 0:
        raise ZeroDivisionError("zero constant denominator")
    cv_n, cu_n = _split(c_num, p)
    cv_d, cu_d = _split(c_den, p)
    cv = cv_n - cv_d
    cu_n %= M
    cu_d %= M
    v = v0
    tn = u0 % M
    d = 1
    for k in range(lo + 1, hi):
        step_v = cv
        nu = cu_n
        du = cu_d
        for a, b in num_lin:
            x = a * k + b
            if x == 0:
                # every later term vanishes too
                return s * pow(d, -1, M) % M
            while x % p == 0:
                x //= p
                step_v += 1
            nu = nu * x % M
        for a, b in den_lin:
            x = a * k + b
            if x == 0:
                raise ZeroDivisionError(f"denominator factor vanishes at k={k}")
            while x % p == 0:
                x //= p
                step_v -= 1
            du = du * x % M
        v += step_v
        if v < 0:
            if v < -guard:
                raise PrecisionExhausted(f"valuation {v} at k={k} below guard -{guard}")
            raise NotPAdicInteger(f"term {k} has valuation {v}")
        tn = tn * nu % M
        d = d * du % M
        s = s * du % M
        if v < e:
            s = (s + pw[v] * tn) % M
    return s * pow(d, -1, M) % M
