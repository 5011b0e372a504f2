# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hypergeometric sum kernel; same contract as _kernel_py.

Callers (see kernel.py) guarantee p^e < 2^62 and that every linear factor
a*k + b fits in a signed 64-bit integer over the summation range.
"""
from .exact_arith import NotPAdicInteger, PrecisionExhausted

ctypedef long long i64
ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "__uint128_t"

cdef enum:
    MAXLIN = 8


cdef inline u64 mulmod(u64 a, u64 b, u64 m) nogil:
    return <u64>((<u128>a * b) % m)


cdef inline u64 to_res(i64 x, u64 m) nogil:
    cdef i64 r = x % <i64>m
    if r < 0:
        r += <i64>m
    return <u64>r


cdef u64 invmod(u64 a, u64 m):
    # extended Euclid on signed 128-bit would be overkill; m < 2^62 fits i64
    cdef i64 t = 0, newt = 1, r = <i64>m, newr = <i64>a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if r != 1:
        raise ZeroDivisionError("not invertible")
    if t < 0:
        t += <i64>m
    return <u64>t


def hyper_sum_mod(i64 p, int e, i64 lo, i64 hi, int v0, u0, num_lin, den_lin,
                  i64 c_num, i64 c_den, int guard):
    cdef u64 M = 1
    cdef u64 pw[64]
    cdef int i, nn, nd, step_v, v
    cdef i64 k, x
    cdef i64 na[MAXLIN]
    cdef i64 nb[MAXLIN]
    cdef i64 da[MAXLIN]
    cdef i64 db[MAXLIN]
    cdef u64 s, tn, d, nu, du, cu_n, cu_d
    cdef int cv

    if hi <= lo:
        return 0
    for i in range(e):
        pw[i] = M
        M *= <u64>p
    nn = len(num_lin)
    nd = len(den_lin)
    if nn > MAXLIN or nd > MAXLIN:
        raise ValueError("too many linear factors")
    for i in range(nn):
        na[i] = num_lin[i][0]
        nb[i] = num_lin[i][1]
    for i in range(nd):
        da[i] = den_lin[i][0]
        db[i] = den_lin[i][1]

    if v0 < -guard:
        raise PrecisionExhausted(f"start valuation {v0} below guard -{guard}")
    if v0 < 0:
        raise NotPAdicInteger(f"term {lo} has valuation {v0}")
    tn = <u64>(u0 % M)
    s = mulmod(pw[v0], tn, M) if v0 < e else 0
    if c_num == 0:
        return s
    if c_den == 0:
        raise ZeroDivisionError("zero constant denominator")

    cv = 0
    while c_num % p == 0:
        c_num //= p
        cv += 1
    while c_den % p == 0:
        c_den //= p
        cv -= 1
    cu_n = to_res(c_num, M)
    cu_d = to_res(c_den, M)

    v = v0
    d = 1
    k = lo + 1
    while k < hi:
        step_v = cv
        nu = cu_n
        du = cu_d
        for i in range(nn):
            x = na[i] * k + nb[i]
            if x == 0:
                return mulmod(s, invmod(d, M), M)
            while x % p == 0:
                x //= p
                step_v += 1
            nu = mulmod(nu, to_res(x, M), M)
        for i in range(nd):
            x = da[i] * k + db[i]
            if x == 0:
                raise ZeroDivisionError(f"denominator factor vanishes at k={k}")
            while x % p == 0:
                x //= p
                step_v -= 1
            du = mulmod(du, to_res(x, M), M)
        v += step_v
        if v < 0:
            if v < -guard:
                raise PrecisionExhausted(f"valuation {v} at k={k} below guard -{guard}")
            raise NotPAdicInteger(f"term {k} has valuation {v}")
        tn = mulmod(tn, nu, M)
        d = mulmod(d, du, M)
        s = mulmod(s, du, M)
        if v < e:
            s = (s + mulmod(pw[v], tn, M)) % M
        k += 1
    return mulmod(s, invmod(d, M), M)
