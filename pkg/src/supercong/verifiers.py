"""Catalog of checkable statements about central-binomial sums.

Each entry validates its side conditions, evaluates both sides and returns
a :class:`CongruenceReport`.  ``verify(..., mutate=True)`` adds one to the
right-hand side so the test suite can confirm that no verifier passes
vacuously.  Integrality claims "A - B is divisible by p^b" are congruences
A == B (mod p^b), so B is the side perturbed; for pure valuation claims the
required valuation is raised by one.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .combinatorics import binomial, catalan, restricted_harmonic
from .exact_arith import (
    INF,
    NotPAdicInteger,
    PrimePowerCtx,
    SuperCongError,
    Valuation,
    check_odd_prime,
    reduce,
    vp,
)
from .number_theory import LucasParams, jacobi, legendre, lucas_entry, lucas_u
from . import sums


class MissingParam(SuperCongError, KeyError):
    pass


@dataclass
class CongruenceReport:
    statement: str
    params: dict[str, int]
    modulus: int | None = None
    lhs: int | str | None = None
    rhs: int | str | None = None
    passed: bool = False
    skipped: bool = False
    reason: str | None = None
    valuation_measured: Valuation | None = None
    valuation_required: Valuation | None = None
    witness: str | None = None
    note: str | None = None

    @property
    def failed(self) -> bool:
        return not self.passed and not self.skipped

    def to_record(self) -> dict:
        """Flat dict for JSONL/CSV output; unset fields are left out."""
        rec: dict = {"statement": self.statement, "params": dict(self.params)}
        for key in ("modulus", "lhs", "rhs"):
            val = getattr(self, key)
            if val is not None:
                rec[key] = val
        rec["pass"] = self.passed
        rec["skipped"] = self.skipped
        for key in ("reason", "valuation_measured", "valuation_required", "witness", "note"):
            val = getattr(self, key)
            if val is None:
                continue
            if isinstance(val, float) and math.isinf(val):
                val = "inf"
            rec[key] = val
        return rec


@dataclass(frozen=True)
class Statement:
    id: str
    params: tuple[str, ...]
    kind: str  # "congruence", "valuation" or "integrality"
    summary: str
    check: Callable[["_Check"], CongruenceReport] = field(repr=False, compare=False)


class _Check:
    """Per-call helper carrying params and the mutation flag."""

    def __init__(self, sid: str, params: Mapping[str, int], names, mutate: bool, guard: int):
        missing = [k for k in names if k not in params]
        if missing:
            raise MissingParam(f"{sid} needs parameter(s) {', '.join(missing)}")
        self.sid = sid
        self.params = {k: int(params[k]) for k in names}
        self.mutate = mutate
        self.guard = guard

    def __getitem__(self, key: str) -> int:
        return self.params[key]

    def report(self, **kw) -> CongruenceReport:
        return CongruenceReport(self.sid, self.params, **kw)

    def skip(self, reason: str) -> CongruenceReport:
        return self.report(skipped=True, passed=False, reason=reason)

    def cong(self, lhs, rhs, p: int, e: int, witness: Callable[[], object] | None = None,
             extra_ok: bool = True, note: str | None = None) -> CongruenceReport:
        """lhs == rhs (mod p^e) for p-integral rationals or residues."""
        if self.mutate:
            rhs = Fraction(rhs) + 1
        if e <= 0:
            return self.report(modulus=1, lhs=0, rhs=0, passed=True,
                               note=_join(note, "vacuous modulus"))
        ctx = PrimePowerCtx(p, e)
        try:
            lr, rr = reduce(lhs, ctx), reduce(rhs, ctx)
        except NotPAdicInteger as exc:
            return self.report(modulus=ctx.modulus, passed=False,
                               reason=f"not p-integral: {exc}", witness=_render(lhs))
        ok = lr == rr and extra_ok
        rep = self.report(modulus=ctx.modulus, lhs=lr, rhs=rr, passed=ok, note=note)
        if not ok and not self.mutate:
            rep.witness = _render(witness() if witness is not None else lhs)
        return rep

    def bound(self, measured: Valuation, required: Valuation, value=None) -> CongruenceReport:
        """measured >= required (the required valuation is the mutated side)."""
        if self.mutate:
            required = required + 1
        ok = measured >= required
        rep = self.report(valuation_measured=measured, valuation_required=required, passed=ok)
        if not ok and value is not None and not self.mutate:
            rep.witness = _render(value)
        return rep

    def integral(self, lhs, rhs, p: int, required: int) -> CongruenceReport:
        """vp(lhs - rhs) >= required, i.e. lhs == rhs (mod p^required).

        The mutation perturbs ``rhs``, as for an ordinary congruence.
        """
        if self.mutate:
            rhs = Fraction(rhs) + 1
        diff = Fraction(lhs) - rhs
        measured = vp(diff, p)
        ok = measured >= required
        rep = self.report(valuation_measured=measured, valuation_required=required, passed=ok)
        if not ok and not self.mutate:
            rep.witness = _render(diff)
        return rep


def _join(a: str | None, b: str) -> str:
    return b if not a else f"{a}; {b}"


def _render(x) -> str | None:
    if x is None:
        return None
    limit = getattr(sys, "get_int_max_str_digits", lambda: 0)()
    if limit:
        sys.set_int_max_str_digits(0)
    try:
        return str(Fraction(x))
    finally:
        if limit:
            sys.set_int_max_str_digits(limit)


def _delta3(p: int) -> int:
    return 1 if p == 3 else 0


def _sym3(x: int) -> int:
    """(x/3) by residue: 0 -> 0, 1 -> 1, 2 -> -1."""
    return (0, 1, -1)[x % 3]


def _half_class(p: int, h: int) -> bool:
    return (2 * h - 1) % p == 0


# -- central sums and their m-analogues ----------------------------------------


def _ps06(c: _Check) -> CongruenceReport:
    p, d = c["p"], c["d"]
    check_odd_prime(p)
    if not 0 <= d <= p:
        return c.skip("needs 0 <= d <= p")
    note = "boundary d = p: every term vanishes" if d == p else None
    return c.cong(sums.sum_shifted(p, d), _sym3(p - d), p, 1, note=note)


def _st10(c: _Check) -> CongruenceReport:
    p, a = c["p"], c["a"]
    check_odd_prime(p)
    if a < 1:
        return c.skip("needs a >= 1")
    n = p**a
    lhs = sums.sum_central_mod(n, PrimePowerCtx(p, 2), c.guard)
    return c.cong(lhs, _sym3(n), p, 2, witness=lambda: sums.sum_central(n))


def _m_side(c: _Check) -> CongruenceReport | None:
    check_odd_prime(c["p"])
    if c["m"] % c["p"] == 0:
        return c.skip("needs p not dividing m")
    return None


def _e11(c: _Check) -> CongruenceReport:
    if (r := _m_side(c)) is not None:
        return r
    p, m = c["p"], c["m"]
    lp = LucasParams.for_m(m)
    rhs = legendre(lp.delta, p) + lucas_entry(p, lp)
    lhs = sums.sum_T_mod(p, m, PrimePowerCtx(p, 2), c.guard)
    return c.cong(lhs, rhs, p, 2, witness=lambda: sums.sum_T(p, m))


def _t_sides(p: int, m: int, n: int) -> tuple[Fraction, Fraction]:
    return sums.sum_T(p * n, m), legendre(m * (m - 4), p) * sums.sum_T(n, m)


def _e12(c: _Check) -> CongruenceReport:
    if (r := _m_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    return c.integral(*_t_sides(p, m, n), p, 1 + vp(n, p))


def _e13(c: _Check) -> CongruenceReport:
    if (r := _m_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    big, small = _t_sides(p, m, n)
    diff = big - small
    u = lucas_entry(p, LucasParams.for_m(m))
    rhs = n * Fraction(math.comb(2 * n, n), 2 * m ** (n - 1)) * u
    # both sides multiplied by n: modulus p^(2 + vp(n))
    return c.cong(diff, rhs, p, 2 + vp(n, p), note="both sides scaled by n")


def _e14(c: _Check) -> CongruenceReport:
    if (r := _m_side(c)) is not None:
        return r
    p, m = c["p"], c["m"]
    ctx = PrimePowerCtx(p, 1)
    lhs = sums.sum_TW_mod(p, m, ctx, c.guard)
    rhs = sums.sum_T_mod(p, m, ctx, c.guard)
    return c.cong(lhs, rhs, p, 1, witness=lambda: sums.sum_TW(p, m))


def _e15(c: _Check) -> CongruenceReport:
    p, h, a = c["p"], c["h"], c["a"]
    check_odd_prime(p)
    if a < 1:
        return c.skip("needs a >= 1")
    if h % p == 0:
        return c.skip("needs h not divisible by p")
    if _half_class(p, h) and p**a <= 3:
        return c.skip("needs 2h != 1 (mod p) or p^a > 3")
    n = p**a
    j = jacobi(1 - 2 * h, n)
    rhs = j * (1 + h * ((4 - Fraction(2, h)) ** (p - 1) - 1))
    lhs = sums.sum_S_mod(n, h, PrimePowerCtx(p, 2), c.guard)
    return c.cong(lhs, rhs, p, 2, witness=lambda: sums.sum_S(n, h))


# -- the h-family and the alternating family ----------------------------------


def _t11a(c: _Check) -> CongruenceReport:
    p, h, a = c["p"], c["h"], c["a"]
    check_odd_prime(p)
    if not _half_class(p, h):
        return c.skip("needs 2h - 1 = 0 (mod p)")
    if a < 1 or p**a <= 3:
        return c.skip("needs a >= 1 and p^a > 3")
    n = p**a
    lhs = sums.sum_S_mod(n, h, PrimePowerCtx(p, a + 1), c.guard)
    return c.cong(lhs, 0, p, a + 1, witness=lambda: sums.sum_S(n, h))


def _t11b(c: _Check) -> CongruenceReport:
    p, h, n = c["p"], c["h"], c["n"]
    check_odd_prime(p)
    if not _half_class(p, h):
        return c.skip("needs 2h - 1 = 0 (mod p)")
    if n < 1:
        return c.skip("needs n >= 1")
    s = sums.sum_S(n, h)
    return c.bound(vp(s, p), vp(n, p), s)


def _t12(c: _Check) -> CongruenceReport:
    if (r := _m_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    lhs = sums.sum_TW(p * n, m)
    rhs = legendre(m * (m - 4), p) * sums.sum_TW(n, m)
    return c.integral(lhs, rhs, p, 1 + vp(n, p))


# -- auxiliary congruences ----------------------------------------------------


def _l21(c: _Check) -> CongruenceReport:
    p, n, alpha, k = c["p"], c["n"], c["alpha"], c["k"]
    check_odd_prime(p)
    if min(n, alpha, k) < 1:
        return c.skip("needs n, k, alpha positive")
    q = k // p
    lhs = binomial(p**alpha * n - 1, k)
    sign = -1 if (k - q) % 2 else 1
    rhs = binomial(p ** (alpha - 1) * n - 1, q) * sign * (1 - n * p**alpha * restricted_harmonic(k, p))
    return c.cong(lhs, rhs, p, 2 * alpha)


def _l22(c: _Check) -> CongruenceReport:
    p, a, b, r, s = c["p"], c["a"], c["b"], c["r"], c["s"]
    check_odd_prime(p)
    if r < 1 or s < 1:
        return c.skip("needs r, s >= 1")
    if a < 0 or b < 0 or p**s * b > p**r * a:
        return c.skip("needs 0 <= p^s b <= p^r a")
    ratio = Fraction(math.comb(p**r * a, p**s * b), math.comb(p ** (r - 1) * a, p ** (s - 1) * b))
    return c.cong(ratio, 1, p, r + s + min(r, s) - _delta3(p))


def _l23_side(c: _Check) -> CongruenceReport | None:
    check_odd_prime(c["p"])
    if (c["m"] - 4) % c["p"]:
        return c.skip("needs p | m - 4")
    return None


def _l23a(c: _Check) -> CongruenceReport:
    if (r := _l23_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    t, tw = sums.sum_T(n, m), sums.sum_TW(n, m)
    vt, vtw = vp(t, p), vp(tw, p)
    rep = c.bound(min(vt, vtw), vp(n, p), t if vt <= vtw else tw)
    rep.note = f"plain sum valuation {_fmt(vt)}, binomial-weighted {_fmt(vtw)}"
    return rep


def _fmt(v: Valuation) -> str:
    return "inf" if v == INF else str(v)


def _l23b(c: _Check) -> CongruenceReport:
    if (r := _l23_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    lhs = sums.sum_T(n, m) / n
    rhs = Fraction(math.comb(2 * n - 1, n - 1), 4 ** (n - 1))
    if p == 3 and n % 3 == 0:
        n3 = n // 3 ** vp(n, 3)
        rhs += Fraction(m - 4, 3) * math.comb(2 * n3 - 1, n3 - 1)
    return c.cong(lhs, rhs, p, vp(m - 4, p))


def _l23c(c: _Check) -> CongruenceReport:
    if (r := _l23_side(c)) is not None:
        return r
    p, m, n = c["p"], c["m"], c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    lhs = sums.sum_TW(n, m) / n
    rhs = Fraction(catalan(n - 1), 4 ** (n - 1))
    return c.cong(lhs, rhs, p, vp(m - 4, p) - _delta3(p))


def _l23d(c: _Check) -> CongruenceReport:
    if (r := _l23_side(c)) is not None:
        return r
    p, m, a = c["p"], c["m"], c["a"]
    if a < 1:
        return c.skip("needs a >= 1")
    lhs = sums.sum_T(p**a, m) / p**a
    middle = 1 + _delta3(p) * Fraction(m - 4, 3)
    rhs = Fraction(m - 1, 3)
    ctx = PrimePowerCtx(p, 1)
    chain_ok = reduce(middle, ctx) == reduce(rhs, ctx)
    return c.cong(lhs, rhs, p, 1, extra_ok=chain_ok,
                  note=None if chain_ok else "middle expression disagrees")


def _l24_side(c: _Check, want_p: str) -> CongruenceReport | None:
    p, h, alpha, l = c["p"], c["h"], c["alpha"], c["l"]
    check_odd_prime(p)
    if want_p == "ge5" and p < 5:
        return c.skip("needs p >= 5")
    if want_p == "3" and p != 3:
        return c.skip("needs p = 3")
    if not _half_class(p, h):
        return c.skip("needs 2h - 1 = 0 (mod p)")
    if alpha < 0 or l < 0:
        return c.skip("needs alpha, l >= 0")
    return None


def _block(c: _Check, e: int) -> int:
    p = c["p"]
    return sums.block_sum(p, c["alpha"], c["l"], c["h"], PrimePowerCtx(p, e), c.guard)


def _block_witness(c: _Check):
    return lambda: sums.block_sum_exact(c["p"], c["alpha"], c["l"], c["h"])


def _l24a(c: _Check) -> CongruenceReport:
    if (r := _l24_side(c, "ge5")) is not None:
        return r
    p, alpha, l = c["p"], c["alpha"], c["l"]
    rhs = p**alpha * Fraction(math.comb(2 * l, l), 4**l)
    return c.cong(_block(c, alpha + 1), rhs, p, alpha + 1, witness=_block_witness(c))


def _l24b(c: _Check) -> CongruenceReport:
    if (r := _l24_side(c, "3")) is not None:
        return r
    alpha = c["alpha"]
    if alpha == 0:
        return c.cong(0, 0, 3, 0)
    return c.cong(_block(c, alpha), 0, 3, alpha, witness=_block_witness(c))


def _l24c(c: _Check) -> CongruenceReport:
    if (r := _l24_side(c, "3")) is not None:
        return r
    h, alpha, l = c["h"], c["alpha"], c["l"]
    if l % 3 != 1:
        return c.skip("needs l = 1 (mod 3)")
    cb = math.comb(2 * l, l)
    rhs = 3**alpha * Fraction(cb, 4**l)
    if alpha >= 1:
        rhs += 2 * 3 ** (alpha - 1) * Fraction((1 - 2 * h) * cb, h)
    return c.cong(_block(c, alpha + 1), rhs, 3, alpha + 1, witness=_block_witness(c))


def _l25(c: _Check) -> CongruenceReport:
    p, m, s, l = c["p"], c["m"], c["s"], c["l"]
    check_odd_prime(p)
    if s < 1 or l < 0:
        return c.skip("needs s >= 1 and l >= 0")
    if m % p == 0:
        return c.skip("needs p not dividing m")
    e = s + 1
    ctx = PrimePowerCtx(p, e)
    lp = LucasParams.for_m(m)
    sym = legendre(lp.delta, p)
    q1, q0 = p**s, p ** (s - 1)
    upper = sums.central_range_mod(q1 * l, q1 * (l + 1), 1, m, ctx, c.guard)
    lower = sums.central_range_mod(q0 * l, q0 * (l + 1), 1, m, ctx, c.guard)
    lhs = (upper - sym * lower) % ctx.modulus
    u = lucas_u(p - sym, lp)
    rhs = q0 * Fraction(math.comb(2 * l, l), m**l) * ((2 - Fraction(m, 2)) * l + 1) * u

    def witness():
        x = Fraction(1, m)
        return sums.central_range(q1 * l, q1 * (l + 1), x) - sym * sums.central_range(q0 * l, q0 * (l + 1), x)

    return c.cong(lhs, rhs, p, e, witness=witness)


def _l26(c: _Check) -> CongruenceReport:
    p, h, a = c["p"], c["h"], c["a"]
    check_odd_prime(p)
    if not _half_class(p, h):
        return c.skip("needs 2h - 1 = 0 (mod p)")
    if a < 1:
        return c.skip("needs a >= 1")
    return c.cong(sums.sum_H(a, h, p), 2 if a == 1 else 0, p, 1,
                  witness=lambda: sums.sum_H_exact(a, h, p))


def eq47_sides(p: int, d: int, a: int, s: int, k: int) -> tuple[int, int]:
    """(-1)^k C(p^(a-s) d - 1, k) and (-1)^q C(p^(a-s-1) d - 1, q), q = k // p."""
    q = k // p
    first = binomial(p ** (a - s) * d - 1, k)
    second = binomial(p ** (a - s - 1) * d - 1, q)
    return (-1) ** k * first, (-1) ** q * second


def _e47(c: _Check) -> CongruenceReport:
    p, d, a, s, k = c["p"], c["d"], c["a"], c["s"], c["k"]
    check_odd_prime(p)
    if d < 1 or d % p == 0:
        return c.skip("needs d positive and not divisible by p")
    if a < 1 or not 0 <= s <= a - 1 or k < 0:
        return c.skip("needs a >= 1, 0 <= s <= a - 1, k >= 0")
    return c.integral(*eq47_sides(p, d, a, s, k), p, a - s)


def _sn3(c: _Check) -> CongruenceReport:
    n = c["n"]
    if n < 1:
        return c.skip("needs n >= 1")
    lhs = vp(sums.sum_central(n), 3)
    rhs = 2 * vp(n, 3) + vp(math.comb(2 * n, n), 3)
    if c.mutate:
        rhs += 1
    return c.report(lhs=lhs, rhs=rhs, passed=lhs == rhs)


def _udiv(c: _Check) -> CongruenceReport:
    p, A, B = c["p"], c["A"], c["B"]
    check_odd_prime(p)
    if B % p == 0:
        return c.skip("needs p not dividing B")
    return c.cong(lucas_entry(p, LucasParams(A, B)), 0, p, 1)


_CATALOG = [
    Statement("PS06", ("p", "d"), "congruence", "shifted central sum mod p", _ps06),
    Statement("ST10", ("p", "a"), "congruence", "central sum up to p^a mod p^2", _st10),
    Statement("E11", ("p", "m"), "congruence", "sum C(2k,k)/m^k mod p^2 via Lucas term", _e11),
    Statement("E12", ("p", "m", "n"), "integrality", "lifted difference divisible by pn", _e12),
    Statement("E13", ("p", "m", "n"), "congruence", "lifted difference mod p^2", _e13),
    Statement("E14", ("p", "m"), "congruence", "binomial-weighted vs plain sum mod p", _e14),
    Statement("E15", ("p", "h", "a"), "congruence", "h-family sum mod p^2", _e15),
    Statement("T11a", ("p", "h", "a"), "congruence", "h-family sum vanishes mod p^(a+1)", _t11a),
    Statement("T11b", ("p", "h", "n"), "valuation", "h-family valuation >= vp(n)", _t11b),
    Statement("T12", ("p", "m", "n"), "integrality", "alternating difference divisible by pn", _t12),
    Statement("L21", ("p", "n", "alpha", "k"), "congruence", "binomial digit reduction mod p^(2 alpha)", _l21),
    Statement("L22", ("p", "a", "b", "r", "s"), "congruence", "binomial ratio near 1", _l22),
    Statement("L23a", ("p", "m", "n"), "valuation", "valuation bounds when p | m - 4", _l23a),
    Statement("L23b", ("p", "m", "n"), "congruence", "plain sum / n mod p^vp(m-4)", _l23b),
    Statement("L23c", ("p", "m", "n"), "congruence", "weighted sum / n vs Catalan", _l23c),
    Statement("L23d", ("p", "m", "a"), "congruence", "sum to p^a over p^a mod p", _l23d),
    Statement("L24a", ("p", "h", "alpha", "l"), "congruence", "block sum, p >= 5", _l24a),
    Statement("L24b", ("p", "h", "alpha", "l"), "congruence", "block sum, p = 3", _l24b),
    Statement("L24c", ("p", "h", "alpha", "l"), "congruence", "block sum, p = 3, l = 1 mod 3", _l24c),
    Statement("L25", ("p", "m", "s", "l"), "congruence", "block difference via Lucas term", _l25),
    Statement("L26", ("p", "h", "a"), "congruence", "harmonic-weighted sum mod p", _l26),
    Statement("E47", ("p", "d", "a", "s", "k"), "integrality", "signed binomial difference", _e47),
    Statement("SN3", ("n",), "valuation", "3-adic valuation of central sums", _sn3),
    Statement("UDIV", ("p", "A", "B"), "congruence", "p divides the Lucas entry term", _udiv),
]

STATEMENTS: dict[str, Statement] = {s.id: s for s in _CATALOG}


def verify(statement: str, params: Mapping[str, int], *, mutate: bool = False, guard: int = 0) -> CongruenceReport:
    try:
        st = STATEMENTS[statement]
    except KeyError:
        raise SuperCongError(f"unknown statement {statement!r}") from None
    return st.check(_Check(st.id, params, st.params, mutate, guard))


def verify_eq47(p: int, d: int, a: int, s: int, k: int, *, mutate: bool = False) -> CongruenceReport:
    return verify("E47", {"p": p, "d": d, "a": a, "s": s, "k": k}, mutate=mutate)
