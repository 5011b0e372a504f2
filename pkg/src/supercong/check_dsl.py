"""A small assertion language for writing congruence checks as text.

Example::

    # the h = 3 family at p = 5
    let p = 5;
    let a = 1;
    assert sum(k, 0, p^a - 1, binom(3*p^a - 1, k) * cbin(k) * (-3/2)^k) === 0 mod p^(a + 1)

Grammar::

    file      := { stmt }
    stmt      := "let" IDENT "=" ["-"] INT ";" | "assert" assertion [";"]
    assertion := expr ("===" expr ["mod" expr] | ">=" expr)
    expr      := term { ("+" | "-") term }
    term      := factor { ("*" | "/") factor }
    factor    := ["-"] atom ["^" factor]
    atom      := INT | IDENT | call | "(" expr ")"
    call      := IDENT "(" expr { "," expr } ")"

``^`` binds tighter than unary minus, so ``-2^2`` is -4; ``*`` and ``/``
are left-associative, so ``a/b*c`` is ``(a/b)*c``.  ``sum(k, lo, hi, body)``
includes both bounds.  Evaluation is exact; values are Fractions, with
``vp`` of zero giving ``inf``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .combinatorics import binomial, catalan, central_binomial
from .exact_arith import INF, NotPAdicInteger, SuperCongError, is_prime, vp
from .number_theory import LucasParams, jacobi, legendre, lucas_u
from .verifiers import CongruenceReport


class DslError(SuperCongError):
    pass


class ParseError(DslError):
    def __init__(self, msg: str, line: int, col: int, source: str | None = None):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


class EvalError(DslError):
    pass


Pos = tuple[int, int]

# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Int:
    value: int
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Sum:
    var: str
    lo: "Expr"
    hi: "Expr"
    body: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


Expr = Union[Int, Var, Neg, BinOp, Call, Sum]

CONG, EQ, VPGE = "CONG", "EQ", "VPGE"


@dataclass(frozen=True)
class Assertion:
    kind: str
    lhs: Expr
    rhs: Expr
    modulus: Expr | None = None
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Let:
    name: str
    value: int
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class CheckFile:
    stmts: tuple[Union[Let, Assertion], ...]

    def assertions(self) -> list[tuple[dict[str, int], Assertion]]:
        """Each assertion with the ``let`` bindings in force at that point."""
        env: dict[str, int] = {}
        out = []
        for st in self.stmts:
            if isinstance(st, Let):
                env[st.name] = st.value
            else:
                out.append((dict(env), st))
        return out


# name -> (min args, max args or None)
BUILTINS: dict[str, tuple[int, int | None]] = {
    "binom": (2, 2),
    "cbin": (1, 1),
    "cat": (1, 1),
    "lucasu": (3, 3),
    "leg": (2, 2),
    "jac": (2, 2),
    "hsum": (2, 2),
    "vp": (2, 2),
    "floor": (1, 1),
    "min": (1, None),
    "delta": (2, 2),
    "divides": (2, 2),
    "sum": (4, 4),
}
KEYWORDS = {"let", "assert", "mod"}

# -- lexer --------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>===|>=|[-+*/^(),;=])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, source: str | None = None) -> list[Token]:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1, source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("int", "ident", "op"):
            toks.append(Token(kind, m.group(), line, i - line_start + 1))
        i = m.end()
    toks.append(Token("eof", "", line, i - line_start + 1))
    return toks


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, source: str | None):
        self.toks = tokenize(text, source)
        self.i = 0
        self.source = source
        self.scope: list[set[str]] = [set()]

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, self.source)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.advance()

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def bound(self, name: str) -> bool:
        return any(name in s for s in self.scope)

    # file level

    def file(self) -> CheckFile:
        stmts: list[Union[Let, Assertion]] = []
        while self.tok.kind != "eof":
            if self.at("let"):
                stmts.append(self.let())
            elif self.at("assert"):
                stmts.append(self.assertion())
            else:
                raise self.error(f"expected 'let' or 'assert', found {self.tok.text!r}")
        return CheckFile(tuple(stmts))

    def let(self) -> Let:
        start = self.expect("let")
        name = self.ident().text
        self.expect("=")
        sign = -1 if self.at("-") and self.advance() else 1
        if self.tok.kind != "int":
            raise self.error("let needs an integer literal")
        value = sign * int(self.advance().text)
        self.expect(";")
        self.scope[0].add(name)
        return Let(name, value, (start.line, start.col))

    def assertion(self) -> Assertion:
        start = self.expect("assert")
        pos = (start.line, start.col)
        lhs = self.expr()
        if self.at(">="):
            self.advance()
            out = Assertion(VPGE, lhs, self.expr(), None, pos)
        elif self.at("==="):
            self.advance()
            rhs = self.expr()
            if self.at("mod"):
                self.advance()
                out = Assertion(CONG, lhs, rhs, self.expr(), pos)
            else:
                out = Assertion(EQ, lhs, rhs, None, pos)
        else:
            raise self.error("expected '===' or '>='")
        if self.at(";"):
            self.advance()
        return out

    # expressions

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+") or self.at("-"):
            tok = self.advance()
            node = BinOp(tok.text, node, self.term(), (tok.line, tok.col))
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("*") or self.at("/"):
            tok = self.advance()
            node = BinOp(tok.text, node, self.factor(), (tok.line, tok.col))
        return node

    def factor(self) -> Expr:
        if self.at("-"):
            tok = self.advance()
            return Neg(self.power(), (tok.line, tok.col))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            tok = self.advance()
            return BinOp("^", base, self.factor(), (tok.line, tok.col))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        pos = (tok.line, tok.col)
        if tok.kind == "int":
            self.advance()
            return Int(int(tok.text), pos)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            if self.at("("):
                return self.call(tok)
            if not self.bound(tok.text):
                raise ParseError(f"unbound variable {tok.text!r}", tok.line, tok.col, self.source)
            return Var(tok.text, pos)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def call(self, name: Token) -> Expr:
        pos = (name.line, name.col)
        if name.text not in BUILTINS:
            raise ParseError(f"unknown function {name.text!r}", name.line, name.col, self.source)
        self.expect("(")
        if name.text == "sum":
            var = self.ident().text
            self.expect(",")
            lo = self.expr()
            self.expect(",")
            hi = self.expr()
            self.expect(",")
            self.scope.append({var})
            body = self.expr()
            self.scope.pop()
            self.expect(")")
            return Sum(var, lo, hi, body, pos)
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        lo, hi = BUILTINS[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if lo == hi else f"at least {lo}"
            raise ParseError(f"{name.text} takes {want} argument(s), got {len(args)}",
                             name.line, name.col, self.source)
        return Call(name.text, tuple(args), pos)


def parse_file(text: str, source: str | None = None) -> CheckFile:
    return _Parser(text, source).file()


def parse(text: str, source: str | None = None) -> list[tuple[dict[str, int], Assertion]]:
    """Parse a check file into (parameter bindings, assertion) pairs."""
    return parse_file(text, source).assertions()


def parse_expr(text: str, names: frozenset[str] | set[str] = frozenset()) -> Expr:
    """Parse a bare expression; ``names`` are treated as bound."""
    p = _Parser(text, None)
    p.scope[0].update(names)
    node = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return node


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Int) and node.value < 0:
        return _PREC["neg"]
    return 5


def to_source(node: Expr) -> str:
    """Render with the fewest parentheses that parse back to the same tree."""
    if isinstance(node, Int):
        return str(node.value) if node.value >= 0 else f"(-{-node.value})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        # the operand of unary minus is an atom or a power
        return "-" + (inner if _prec(node.operand) >= 4 else f"({inner})")
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_source(a) for a in node.args)})"
    if isinstance(node, Sum):
        parts = [node.var, to_source(node.lo), to_source(node.hi), to_source(node.body)]
        return f"sum({', '.join(parts)})"
    prec = _PREC[node.op]
    left, right = to_source(node.left), to_source(node.right)
    if node.op == "^":
        if _prec(node.left) <= 4:
            left = f"({left})"
        if _prec(node.right) < 3:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < prec:
        left = f"({left})"
    if _prec(node.right) <= prec:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def assertion_source(a: Assertion) -> str:
    out = f"assert {to_source(a.lhs)} {'>=' if a.kind == VPGE else '==='} {to_source(a.rhs)}"
    if a.kind == CONG:
        out += f" mod {to_source(a.modulus)}"
    return out


def file_source(f: CheckFile) -> str:
    lines = []
    for st in f.stmts:
        lines.append(f"let {st.name} = {st.value};" if isinstance(st, Let) else assertion_source(st))
    return "\n".join(lines) + ("\n" if lines else "")


# -- evaluation ---------------------------------------------------------------

Value = Union[Fraction, float]  # float only for +inf


def _where(node) -> str:
    return f" at {node.pos[0]}:{node.pos[1]}" if node.pos != (0, 0) else ""


def _as_int(x: Value, what: str, node) -> int:
    if isinstance(x, float) or x.denominator != 1:
        raise EvalError(f"{what} must be an integer, got {x}{_where(node)}")
    return x.numerator


class _HarmonicCache:
    """Prefix sums of 1/j over p-free j, grown on demand per prime."""

    def __init__(self):
        self.tables: dict[int, list[Fraction]] = {}

    def get(self, k: int, p: int) -> Fraction:
        tab = self.tables.setdefault(p, [Fraction(0)])
        while len(tab) <= k:
            j = len(tab)
            tab.append(tab[-1] + (Fraction(1, j) if j % p else 0))
        return tab[k]


class Evaluator:
    def __init__(self, bindings: Mapping[str, int]):
        self.env: dict[str, Value] = {k: Fraction(int(v)) for k, v in bindings.items()}
        self.hsum = _HarmonicCache()

    def value(self, node: Expr) -> Value:
        if isinstance(node, Int):
            return Fraction(node.value)
        if isinstance(node, Var):
            try:
                return self.env[node.name]
            except KeyError:
                raise EvalError(f"variable {node.name!r} has no value{_where(node)}") from None
        if isinstance(node, Neg):
            return -self.value(node.operand)
        if isinstance(node, BinOp):
            return self.binop(node)
        if isinstance(node, Sum):
            return self.sum(node)
        return self.call(node)

    def binop(self, node: BinOp) -> Value:
        a, b = self.value(node.left), self.value(node.right)
        if isinstance(a, float) or isinstance(b, float):
            # only +inf arithmetic on valuations is meaningful
            if node.op == "+" or (node.op == "-" and not isinstance(b, float)):
                return INF
            raise EvalError(f"cannot apply {node.op!r} to inf{_where(node)}")
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0:
                raise EvalError(f"division by zero{_where(node)}")
            return a / b
        n = _as_int(b, "exponent", node)
        if a == 0 and n < 0:
            raise EvalError(f"division by zero{_where(node)}")
        return a**n

    def sum(self, node: Sum) -> Value:
        lo = _as_int(self.value(node.lo), "sum bound", node)
        hi = _as_int(self.value(node.hi), "sum bound", node)
        saved = self.env.get(node.var)
        acc: Value = Fraction(0)
        try:
            for k in range(lo, hi + 1):
                self.env[node.var] = Fraction(k)
                term = self.value(node.body)
                if isinstance(term, float):
                    raise EvalError(f"sum term is inf{_where(node)}")
                acc += term
        finally:
            if saved is None:
                self.env.pop(node.var, None)
            else:
                self.env[node.var] = saved
        return acc

    def call(self, node: Call) -> Value:
        f = node.func
        args = [self.value(a) for a in node.args]
        if f == "vp":
            p = _as_int(args[1], "vp prime", node)
            x = args[0]
            if isinstance(x, float):
                return INF
            v = vp(x, p)
            return v if v == INF else Fraction(v)
        if f == "min":
            return min(args)
        if any(isinstance(x, float) for x in args):
            raise EvalError(f"{f} got inf{_where(node)}")
        if f == "floor":
            return Fraction(math.floor(args[0]))
        if f == "delta":
            return Fraction(int(args[0] == args[1]))
        ints = [_as_int(x, f"{f} argument", node) for x in args]
        if f == "binom":
            return Fraction(binomial(ints[0], ints[1]) if ints[1] >= 0 else 0)
        if f == "divides":
            a, b = ints
            return Fraction(int(b == 0 if a == 0 else b % a == 0))
        if f in ("cbin", "cat"):
            if ints[0] < 0:
                raise EvalError(f"{f} needs a nonnegative argument{_where(node)}")
            return Fraction((central_binomial if f == "cbin" else catalan)(ints[0]))
        if f == "lucasu":
            if ints[0] < 0:
                raise EvalError(f"lucasu needs a nonnegative index{_where(node)}")
            return Fraction(lucas_u(ints[0], LucasParams(ints[1], ints[2])))
        if f == "leg":
            return Fraction(legendre(ints[0], ints[1]))
        if f == "jac":
            return Fraction(jacobi(ints[0], ints[1]))
        if f == "hsum":
            k, p = ints
            if k < 0 or p < 2 or not is_prime(p):
                raise EvalError(f"hsum needs k >= 0 and a prime p{_where(node)}")
            return self.hsum.get(k, p)
        raise EvalError(f"unknown function {f!r}")  # parser prevents this


def free_vars(node) -> set[str]:
    if isinstance(node, Assertion):
        out = free_vars(node.lhs) | free_vars(node.rhs)
        return out | (free_vars(node.modulus) if node.modulus is not None else set())
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Int):
        return set()
    if isinstance(node, Neg):
        return free_vars(node.operand)
    if isinstance(node, BinOp):
        return free_vars(node.left) | free_vars(node.right)
    if isinstance(node, Call):
        return set().union(*(free_vars(a) for a in node.args))
    return free_vars(node.lo) | free_vars(node.hi) | (free_vars(node.body) - {node.var})


def _show(x: Value) -> int | str:
    if isinstance(x, float):
        return "inf"
    return x.numerator if x.denominator == 1 else str(x)


def evaluate(assertion: Assertion, bindings: Mapping[str, int], label: str = "dsl") -> CongruenceReport:
    """Evaluate exactly and report in the same shape as the built-in verifiers."""
    names = sorted(free_vars(assertion))
    missing = [n for n in names if n not in bindings]
    if missing:
        raise EvalError(f"no value for {', '.join(missing)}")
    params = {n: int(bindings[n]) for n in names}
    ev = Evaluator(params)
    lhs, rhs = ev.value(assertion.lhs), ev.value(assertion.rhs)
    if assertion.kind == VPGE:
        return CongruenceReport(label, params, passed=lhs >= rhs,
                                valuation_measured=_show(lhs) if lhs != INF else INF,
                                valuation_required=_show(rhs) if rhs != INF else INF)
    if assertion.kind == EQ:
        return CongruenceReport(label, params, lhs=_show(lhs), rhs=_show(rhs), passed=lhs == rhs)
    mod = ev.value(assertion.modulus)
    M = _as_int(mod, "modulus", assertion.modulus)
    if M < 1:
        raise EvalError(f"modulus must be positive, got {M}")
    residues = []
    for side in (lhs, rhs):
        if isinstance(side, float):
            raise EvalError("a congruence side is inf")
        if math.gcd(side.denominator, M) != 1:
            raise NotPAdicInteger(f"{side} is not integral modulo {M}")
        residues.append(side.numerator * pow(side.denominator, -1, M) % M if M > 1 else 0)
    return CongruenceReport(label, params, modulus=M, lhs=residues[0], rhs=residues[1],
                            passed=residues[0] == residues[1])


def evaluate_file(f: CheckFile, label: str = "dsl", overrides: Mapping[str, int] | None = None
                  ) -> Iterator[CongruenceReport]:
    """Evaluate every assertion of a parsed file; ``overrides`` replace ``let`` values."""
    pairs = f.assertions()
    for i, (env, a) in enumerate(pairs):
        env.update(overrides or {})
        name = label if len(pairs) == 1 else f"{label}#{i + 1}"
        yield evaluate(a, env, name)
