"""Algebraic-number expressions and log-formula right-hand sides.

Text grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | "+" unary | power
    power  := atom ["^" int | "^" "-" int | "^" "(" ["-"] int ")"]
    atom   := int | "pi" | "i" | "zeta(" int ")" | "sqrt(" expr ")"
            | "root(" int "," expr ")" | "gamma(" expr ")" | "(" expr ")"

``zeta(N)`` is ``exp(2 pi i / N)``; ``root(N, E)`` is the positive real
``N``-th root of a positive real ``E``; ``gamma(E)`` takes a real argument.
A quotient of two integer literals is read as one rational literal, so
rendering and re-parsing reproduces the same tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exact import HGTriple
from .mpnum import (MPComplex, MPReal, acos, atan, cos_sin, gamma, guard_bits,
                    log_principal, nth_root, pi)


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int) -> None:
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<<>>{text[pos:]}")
        self.pos = pos
        self.text = text


class EvaluationError(ArithmeticError):
    """Domain error or division by zero while evaluating an expression."""


# precedence levels used for rendering
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


class AlgExpr:
    """Base class of expression nodes (immutable, compared structurally)."""

    level = _ATOM

    def ev(self, wp: int) -> MPComplex:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def wrap(self, need: int) -> str:
        s = self.render()
        return f"({s})" if self.level < need else s

    def children(self) -> tuple["AlgExpr", ...]:
        return ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children()), default=0)

    def __str__(self) -> str:
        return self.render()

    # operator sugar for building trees in code
    def __add__(self, o): return Add(self, _lift(o))
    def __radd__(self, o): return Add(_lift(o), self)
    def __sub__(self, o): return Sub(self, _lift(o))
    def __rsub__(self, o): return Sub(_lift(o), self)
    def __mul__(self, o): return Mul(self, _lift(o))
    def __rmul__(self, o): return Mul(_lift(o), self)
    def __truediv__(self, o): return Div(self, _lift(o))
    def __rtruediv__(self, o): return Div(_lift(o), self)
    def __neg__(self): return Neg(self)
    def __pow__(self, n: int): return Pow(self, n)


def _lift(o) -> AlgExpr:
    if isinstance(o, AlgExpr):
        return o
    if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
        f = Fraction(o)
        return Neg(Num(-f)) if f < 0 else Num(f)
    raise TypeError(f"cannot use {type(o).__name__} in an expression")


def _tiny(wp: int) -> MPReal:
    return MPReal(1, wp).shift(-wp + 16)


def _real_part(z: MPComplex, wp: int, what: str) -> MPReal:
    if abs(z.im) > _tiny(wp) * max(MPReal(1, wp), abs(z.re)):
        raise EvaluationError(f"{what} needs a real argument, got imaginary part {z.im}")
    return z.re


@dataclass(frozen=True, eq=True)
class Num(AlgExpr):
    value: Fraction

    @property
    def level(self) -> int:  # type: ignore[override]
        return _ATOM if self.value.denominator == 1 else _MUL

    def ev(self, wp: int) -> MPComplex:
        return MPComplex(self.value, 0, wp)

    def render(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Pi(AlgExpr):
    def ev(self, wp: int) -> MPComplex:
        return MPComplex(pi(wp), 0, wp)

    def render(self) -> str:
        return "pi"


@dataclass(frozen=True)
class ImagUnit(AlgExpr):
    def ev(self, wp: int) -> MPComplex:
        return MPComplex(0, 1, wp)

    def render(self) -> str:
        return "i"


@dataclass(frozen=True)
class Zeta(AlgExpr):
    n: int

    def ev(self, wp: int) -> MPComplex:
        c, s = cos_sin(Fraction(2, self.n), wp, times_pi=True)
        return MPComplex(c, s, wp)

    def render(self) -> str:
        return f"zeta({self.n})"


@dataclass(frozen=True)
class Root(AlgExpr):
    n: int
    arg: AlgExpr

    def children(self):
        return (self.arg,)

    def ev(self, wp: int) -> MPComplex:
        x = _real_part(self.arg.ev(wp), wp, f"root({self.n}, .)")
        if x.sign <= 0:
            raise EvaluationError(f"root({self.n}, .) of a non-positive real")
        return MPComplex(nth_root(x, self.n, wp), 0, wp)

    def render(self) -> str:
        if self.n == 2:
            return f"sqrt({self.arg.render()})"
        return f"root({self.n},{self.arg.render()})"


@dataclass(frozen=True)
class GammaFn(AlgExpr):
    arg: AlgExpr

    def children(self):
        return (self.arg,)

    def ev(self, wp: int) -> MPComplex:
        x = _real_part(self.arg.ev(wp), wp, "gamma(.)")
        return MPComplex(gamma(x, wp), 0, wp)

    def render(self) -> str:
        return f"gamma({self.arg.render()})"


@dataclass(frozen=True)
class _Bin(AlgExpr):
    left: AlgExpr
    right: AlgExpr

    op = "?"

    def children(self):
        return (self.left, self.right)

    def render(self) -> str:
        return f"{self.left.wrap(self.level)}{self.op}{self.right.wrap(self.level + 1)}"


class Add(_Bin):
    op, level = "+", _ADD

    def ev(self, wp):
        return self.left.ev(wp) + self.right.ev(wp)


class Sub(_Bin):
    op, level = "-", _ADD

    def ev(self, wp):
        return self.left.ev(wp) - self.right.ev(wp)


class Mul(_Bin):
    op, level = "*", _MUL

    def ev(self, wp):
        return self.left.ev(wp) * self.right.ev(wp)


class Div(_Bin):
    op, level = "/", _MUL

    def render(self) -> str:
        right = self.right.wrap(self.level + 1)
        if isinstance(self.left, Num) and isinstance(self.right, Num) and right[0].isdigit():
            right = f"({right})"
        return f"{self.left.wrap(self.level)}/{right}"

    def ev(self, wp):
        d = self.right.ev(wp)
        if abs(d) <= _tiny(wp):
            raise EvaluationError(f"division by zero: {self.right.render()}")
        return self.left.ev(wp) / d


@dataclass(frozen=True)
class Neg(AlgExpr):
    arg: AlgExpr
    level = _UNARY

    def children(self):
        return (self.arg,)

    def ev(self, wp):
        return -self.arg.ev(wp)

    def render(self) -> str:
        return "-" + self.arg.wrap(_UNARY)


@dataclass(frozen=True)
class Pow(AlgExpr):
    base: AlgExpr
    exponent: int
    level = _POW

    def children(self):
        return (self.base,)

    def ev(self, wp):
        b = self.base.ev(wp)
        if self.exponent < 0 and abs(b) <= _tiny(wp):
            raise EvaluationError(f"division by zero: {self.base.render()}")
        return b ** self.exponent

    def render(self) -> str:
        e = str(self.exponent) if self.exponent >= 0 else f"({self.exponent})"
        return f"{self.base.wrap(_ATOM)}^{e}"


PI = Pi()
I = ImagUnit()


def sqrt(e) -> Root:
    return Root(2, _lift(e))


def root(n: int, e) -> Root:
    return Root(n, _lift(e))


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos or m.lastindex is None:
            break
        if m.group(1):
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.peek()[2])

    def expect(self, value: str) -> None:
        kind, v, _ = self.peek()
        if v != value or kind != "op":
            raise self.error(f"expected {value!r}")
        self.take()

    def integer(self) -> int:
        kind, v, _ = self.peek()
        if kind != "int":
            raise self.error("expected an integer")
        self.take()
        return int(v)

    def parse(self) -> AlgExpr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return e

    def expr(self) -> AlgExpr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def _bare_int(self) -> tuple[AlgExpr, bool]:
        start = self.i
        e = self.unary()
        return e, self.i == start + 1 and self.toks[start][0] == "int"

    def term(self) -> AlgExpr:
        # only a literal `int/int` at the head of a product folds to a rational
        e, bare = self._bare_int()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            r, r_bare = self._bare_int()
            if op == "*":
                e = Mul(e, r)
            elif bare and r_bare:
                if r.value == 0:
                    raise self.error("division by zero literal")
                e = Num(e.value / r.value)
            else:
                e = Div(e, r)
            bare = False
        return e

    def unary(self) -> AlgExpr:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> AlgExpr:
        base = self.atom()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            k, v2, _ = self.peek()
            if k == "op" and v2 == "(":
                self.take()
                exp = self._signed_int()
                self.expect(")")
            else:
                exp = self._signed_int()
            return Pow(base, exp)
        return base

    def _signed_int(self) -> int:
        k, v, _ = self.peek()
        if k == "op" and v == "-":
            self.take()
            return -self.integer()
        return self.integer()

    def atom(self) -> AlgExpr:
        kind, v, _ = self.peek()
        if kind == "int":
            self.take()
            return Num(Fraction(int(v)))
        if kind == "op" and v == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            self.take()
            if v == "pi":
                return PI
            if v == "i":
                return I
            if v == "zeta":
                self.expect("(")
                n = self.integer()
                if n < 1:
                    raise self.error("zeta order must be positive")
                self.expect(")")
                return Zeta(n)
            if v == "sqrt":
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return Root(2, e)
            if v == "root":
                self.expect("(")
                n = self.integer()
                if n < 1:
                    raise self.error("root order must be positive")
                self.expect(",")
                e = self.expr()
                self.expect(")")
                return Root(n, e)
            if v == "gamma":
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return GammaFn(e)
            self.i -= 1
            raise self.error(f"unknown name {v!r}")
        raise self.error("unexpected token")


def parse(text: str) -> AlgExpr:
    """Parse the text grammar into an :class:`AlgExpr`."""
    return _Parser(text).parse()


def as_expr(e: "AlgExpr | str | int | Fraction") -> AlgExpr:
    return parse(e) if isinstance(e, str) else _lift(e)


# --------------------------------------------------------------------------
# evaluation

def working_precision(e: AlgExpr, prec: int) -> int:
    return prec + guard_bits(prec) + 4 * e.depth()


def eval_alg(e: AlgExpr | str, prec: int) -> MPComplex:
    """Value of ``e`` as a complex number at ``prec`` bits."""
    e = as_expr(e)
    return e.ev(working_precision(e, prec)).with_prec(prec)


def conjugate_tree(e: AlgExpr) -> AlgExpr:
    """Tree of the complex conjugate: ``zeta(n) -> zeta(n)^(n-1)``,
    ``i -> -i``."""
    if isinstance(e, Zeta):
        return Pow(e, e.n - 1)
    if isinstance(e, ImagUnit):
        return Neg(e)
    if isinstance(e, _Bin):
        return type(e)(conjugate_tree(e.left), conjugate_tree(e.right))
    if isinstance(e, Neg):
        return Neg(conjugate_tree(e.arg))
    if isinstance(e, Pow):
        return Pow(conjugate_tree(e.base), e.exponent)
    if isinstance(e, Root):
        return Root(e.n, conjugate_tree(e.arg))
    if isinstance(e, GammaFn):
        return GammaFn(conjugate_tree(e.arg))
    return e


def walk(e: AlgExpr) -> Iterator[AlgExpr]:
    yield e
    for c in e.children():
        yield from walk(c)


# --------------------------------------------------------------------------
# transcendental terms and formulas

TERM_KINDS = ("log", "atan", "acos", "pi_i", "one")


@dataclass(frozen=True)
class TransTerm:
    kind: str
    arg: AlgExpr | None = None

    def __post_init__(self) -> None:
        if self.kind not in TERM_KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if (self.arg is None) != (self.kind in ("pi_i", "one")):
            raise ValueError(f"term kind {self.kind!r} "
                             + ("takes no argument" if self.arg is not None else "needs an argument"))

    def ev(self, wp: int) -> MPComplex:
        if self.kind == "one":
            return MPComplex(1, 0, wp)
        if self.kind == "pi_i":
            return MPComplex(0, pi(wp), wp)
        z = self.arg.ev(wp)
        if self.kind == "log":
            if abs(z) <= _tiny(wp):
                raise EvaluationError(f"log of zero: {self.arg.render()}")
            return log_principal(z, wp)
        x = _real_part(z, wp, self.kind)
        if self.kind == "atan":
            return MPComplex(atan(x, wp), 0, wp)
        if x > 1 or x < -1:
            raise EvaluationError(f"acos argument outside [-1, 1]: {x}")
        return MPComplex(acos(x, wp), 0, wp)

    def render(self) -> str:
        if self.kind == "one":
            return "1"
        if self.kind == "pi_i":
            return "pi*i"
        return f"{self.kind}({self.arg.render()})"

    def __str__(self) -> str:
        return self.render()


def log(e) -> TransTerm:
    return TransTerm("log", as_expr(e))


def atan_term(e) -> TransTerm:
    return TransTerm("atan", as_expr(e))


def acos_term(e) -> TransTerm:
    return TransTerm("acos", as_expr(e))


@dataclass(frozen=True)
class LogFormula:
    """``prefactor * lhs_scale * 3F2(a, b, q; a+b, q+1; 1) = sum coeff_j * term_j``."""

    triple: HGTriple
    prefactor: AlgExpr
    rhs: tuple[tuple[AlgExpr, TransTerm], ...]
    lhs_scale: AlgExpr | None = None
    lhs_kind: str = "real"

    def lhs_factor(self, prec: int) -> MPComplex:
        e = self.prefactor if self.lhs_scale is None else Mul(self.prefactor, self.lhs_scale)
        return eval_alg(e, prec)

    def working_precision(self, prec: int) -> int:
        d = max([self.prefactor.depth()] + [c.depth() + (t.arg.depth() if t.arg else 0)
                                            for c, t in self.rhs])
        return prec + guard_bits(prec) + 4 * d + 8

    def render(self) -> str:
        t = self.triple
        lhs = f"{self.prefactor.render()}"
        if self.lhs_scale is not None:
            lhs += f" * [{self.lhs_scale.render()}]"
        lhs += f" * 3F2({t.a}, {t.b}, {t.q}; {t.a + t.b}, {t.q + 1}; 1)"
        parts = [f"({c.render()})*{term.render()}" for c, term in self.rhs]
        return lhs + " = " + " + ".join(parts)

    def to_dict(self) -> dict:
        t = self.triple
        return {
            "triple": {"a": str(t.a), "b": str(t.b), "q": str(t.q)},
            "prefactor": self.prefactor.render(),
            "lhs_scale": None if self.lhs_scale is None else self.lhs_scale.render(),
            "rhs": [{"coeff": c.render(), "kind": term.kind,
                     "arg": None if term.arg is None else term.arg.render()}
                    for c, term in self.rhs],
            "lhs_kind": self.lhs_kind,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogFormula":
        tr = d["triple"]
        rhs = []
        for item in d["rhs"]:
            arg = item.get("arg")
            rhs.append((parse(item["coeff"]),
                        TransTerm(item["kind"], None if arg is None else parse(arg))))
        scale = d.get("lhs_scale")
        return cls(HGTriple(tr["a"], tr["b"], tr["q"]), parse(d["prefactor"]), tuple(rhs),
                   None if scale is None else parse(scale), d.get("lhs_kind", "real"))


def eval_formula_rhs(f: LogFormula, prec: int) -> MPComplex:
    """``sum coeff_j * term_j`` with principal branches."""
    wp = f.working_precision(prec)
    acc = MPComplex(0, 0, wp)
    for coeff, term in f.rhs:
        acc = acc + coeff.ev(wp) * term.ev(wp)
    return acc.with_prec(prec)


def branch_margin(f: LogFormula, prec: int) -> MPReal | None:
    """Smallest distance ``pi - |arg z|`` over the log arguments of ``f``
    (None when there are no log terms)."""
    wp = f.working_precision(prec)
    best = None
    p = pi(wp)
    for _, term in f.rhs:
        if term.kind != "log":
            continue
        z = term.arg.ev(wp)
        if z.im.is_zero() and z.re.sign > 0:
            m = p
        else:
            m = p - abs(z.arg())
        best = m if best is None or m < best else best
    return None if best is None else best.with_prec(prec)

