"""Exact rational arithmetic: fractional parts, the fractional-part
eligibility condition for 3F2(a, b, q; a+b, q+1; 1), and univariate
rational functions with rational coefficients.

Rationals are plain :class:`fractions.Fraction` values; they already parse
from and render to the ``"p/q"`` / ``"p"`` string forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class PreconditionError(ValueError):
    """A parameter set violates the hypotheses of an operation."""


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            # no floating intermediates
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot make a rational from {type(x).__name__}")


def render(x: Fraction) -> str:
    return str(x)


def frac(x: RationalLike) -> Fraction:
    """Fractional part ``x - floor(x)``, always in ``[0, 1)``."""
    x = as_rational(x)
    return x - (x.numerator // x.denominator)


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


@dataclass(frozen=True)
class HGTriple:
    """Parameters (a, b, q) of 3F2(a, b, q; a+b, q+1; 1)."""

    a: Fraction
    b: Fraction
    q: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "q"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        for name in ("a", "b", "q"):
            if _is_int(getattr(self, name)):
                raise PreconditionError(f"{name} is an integer ({getattr(self, name)})")
        a, b, q = self.a, self.b, self.q
        for label, v in (("q-a", q - a), ("q-b", q - b), ("q-a-b", q - a - b)):
            if _is_int(v):
                raise PreconditionError(f"{label} is an integer ({v})")

    @property
    def denominator_lcm(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator, self.q.denominator)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.q})"


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witnesses: list[tuple[int, Fraction]]


def fractional_sum(t: HGTriple, s: int) -> Fraction:
    a, b, q = t.a, t.b, t.q
    return frac(s * q) + frac(s * (a - q)) + frac(s * (b - q)) + frac(s * (q - a - b))


def condition_holds(t: HGTriple) -> ConditionResult:
    """Check ``{sq}+{s(a-q)}+{s(b-q)}+{s(q-a-b)} = 2`` for every residue
    ``s`` coprime to the lcm ``L`` of the denominators, over one period
    ``[1, L)``."""
    L = t.denominator_lcm
    witnesses = [(s, fractional_sum(t, s)) for s in range(1, L) if math.gcd(s, L) == 1]
    return ConditionResult(all(v == 2 for _, v in witnesses), witnesses)


def eligible_q_values(a: RationalLike, b: RationalLike, max_denominator: int) -> list[Fraction]:
    """All reduced ``q`` in ``(0, 1)`` with denominator at most
    ``max_denominator`` for which the condition holds. Ordered by
    denominator, then numerator."""
    a, b = as_rational(a), as_rational(b)
    if _is_int(a) or _is_int(b):
        raise PreconditionError("a and b must be non-integers")
    out = []
    for den in range(2, max_denominator + 1):
        for num in range(1, den):
            if math.gcd(num, den) != 1:
                continue
            try:
                t = HGTriple(a, b, Fraction(num, den))
            except PreconditionError:
                continue
            if condition_holds(t).holds:
                out.append(t.q)
    return out


@dataclass(frozen=True)
class EPart:
    dimension: int
    log_case: bool


def e_part_eligibility(l: int, d: int) -> EPart:
    """Dimension of the e-part of the fibration ``y^2 = 2x^3-3x^2+t^l``
    for a projector whose kernel has order ``d``, and whether it falls in
    the log case ``2 <= l/d <= 5``."""
    if d < 1 or l < 1 or l % d:
        raise PreconditionError(f"d={d} does not divide l={l}")
    r = l // d
    return EPart(0 if r in (1, 6) else 1, 2 <= r <= 5)


# --------------------------------------------------------------------------
# polynomials and rational functions over Q

def _trim(c: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial, coefficients in increasing degree."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence[RationalLike] = ()) -> None:
        object.__setattr__(self, "coeffs", _trim(as_rational(c) for c in coeffs))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c: RationalLike) -> "Polynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for zero

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(other)

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        while len(rem) - 1 >= other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            f = rem[-1] / other.lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            rem = list(_trim(rem))
        return Polynomial(q), Polynomial(rem)

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        return Polynomial([c / self.lead for c in self.coeffs]) if self.coeffs else self

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mon and c == 1:
                parts.append(mon)
            elif mon and c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}" + ("*" + mon if mon else ""))
        return " + ".join(parts).replace("+ -", "- ")


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


@dataclass(frozen=True)
class RationalFunction:
    """``num/den`` reduced by gcd, with monic denominator."""

    num: Polynomial
    den: Polynomial

    def __init__(self, num, den=None) -> None:
        num = num if isinstance(num, Polynomial) else Polynomial.const(num)
        den = Polynomial.const(1) if den is None else (
            den if isinstance(den, Polynomial) else Polynomial.const(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial.const(1)
        else:
            g = poly_gcd(num, den)
            num, den = num.divmod(g)[0], den.divmod(g)[0]
            lc = den.lead
            num = Polynomial([c / lc for c in num.coeffs])
            den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(Polynomial.x())

    def _coerce(self, o) -> "RationalFunction":
        if isinstance(o, RationalFunction):
            return o
        if isinstance(o, Polynomial):
            return RationalFunction(o)
        return RationalFunction(Polynomial.const(o))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, o) -> "RationalFunction":
        o = self._coerce(o)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, o) -> "RationalFunction":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "RationalFunction":
        return self._coerce(o) - self

    def __mul__(self, o) -> "RationalFunction":
        o = self._coerce(o)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o) -> "RationalFunction":
        o = self._coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o) -> "RationalFunction":
        return self._coerce(o) / self

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"
