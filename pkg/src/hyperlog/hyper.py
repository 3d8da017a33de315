"""Generalized hypergeometric series: direct summation, the Gauss value of
2F1 at 1, and the integral (Euler-transform) route to
3F2(a, b, q; a+b, q+1; 1).

Series with argument below 1 are summed in fixed-point integer arithmetic.
At argument exactly 1 the terms are exact rationals; the partial sums are
accelerated with Levin's u-transform carried out in exact arithmetic, so the
only error is the transformation's own truncation error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exact import RationalLike, as_rational
from .mpnum import (MPReal, PoleError, digamma, expm1, gamma, guard_bits,
                    log1p, mpreal, rgamma)
from .quad import QuadResult, QuadratureError, tanh_sinh


class DivergenceError(ValueError):
    """Series parameters for which the requested sum does not converge."""


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class HGSpec:
    """``pFq(upper; lower; argument)`` with rational parameters and a real
    argument in ``[0, 1]``."""

    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    argument: Fraction | MPReal = Fraction(1)

    def __init__(self, upper: Sequence[RationalLike], lower: Sequence[RationalLike],
                 argument: RationalLike | MPReal = 1) -> None:
        up = tuple(as_rational(a) for a in upper)
        lo = tuple(as_rational(b) for b in lower)
        if isinstance(argument, MPReal):
            x: Fraction | MPReal = argument
        else:
            x = as_rational(argument)
        for b in lo:
            if _is_nonpos_int(b):
                raise DivergenceError(f"lower parameter {b} is a non-positive integer")
        if x < 0 or x > 1:
            raise DivergenceError("argument must lie in [0, 1]")
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "argument", x)

    @property
    def excess(self) -> Fraction:
        return sum(self.lower, Fraction(0)) - sum(self.upper, Fraction(0))

    @property
    def at_one(self) -> bool:
        return self.argument == 1

    @property
    def terminating(self) -> bool:
        return any(_is_nonpos_int(a) for a in self.upper)


@dataclass(frozen=True)
class SeriesResult:
    value: MPReal
    raw: MPReal            # plain partial sum
    error: MPReal          # estimated error of ``value``
    terms: int
    accelerated: bool
    details: dict = field(default_factory=dict, compare=False)

    @property
    def achieved_digits(self) -> float:
        if self.error.is_zero():
            return self.value.prec * math.log10(2)
        return max(0.0, -math.log10(float(self.error) / max(1.0, abs(float(self.value)))))


# --------------------------------------------------------------------------
# fixed-point summation for arguments below 1

def _to_fixed(x: MPReal | Fraction, wp: int) -> int:
    if isinstance(x, Fraction):
        return (x.numerator << wp) // x.denominator
    f = x.to_fraction()
    return (f.numerator << wp) // f.denominator


def _tdiv(a: int, b: int) -> int:
    """Integer division rounding toward zero (floor division would leave
    negative terms stuck at -1)."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def _ratio_factors(upper: Sequence[Fraction], lower: Sequence[Fraction]):
    """Constants so that ``term(n+1)/term(n) = x * num(n) / den(n)``."""
    up = [(a.numerator, a.denominator) for a in upper]
    lo = [(b.numerator, b.denominator) for b in lower]
    num_scale = math.prod(d for _, d in lo)
    den_scale = math.prod(d for _, d in up)

    def num(n: int) -> int:
        r = num_scale
        for p, d in up:
            r *= p + n * d
        return r

    def den(n: int) -> int:
        r = den_scale * (n + 1)
        for p, d in lo:
            r *= p + n * d
        return r

    return num, den


def _fixed_series(upper, lower, x_fix: int, wp: int, moments: int = 0,
                  max_terms: int = 10**6) -> tuple[list[int], int]:
    """Sum ``sum_n n^(k) T_n`` (falling powers, k = 0..moments) in
    fixed point with ``wp`` fractional bits.

    Stops once the current ratio bound makes the geometric tail smaller
    than one unit."""
    num, den = _ratio_factors(upper, lower)
    one = 1 << wp
    T = one
    sums = [0] * (moments + 1)
    n = 0
    nparams = max([abs(float(a)) for a in list(upper) + list(lower)] + [1.0])
    while True:
        sums[0] += T
        if moments >= 1:
            sums[1] += n * T
        if moments >= 2:
            sums[2] += n * (n - 1) * T
        nu, de = num(n), den(n)
        if nu == 0:
            break
        T = _tdiv(T * x_fix * nu, de << wp)
        n += 1
        if n > nparams + 2:
            rho = (x_fix / one) * abs(nu / de)
            if rho < 1:
                # int/float comparison is exact, no overflow for huge T
                if abs(T) * (n + 1) ** moments < 1 - rho:
                    break
        if n > max_terms:
            raise DivergenceError("series did not converge within the term limit")
    return sums, n


def _sum_below_one(spec: HGSpec, prec: int) -> SeriesResult:
    x = spec.argument
    est_terms = 64 if (isinstance(x, Fraction) and x == 0) else prec * 4
    wp = prec + guard_bits(prec) + est_terms.bit_length() + 8
    (s,), n = _fixed_series(spec.upper, spec.lower, _to_fixed(x, wp), wp)
    v = MPReal(Fraction(s, 1 << wp), prec)
    err = MPReal(n + 2, prec).shift(-wp)
    return SeriesResult(v, v, err, n + 1, False)


# --------------------------------------------------------------------------
# argument 1: exact terms + Levin u-transform

def _exact_terms(upper, lower, count: int, start: Fraction = Fraction(1),
                 start_index: int = 0) -> list[Fraction]:
    out = []
    t = start
    n = start_index
    for _ in range(count):
        out.append(t)
        r = Fraction(1)
        for a in upper:
            r *= a + n
        for b in lower:
            r /= b + n
        t = t * r / (n + 1)
        n += 1
    return out


def levin_u(terms: Sequence[Fraction], k: int, beta: int = 1) -> Fraction:
    """Levin's u-transform of the series with the given terms, using the
    first ``k+1`` of them, evaluated exactly."""
    numer = Fraction(0)
    denom = Fraction(0)
    s = Fraction(0)
    for j in range(k + 1):
        s += terms[j]
        w = (beta + j) * terms[j]
        c = Fraction((-1) ** j * comb(k, j) * (beta + j) ** (k - 1))
        numer += c * s / w
        denom += c / w
    return numer / denom


def _sum_at_one(spec: HGSpec, prec: int, max_terms: int = 3000) -> SeriesResult:
    if spec.terminating:
        terms = []
        t = Fraction(1)
        for n in range(10**6):
            terms.append(t)
            r = Fraction(1)
            for a in spec.upper:
                r *= a + n
            if r == 0:
                break
            for b in spec.lower:
                r /= b + n
            t = t * r / (n + 1)
        v = MPReal(sum(terms, Fraction(0)), prec)
        return SeriesResult(v, v, MPReal(0, prec), len(terms), False)
    if spec.excess <= 0:
        raise DivergenceError(
            f"series at argument 1 diverges: parameter excess {spec.excess} <= 0")
    tol = Fraction(1, 2 ** (prec + 4))
    step = 10
    k = 20
    terms = _exact_terms(spec.upper, spec.lower, k + 1)
    prev = levin_u(terms, k - step)
    while True:
        cur = levin_u(terms, k)
        err = abs(cur - prev)
        if err <= tol * max(1, abs(cur)) or k + step > max_terms:
            break
        prev = cur
        more = _exact_terms(spec.upper, spec.lower, step, terms[-1] * _next_ratio(spec, len(terms) - 1),
                            start_index=len(terms))
        terms.extend(more)
        k += step
    raw = MPReal(sum(terms, Fraction(0)), prec)
    value = MPReal(cur, prec)
    # the rounded result carries at least a few ulps of error
    err_r = max(MPReal(err, prec), abs(value).shift(-prec + 2))
    return SeriesResult(value, raw, err_r, k + 1, True,
                        {"method": "levin-u", "k": k})


def _next_ratio(spec: HGSpec, n: int) -> Fraction:
    r = Fraction(1)
    for a in spec.upper:
        r *= a + n
    for b in spec.lower:
        r /= b + n
    return r / (n + 1)


def sum_series(spec: HGSpec, prec: int) -> SeriesResult:
    """Sum a hypergeometric series, returning value, raw partial sum and
    an error estimate."""
    if spec.at_one:
        return _sum_at_one(spec, prec)
    return _sum_below_one(spec, prec)


def phg_series(spec: HGSpec, prec: int) -> MPReal:
    return sum_series(spec, prec).value


def hyp2f1(a: RationalLike, b: RationalLike, c: RationalLike,
           x: RationalLike | MPReal, prec: int) -> MPReal:
    """2F1 on [0, 1]; the Gauss closed form at 1."""
    if not isinstance(x, MPReal) and as_rational(x) == 1:
        return gauss_sum(a, b, c, prec)
    return phg_series(HGSpec((a, b), (c,), x), prec)


def hyp3f2(upper: Sequence[RationalLike], lower: Sequence[RationalLike],
           x: RationalLike | MPReal, prec: int) -> MPReal:
    return phg_series(HGSpec(upper, lower, x), prec)


# --------------------------------------------------------------------------

def gauss_sum(a: RationalLike, b: RationalLike, c: RationalLike, prec: int) -> MPReal:
    """``2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))``."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if c - a - b <= 0:
        raise DivergenceError(f"Gauss sum needs c-a-b > 0, got {c - a - b}")
    if _is_nonpos_int(c):
        raise DivergenceError(f"lower parameter {c} is a non-positive integer")
    if a == 0 or b == 0:
        return MPReal(1, prec)
    wp = prec + guard_bits(prec)
    v = gamma(c, wp) * gamma(c - a - b, wp) * rgamma(c - a, wp) * rgamma(c - b, wp)
    return v.with_prec(prec)


# --------------------------------------------------------------------------
# 2F1(a, b; a+b; t) on [0, 1) and the integral route

@dataclass(frozen=True)
class _Balanced:
    """Evaluator for ``2F1(a, b; a+b; t)`` at working precision ``wp``."""

    a: Fraction
    b: Fraction
    wp: int
    G: MPReal          # Gamma(a+b) / (Gamma(a) Gamma(b))
    h0: int            # fixed point 2 psi(1) - psi(a) - psi(b)

    @classmethod
    def make(cls, a: Fraction, b: Fraction, wp: int) -> "_Balanced":
        if _is_nonpos_int(a) or _is_nonpos_int(b):
            return cls(a, b, wp, MPReal(0, wp), 0)
        G = gamma(a + b, wp) * rgamma(a, wp) * rgamma(b, wp)
        h0 = 2 * digamma(1, wp) - digamma(a, wp) - digamma(b, wp)
        return cls(a, b, wp, G, _to_fixed(h0, wp))

    @property
    def polynomial(self) -> bool:
        return _is_nonpos_int(self.a) or _is_nonpos_int(self.b)

    def series(self, t: MPReal) -> int:
        (s,), _ = _fixed_series((self.a, self.b), (self.a + self.b,), _to_fixed(t, self.wp), self.wp)
        return s

    def near_one(self, w: MPReal) -> int:
        """``sum c_n w^n (h_n - log w)`` times ``G``; valid for ``w < 1``."""
        wp = self.wp
        one = 1 << wp
        W = _to_fixed(w, wp)
        Lw = _to_fixed(w.log(), wp)
        an, ad = self.a.numerator, self.a.denominator
        bn, bd = self.b.numerator, self.b.denominator
        T = one
        h = self.h0
        SA = 0
        SB = 0
        n = 0
        while True:
            SA += (T * h) >> wp
            SB += T
            T = _tdiv(T * W * (an + n * ad) * (bn + n * bd), (ad * bd * (n + 1) ** 2) << wp)
            h += (2 * one) // (n + 1) - (one * ad) // (an + n * ad) - (one * bd) // (bn + n * bd)
            n += 1
            if T == 0:
                break
        s = SA - ((Lw * SB) >> wp)
        return _to_fixed(self.G * MPReal(Fraction(s, one), wp), wp)

    def __call__(self, t: MPReal, w: MPReal) -> MPReal:
        """Value at ``t`` with complement ``w = 1 - t`` given separately."""
        if self.polynomial or w.shift(1) >= 1:
            s = self.series(t)
        else:
            s = self.near_one(w)
        return MPReal(Fraction(s, 1 << self.wp), self.wp)


def hyp2f1_balanced(a: RationalLike, b: RationalLike, t: RationalLike | MPReal, prec: int) -> MPReal:
    """``2F1(a, b; a+b; t)`` for ``0 <= t < 1`` (logarithmic singularity at 1)."""
    a, b = as_rational(a), as_rational(b)
    wp = prec + guard_bits(prec) + 16
    tt = mpreal(t, wp) if isinstance(t, MPReal) else MPReal(as_rational(t), wp)
    if tt >= 1 or tt < 0:
        raise DivergenceError("argument must lie in [0, 1)")
    w = (1 - as_rational(t)) if not isinstance(t, MPReal) else None
    w = MPReal(w, wp) if w is not None else 1 - tt
    return _Balanced.make(a, b, wp)(tt, w).with_prec(prec)


def euler_transform_details(a: RationalLike, b: RationalLike, q: RationalLike,
                            prec: int) -> QuadResult:
    """``q * int_0^1 t^(q-1) 2F1(a, b; a+b; t) dt`` by tanh-sinh quadrature.

    The substitution ``u = t^q`` removes the ``t^(q-1)`` endpoint factor,
    leaving ``int_0^1 2F1(a, b; a+b; u^(1/q)) du`` whose only singularity is
    the logarithm at ``u = 1``."""
    a, b, q = as_rational(a), as_rational(b), as_rational(q)
    if q <= 0:
        raise DivergenceError("q must be positive")
    if _is_nonpos_int(a + b):
        raise DivergenceError("a+b is a non-positive integer")
    wp = prec + guard_bits(prec) + 16
    F = _Balanced.make(a, b, wp)
    inv_q = Fraction(1) / q

    def integrand(u: MPReal, v: MPReal) -> MPReal:
        if u.is_zero():
            return MPReal(1, wp)
        if v.is_zero():
            return MPReal(0, wp)
        if q == 1:
            t, w = u, v
        else:
            lt = (log1p(-v, wp) if v.shift(1) < 1 else u.log()) * inv_q
            t = lt.exp()
            w = -expm1(lt, wp)
        return F(t, w)

    return tanh_sinh(integrand, prec)


def euler_transform_3f2(a: RationalLike, b: RationalLike, q: RationalLike, prec: int) -> MPReal:
    """``3F2(a, b, q; a+b, q+1; 1)`` through its integral representation."""
    res = euler_transform_details(a, b, q, prec)
    if not res.converged:
        raise QuadratureError(
            f"quadrature did not converge; about {res.achieved_digits:.1f} digits achieved", res)
    return res.value


# --------------------------------------------------------------------------

def hg2f1_derivatives(a: RationalLike, b: RationalLike, c: RationalLike,
                      t0: RationalLike | MPReal, prec: int) -> tuple[MPReal, MPReal, MPReal]:
    """``u, u', u''`` of ``2F1(a, b; c; t)`` at ``t0`` by term-wise
    differentiated series."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    t = t0 if isinstance(t0, MPReal) else as_rational(t0)
    if not 0 < t < 1:
        raise DivergenceError("t0 must lie in (0, 1)")
    wp = prec + guard_bits(prec) + 24
    x_fix = _to_fixed(t, wp)
    (s0, s1, s2), _ = _fixed_series((a, b), (c,), x_fix, wp, moments=2)
    tv = t if isinstance(t, MPReal) else MPReal(t, wp)
    tv = tv.with_prec(wp)
    one = 1 << wp
    u = MPReal(Fraction(s0, one), wp)
    du = MPReal(Fraction(s1, one), wp) / tv
    d2u = MPReal(Fraction(s2, one), wp) / (tv * tv)
    return u.with_prec(prec), du.with_prec(prec), d2u.with_prec(prec)


def hg2f1_ode_residual(a: RationalLike, b: RationalLike, c: RationalLike,
                       t0: RationalLike | MPReal, prec: int) -> MPReal:
    """Residual of ``t(1-t)u'' + (c-(a+b+1)t)u' - ab u`` at ``t0`` for
    ``u = 2F1(a, b; c; t)``. For (1/6, 5/6, 1) this is the Picard-Fuchs
    operator ``(t-t^2)D^2 + (1-2t)D - 5/36`` of the Hesse-type family."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    wp = prec + guard_bits(prec)
    u, du, d2u = hg2f1_derivatives(a, b, c, t0, wp)
    t = t0 if isinstance(t0, MPReal) else MPReal(as_rational(t0), wp)
    t = t.with_prec(wp)
    r = t * (1 - t) * d2u + (c - (a + b + 1) * t) * du - a * b * u
    return r.with_prec(prec)
