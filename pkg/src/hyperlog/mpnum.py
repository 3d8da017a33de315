"""Arbitrary-precision real and complex numbers.

:class:`MPReal` wraps a raw binary floating value (the ``libmp`` tuple
format of mpmath) together with its precision in bits.  Precision travels
with the value; there is no global context.  Binary operations round to
the larger of the two input precisions.

The field operations and the elementary primitives ``exp``, ``log`` (of
positive reals), ``sqrt``, ``atan2`` and ``cos``/``sin`` come from
``mpmath.libmp``.  Everything built on top (pi, AGM, Gamma, digamma, the
principal complex logarithm, ``atan``/``acos``) lives here.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

from mpmath import libmp as L

RND = L.round_nearest

Number = Union["MPReal", int, Fraction]


class DomainError(ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Argument at a pole (Gamma at a non-positive integer)."""


def guard_bits(prec: int) -> int:
    """Internal extra bits carried by transcendental evaluations."""
    return max(10, prec // 10)


# --------------------------------------------------------------------------
# raw helpers on libmp tuples

def _mag(x) -> int:
    """Upper bound for log2|x| (``-inf`` surrogate for zero)."""
    if x == L.fzero:
        return -(10**9)
    return x[2] + x[3]


def _from_any(x, prec: int):
    if isinstance(x, MPReal):
        return x._v
    if isinstance(x, bool):
        raise TypeError("bool is not a number")
    if isinstance(x, int):
        return L.from_int(x, prec, RND)
    if isinstance(x, Fraction):
        return L.from_rational(x.numerator, x.denominator, prec, RND)
    if isinstance(x, float):
        return L.from_float(x, prec, RND)
    if isinstance(x, str):
        if "/" in x:
            f = Fraction(x)
            return L.from_rational(f.numerator, f.denominator, prec, RND)
        return L.from_str(x, prec, RND)
    raise TypeError(f"cannot convert {type(x).__name__} to MPReal")


@lru_cache(maxsize=64)
def _pi_raw(prec: int):
    """Gauss-Legendre iteration for pi at ``prec`` bits (pure, memoized)."""
    wp = prec + 20
    one = L.from_int(1)
    a = one
    b = L.mpf_sqrt(L.from_rational(1, 2, wp, RND), wp, RND)
    t = L.from_rational(1, 4, wp, RND)
    p = 0  # t -= 2^p (a - a')^2
    while True:
        an = L.mpf_shift(L.mpf_add(a, b, wp, RND), -1)
        b = L.mpf_sqrt(L.mpf_mul(a, b, wp, RND), wp, RND)
        d = L.mpf_sub(a, an, wp, RND)
        t = L.mpf_sub(t, L.mpf_shift(L.mpf_mul(d, d, wp, RND), p), wp, RND)
        p += 1
        a = an
        diff = L.mpf_sub(a, b, wp, RND)
        if diff == L.fzero or _mag(diff) < -wp // 2 - 4:
            break
    s = L.mpf_add(a, b, wp, RND)
    return L.mpf_div(L.mpf_mul(s, s, wp, RND), L.mpf_shift(t, 2), prec, RND)


def _agm_raw(a, b, prec: int):
    wp = prec + 10
    for _ in range(10 * wp.bit_length() + 50):
        an = L.mpf_shift(L.mpf_add(a, b, wp, RND), -1)
        bn = L.mpf_sqrt(L.mpf_mul(a, b, wp, RND), wp, RND)
        diff = L.mpf_sub(an, bn, wp, RND)
        a, b = an, bn
        if diff == L.fzero or _mag(diff) < _mag(a) - wp:
            break
    return L.mpf_pos(a, prec, RND)


def _log1p_raw(y, prec: int):
    """``log(1+y)`` keeping relative accuracy for tiny ``y``."""
    extra = max(0, -_mag(y)) + 10
    wp = prec + extra
    return L.mpf_log(L.mpf_add(L.fone, y, wp, RND), prec, RND)


def _expm1_raw(z, prec: int):
    """``exp(z)-1`` keeping relative accuracy for tiny ``z``."""
    extra = max(0, -_mag(z)) + 10
    wp = prec + extra
    return L.mpf_sub(L.mpf_exp(z, wp, RND), L.fone, prec, RND)


# --------------------------------------------------------------------------

class MPReal:
    """Immutable binary floating-point real at a fixed precision (bits)."""

    __slots__ = ("_v", "prec")

    def __init__(self, value, prec: int) -> None:
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        if isinstance(value, tuple):
            v = L.mpf_pos(value, prec, RND)
        else:
            v = _from_any(value, prec)
            v = L.mpf_pos(v, prec, RND)
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("MPReal is immutable")

    # -- constructors / conversions
    @classmethod
    def _raw(cls, v, prec: int) -> "MPReal":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_v", v)
        object.__setattr__(obj, "prec", prec)
        return obj

    @classmethod
    def from_decimal(cls, s: str, prec: int) -> "MPReal":
        return cls(L.from_str(s, prec, RND), prec)

    def to_decimal(self, digits: int) -> str:
        return L.to_str(self._v, digits)

    def with_prec(self, prec: int) -> "MPReal":
        return MPReal(self._v, prec)

    def to_fraction(self) -> Fraction:
        p, q = L.to_rational(self._v)
        return Fraction(int(p), int(q))

    def __float__(self) -> float:
        return L.to_float(self._v)

    def __int__(self) -> int:
        return int(L.to_int(self._v))

    @property
    def mag(self) -> int:
        """Upper bound on log2 of the absolute value."""
        return _mag(self._v)

    def is_zero(self) -> bool:
        return self._v == L.fzero

    @property
    def sign(self) -> int:
        return L.mpf_sign(self._v)

    # -- arithmetic
    def _other(self, o):
        if isinstance(o, MPReal):
            return o._v, max(self.prec, o.prec)
        if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
            return _from_any(o, self.prec + 20), self.prec
        return None, None

    def __add__(self, o):
        if isinstance(o, MPComplex):
            return NotImplemented
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        return MPReal._raw(L.mpf_add(self._v, v, p, RND), p)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, MPComplex):
            return NotImplemented
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        return MPReal._raw(L.mpf_sub(self._v, v, p, RND), p)

    def __rsub__(self, o):
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        return MPReal._raw(L.mpf_sub(v, self._v, p, RND), p)

    def __mul__(self, o):
        if isinstance(o, MPComplex):
            return NotImplemented
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        return MPReal._raw(L.mpf_mul(self._v, v, p, RND), p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, MPComplex):
            return NotImplemented
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        if v == L.fzero:
            raise ZeroDivisionError("MPReal division by zero")
        return MPReal._raw(L.mpf_div(self._v, v, p, RND), p)

    def __rtruediv__(self, o):
        v, p = self._other(o)
        if v is None:
            return NotImplemented
        if self._v == L.fzero:
            raise ZeroDivisionError("MPReal division by zero")
        return MPReal._raw(L.mpf_div(v, self._v, p, RND), p)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / self ** (-n)
        return MPReal._raw(L.mpf_pow_int(self._v, n, self.prec, RND), self.prec)

    def __neg__(self) -> "MPReal":
        return MPReal._raw(L.mpf_neg(self._v), self.prec)

    def __pos__(self) -> "MPReal":
        return self

    def __abs__(self) -> "MPReal":
        return MPReal._raw(L.mpf_abs(self._v), self.prec)

    def shift(self, n: int) -> "MPReal":
        """Multiply by ``2**n`` exactly."""
        return MPReal._raw(L.mpf_shift(self._v, n), self.prec)

    # -- comparison
    def _cmp(self, o) -> int:
        v, _ = self._other(o)
        if v is None:
            raise TypeError(f"cannot compare MPReal with {type(o).__name__}")
        return L.mpf_cmp(self._v, v)

    def __eq__(self, o):
        try:
            return self._cmp(o) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    def __hash__(self) -> int:
        return L.mpf_hash(self._v)

    # -- elementary functions
    def sqrt(self) -> "MPReal":
        if self.sign < 0:
            raise DomainError("sqrt of a negative real")
        return MPReal._raw(L.mpf_sqrt(self._v, self.prec, RND), self.prec)

    def exp(self) -> "MPReal":
        return MPReal._raw(L.mpf_exp(self._v, self.prec, RND), self.prec)

    def log(self) -> "MPReal":
        if self.sign <= 0:
            raise DomainError("log of a non-positive real; use log_principal")
        return MPReal._raw(L.mpf_log(self._v, self.prec, RND), self.prec)

    def __repr__(self) -> str:
        return f"MPReal('{self.to_decimal(max(5, int(self.prec * 0.30103)))}', prec={self.prec})"

    def __str__(self) -> str:
        return self.to_decimal(max(5, int(self.prec * 0.30103)))


def mpreal(x, prec: int) -> MPReal:
    return x.with_prec(prec) if isinstance(x, MPReal) else MPReal(x, prec)


class MPComplex:
    """Immutable complex number with :class:`MPReal` parts of equal precision."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0, prec: int | None = None) -> None:
        if prec is None:
            prec = max(getattr(re, "prec", 0), getattr(im, "prec", 0)) or 53
        object.__setattr__(self, "re", mpreal(re, prec))
        object.__setattr__(self, "im", mpreal(im, prec))

    def __setattr__(self, name, value):
        raise AttributeError("MPComplex is immutable")

    @classmethod
    def _pair(cls, re: MPReal, im: MPReal) -> "MPComplex":
        obj = object.__new__(cls)
        p = max(re.prec, im.prec)
        object.__setattr__(obj, "re", re if re.prec == p else re.with_prec(p))
        object.__setattr__(obj, "im", im if im.prec == p else im.with_prec(p))
        return obj

    @property
    def prec(self) -> int:
        return self.re.prec

    def with_prec(self, prec: int) -> "MPComplex":
        return MPComplex(self.re, self.im, prec)

    def _c(self, o) -> "MPComplex | None":
        if isinstance(o, MPComplex):
            return o
        if isinstance(o, MPReal):
            return MPComplex._pair(o, MPReal(0, o.prec))
        if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
            return MPComplex(o, 0, self.prec + 20)
        return None

    def __add__(self, o):
        c = self._c(o)
        if c is None:
            return NotImplemented
        return MPComplex._pair(self.re + c.re, self.im + c.im)

    __radd__ = __add__

    def __neg__(self) -> "MPComplex":
        return MPComplex._pair(-self.re, -self.im)

    def __sub__(self, o):
        c = self._c(o)
        if c is None:
            return NotImplemented
        return MPComplex._pair(self.re - c.re, self.im - c.im)

    def __rsub__(self, o):
        c = self._c(o)
        if c is None:
            return NotImplemented
        return c - self

    def __mul__(self, o):
        if isinstance(o, (MPReal, int, Fraction)) and not isinstance(o, bool):
            return MPComplex._pair(self.re * o, self.im * o)
        c = self._c(o)
        if c is None:
            return NotImplemented
        return MPComplex._pair(self.re * c.re - self.im * c.im,
                               self.re * c.im + self.im * c.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (MPReal, int, Fraction)) and not isinstance(o, bool):
            return MPComplex._pair(self.re / o, self.im / o)
        c = self._c(o)
        if c is None:
            return NotImplemented
        d = c.re * c.re + c.im * c.im
        if d.is_zero():
            raise ZeroDivisionError("MPComplex division by zero")
        return MPComplex._pair((self.re * c.re + self.im * c.im) / d,
                               (self.im * c.re - self.re * c.im) / d)

    def __rtruediv__(self, o):
        c = self._c(o)
        if c is None:
            return NotImplemented
        return c / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / self ** (-n)
        result = MPComplex(1, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, o):
        c = self._c(o)
        if c is None:
            return NotImplemented
        return self.re == c.re and self.im == c.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def conjugate(self) -> "MPComplex":
        return MPComplex._pair(self.re, -self.im)

    def __abs__(self) -> MPReal:
        p = self.prec
        return MPReal._raw(L.mpf_hypot(self.re._v, self.im._v, p, RND), p)

    def arg(self) -> MPReal:
        """Argument in ``(-pi, pi]``."""
        if self.re.is_zero() and self.im.is_zero():
            raise DomainError("arg of zero")
        p = self.prec
        return MPReal._raw(L.mpf_atan2(self.im._v, self.re._v, p, RND), p)

    def exp(self) -> "MPComplex":
        p = self.prec
        wp = p + guard_bits(p)
        r = L.mpf_exp(self.re._v, wp, RND)
        c, s = L.mpf_cos_sin(self.im._v, wp, RND)
        return MPComplex._pair(MPReal._raw(L.mpf_mul(r, c, p, RND), p),
                               MPReal._raw(L.mpf_mul(r, s, p, RND), p))

    def log(self) -> "MPComplex":
        return log_principal(self)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def to_decimal(self, digits: int) -> str:
        re = self.re.to_decimal(digits)
        im = self.im.to_decimal(digits)
        sep = "-" if im.startswith("-") else "+"
        return f"{re} {sep} {im.lstrip('-')}i"

    def __repr__(self) -> str:
        d = max(5, int(self.prec * 0.30103))
        return f"MPComplex('{self.to_decimal(d)}', prec={self.prec})"


def mpcomplex(x, prec: int) -> MPComplex:
    if isinstance(x, MPComplex):
        return x.with_prec(prec)
    if isinstance(x, complex):
        return MPComplex(x.real, x.imag, prec)
    return MPComplex(x, 0, prec)


# --------------------------------------------------------------------------
# constants and basic functions

def pi(prec: int) -> MPReal:
    return MPReal._raw(_pi_raw(prec), prec)


def agm(a, b, prec: int | None = None) -> MPReal:
    """Arithmetic-geometric mean of two positive reals."""
    if prec is None:
        prec = max(getattr(a, "prec", 53), getattr(b, "prec", 53))
    av, bv = _from_any(a, prec + 10), _from_any(b, prec + 10)
    if L.mpf_sign(av) <= 0 or L.mpf_sign(bv) <= 0:
        raise DomainError("agm requires positive arguments")
    return MPReal._raw(_agm_raw(av, bv, prec), prec)


def sqrt(x, prec: int | None = None):
    if isinstance(x, MPComplex):
        raise DomainError("complex sqrt is not provided; use zeta/log forms")
    prec = prec or getattr(x, "prec", 53)
    return mpreal(x, prec).sqrt()


def nth_root(x, n: int, prec: int | None = None) -> MPReal:
    """Positive real ``n``-th root of a positive real."""
    prec = prec or getattr(x, "prec", 53)
    v = mpreal(x, prec + 10)
    if v.sign <= 0:
        raise DomainError(f"root({n}, x) requires x > 0")
    if n < 1:
        raise DomainError("root order must be positive")
    return MPReal._raw(L.mpf_nthroot(v._v, n, prec, RND), prec)


def exp(x, prec: int | None = None):
    prec = prec or getattr(x, "prec", 53)
    if isinstance(x, MPComplex):
        return x.with_prec(prec).exp()
    return mpreal(x, prec).exp()


def log(x, prec: int | None = None) -> MPReal:
    prec = prec or getattr(x, "prec", 53)
    return mpreal(x, prec).log()


def log1p(x, prec: int | None = None) -> MPReal:
    prec = prec or getattr(x, "prec", 53)
    v = mpreal(x, prec)
    if v <= -1:
        raise DomainError("log1p requires x > -1")
    return MPReal._raw(_log1p_raw(v._v, prec), prec)


def expm1(x, prec: int | None = None) -> MPReal:
    prec = prec or getattr(x, "prec", 53)
    return MPReal._raw(_expm1_raw(mpreal(x, prec)._v, prec), prec)


def cos_sin(x, prec: int | None = None, *, times_pi: bool = False) -> tuple[MPReal, MPReal]:
    """``(cos x, sin x)``, or of ``pi*x`` when ``times_pi``."""
    prec = prec or getattr(x, "prec", 53)
    v = _from_any(x, prec + 20)
    c, s = L.mpf_cos_sin(v, prec, RND, 0, times_pi)
    return MPReal._raw(c, prec), MPReal._raw(s, prec)


def log_principal(z, prec: int | None = None) -> MPComplex:
    """Principal logarithm ``log|z| + i arg z`` with ``-pi < arg z <= pi``."""
    prec = prec or getattr(z, "prec", 53)
    z = mpcomplex(z, prec)
    if z.is_zero():
        raise DomainError("log of zero")
    wp = prec + guard_bits(prec)
    re, im = z.re._v, z.im._v
    if im == L.fzero and L.mpf_sign(re) > 0:
        lr = L.mpf_log(re, prec, RND)
    else:
        m = L.mpf_hypot(re, im, wp + 10, RND)
        lr = L.mpf_log(m, prec, RND)
    arg = L.mpf_atan2(im, re, prec, RND)
    return MPComplex._pair(MPReal._raw(lr, prec), MPReal._raw(arg, prec))


def atan(x, prec: int | None = None) -> MPReal:
    """Principal arctangent, ``Im log(1 + i x)``."""
    prec = prec or getattr(x, "prec", 53)
    wp = prec + guard_bits(prec)
    z = MPComplex(1, mpreal(x, wp), wp)
    return log_principal(z, wp).im.with_prec(prec)


def asin(x, prec: int | None = None) -> MPReal:
    """Principal arcsine in ``[-pi/2, pi/2]``."""
    prec = prec or getattr(x, "prec", 53)
    wp = prec + guard_bits(prec)
    v = mpreal(x, wp)
    if v > 1 or v < -1:
        raise DomainError("asin requires -1 <= x <= 1")
    c = ((1 - v) * (1 + v)).sqrt()
    return log_principal(MPComplex._pair(c, v), wp).im.with_prec(prec)


def acos(x, prec: int | None = None) -> MPReal:
    """Principal arccosine, ``-i log(x + i sqrt(1-x^2))`` in ``[0, pi]``."""
    prec = prec or getattr(x, "prec", 53)
    wp = prec + guard_bits(prec)
    v = mpreal(x, wp)
    if v > 1 or v < -1:
        raise DomainError("acos requires -1 <= x <= 1")
    s = ((1 - v) * (1 + v)).sqrt()
    return log_principal(MPComplex._pair(v, s), wp).im.with_prec(prec)


# --------------------------------------------------------------------------
# Bernoulli numbers, Gamma and digamma

@lru_cache(maxsize=None)
def _bernoulli_even(n: int) -> tuple[Fraction, ...]:
    """``(B_2, B_4, ..., B_2n)`` exactly."""
    B = [Fraction(1)]
    m = 2 * n
    for k in range(1, m + 1):
        s = Fraction(0)
        c = 1  # binomial(k+1, j)
        for j in range(k):
            s += c * B[j]
            c = c * (k + 1 - j) // (j + 1)
        B.append(-s / (k + 1))
    return tuple(B[2 * k] for k in range(1, n + 1))


def bernoulli_even(n: int) -> tuple[Fraction, ...]:
    return _bernoulli_even(max(n, 1))[:n]


def _is_nonpos_int(x) -> bool:
    if isinstance(x, MPComplex):
        if not x.im.is_zero():
            return False
        x = x.re
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    if isinstance(x, int):
        return x <= 0
    f = x.to_fraction()
    return f.denominator == 1 and f <= 0


def _stirling_shift(wp: int) -> int:
    # minimal asymptotic term ~ exp(-2 pi z) must drop below 2^-wp
    return int(0.25 * wp) + 10


def _loggamma_asym(z, wp: int):
    """Stirling series for ``log Gamma(z)``, ``Re z`` large; ``z`` MPReal or
    MPComplex at ``wp`` bits. Terms are added until one drops below
    ``2^-wp``; for the shifted argument the remainder is bounded by the
    first omitted term."""
    half_log_2pi = ((pi(wp) * 2).log()).shift(-1)
    lz = z.log() if isinstance(z, MPComplex) else z.log()
    acc = (z - Fraction(1, 2)) * lz - z + half_log_2pi
    zinv = 1 / z
    z2 = zinv * zinv
    zpow = zinv
    nmax = 8
    k = 1
    while True:
        bs = bernoulli_even(nmax)
        while k <= nmax:
            b = bs[k - 1]
            term = zpow * Fraction(b.numerator, b.denominator * (2 * k) * (2 * k - 1))
            acc = acc + term
            mag = abs(term).mag
            if mag < -wp - 4:
                return acc
            zpow = zpow * z2
            k += 1
        nmax *= 2
        if nmax > 4 * wp:
            raise ArithmeticError("Stirling series failed to converge")


def gamma(x, prec: int | None = None):
    """Gamma function for real or complex arguments.

    Real arguments below 1/2 use the reflection formula; otherwise the
    argument is shifted up to ``Re z >= 0.12 prec`` and the Stirling series
    is applied. Relative error is below ``2^(-prec+4)``."""
    prec = prec or getattr(x, "prec", 53)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    wp = prec + guard_bits(prec) + 10
    if isinstance(x, MPComplex) or isinstance(x, complex):
        z = mpcomplex(x, wp)
        return _gamma_complex(z, wp).with_prec(prec)
    z = mpreal(x, wp)
    return _gamma_real(z, wp).with_prec(prec)


def _gamma_real(z: MPReal, wp: int) -> MPReal:
    if z < Fraction(1, 2):
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        _, s = cos_sin(z, wp, times_pi=True)
        if s.is_zero():
            raise PoleError("Gamma pole")
        return pi(wp) / (s * _gamma_real(1 - z, wp))
    target = _stirling_shift(wp)
    n = max(0, target - int(z))
    w = wp + 12 + (target + n).bit_length() * 2
    zz = z.with_prec(w)
    prod = MPReal(1, w)
    for j in range(n):
        prod = prod * (zz + j)
    lg = _loggamma_asym(zz + n, w)
    return (lg.exp() / prod).with_prec(wp)


def _gamma_complex(z: MPComplex, wp: int) -> MPComplex:
    if z.re < Fraction(1, 2):
        s = _sin_pi_complex(z, wp)
        if s.is_zero():
            raise PoleError("Gamma pole")
        return MPComplex(pi(wp), 0, wp) / (s * _gamma_complex(1 - z, wp))
    target = _stirling_shift(wp)
    n = max(0, target - int(z.re))
    w = wp + 12 + (target + n).bit_length() * 2 + max(0, abs(z.im).mag)
    zz = z.with_prec(w)
    prod = MPComplex(1, 0, w)
    for j in range(n):
        prod = prod * (zz + j)
    lg = _loggamma_asym(zz + n, w)
    return (lg.exp() / prod).with_prec(wp)


def _sin_pi_complex(z: MPComplex, wp: int) -> MPComplex:
    # sin(pi(x+iy)) = sin(pi x) cosh(pi y) + i cos(pi x) sinh(pi y)
    c, s = cos_sin(z.re, wp, times_pi=True)
    py = z.im * pi(wp)
    e = py.exp()
    ei = 1 / e
    ch = (e + ei).shift(-1)
    sh = (e - ei).shift(-1)
    return MPComplex._pair(s * ch, c * sh)


def rgamma(x, prec: int | None = None) -> MPReal:
    """``1/Gamma(x)``; zero at the poles."""
    prec = prec or getattr(x, "prec", 53)
    if _is_nonpos_int(x):
        return MPReal(0, prec)
    return 1 / gamma(x, prec)


def digamma(x, prec: int | None = None) -> MPReal:
    """Digamma function of a real argument (shift + asymptotic series,
    reflection below 1/2)."""
    prec = prec or getattr(x, "prec", 53)
    if _is_nonpos_int(x):
        raise PoleError(f"digamma has a pole at {x}")
    wp = prec + guard_bits(prec) + 10
    return _digamma_real(mpreal(x, wp), wp).with_prec(prec)


def _digamma_real(z: MPReal, wp: int) -> MPReal:
    if z < Fraction(1, 2):
        # psi(1-z) - psi(z) = pi cot(pi z)
        c, s = cos_sin(z, wp, times_pi=True)
        return _digamma_real(1 - z, wp) - pi(wp) * c / s
    target = _stirling_shift(wp)
    n = max(0, target - int(z))
    acc = MPReal(0, wp)
    for j in range(n):
        acc = acc - 1 / (z + j)
    zz = z + n
    acc = acc + zz.log() - (1 / zz).shift(-1)
    zinv2 = 1 / (zz * zz)
    zpow = zinv2
    nmax = 8
    k = 1
    while True:
        bs = bernoulli_even(nmax)
        while k <= nmax:
            b = bs[k - 1]
            term = zpow * Fraction(b.numerator, b.denominator * 2 * k)
            acc = acc - term
            if abs(term).mag < -wp - 4:
                return acc
            zpow = zpow * zinv2
            k += 1
        nmax *= 2
        if nmax > 4 * wp:
            raise ArithmeticError("digamma series failed to converge")
