"""Double-exponential (tanh-sinh) quadrature on [0, 1].

The integrand receives each abscissa together with its complement
``(u, 1-u)``, both computed without cancellation, so that functions with
endpoint singularities (``log(1-u)``, ``u**(-1/2)``) can be evaluated to
full relative accuracy right up to the ends of the interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .mpnum import MPReal, guard_bits, pi

Integrand = Callable[[MPReal, MPReal], MPReal]


class QuadratureError(ArithmeticError):
    def __init__(self, msg: str, result: "QuadResult") -> None:
        super().__init__(msg)
        self.result = result


@dataclass(frozen=True)
class QuadResult:
    value: MPReal
    error: MPReal
    levels: int
    nodes: int
    converged: bool

    @property
    def achieved_digits(self) -> float:
        if self.error.is_zero():
            return self.value.prec * math.log10(2)
        scale = max(1.0, abs(float(self.value)))
        return max(0.0, -math.log10(float(self.error) / scale))


def _node(x: MPReal, wp: int, pi_wp: MPReal) -> tuple[MPReal, MPReal, MPReal]:
    """Abscissa, complement and weight factor at ``x >= 0`` (right half)."""
    ex = x.exp()
    exi = 1 / ex
    sh = (ex - exi).shift(-1)
    ch = (ex + exi).shift(-1)
    e = (-(pi_wp * sh)).exp()
    u = 1 / (1 + e)
    v = e * u
    return u, v, pi_wp * ch * u * v


def tanh_sinh(f: Integrand, prec: int, *, max_level: int | None = None,
              min_level: int = 3, endpoint_exponent: float = 0.0) -> QuadResult:
    """Integrate ``f`` over [0, 1] to about ``prec`` bits.

    Step sizes ``h = 2^-m`` are refined level by level, reusing earlier
    abscissae. With the difference ``d_m`` of successive levels, the error
    of level ``m`` is estimated as ``d_m^2 / d_(m-1)`` (quadratic
    convergence), floored at ``d_m * 2^-(prec/4)`` and the rounding level.

    ``endpoint_exponent`` (``e < 1``) widens the abscissa range so that
    endpoint singularities as strong as ``u^-e`` are captured.
    """
    wp = prec + guard_bits(prec) + 10
    pi_wp = pi(wp)
    # beyond |x| = xmax the weights drop below 2^-wp
    reach = (wp + 20) / (1.0 - endpoint_exponent)
    xmax = math.asinh(reach * math.log(2) / math.pi) + 0.1
    if max_level is None:
        max_level = max(6, prec.bit_length() + 2)
    tol = MPReal(1, wp).shift(-prec - 2)

    total = MPReal(0, wp)
    nodes = 0
    prev = None
    prev_d = None
    result = None
    for level in range(0, max_level + 1):
        h_exp = level
        step = 1 if level == 0 else 2
        start = 0 if level == 0 else 1
        k = start
        while True:
            xf = k / 2**h_exp
            if xf > xmax:
                break
            x = MPReal(k, wp).shift(-h_exp)
            u, v, w = _node(x, wp, pi_wp)
            if k == 0:
                total = total + w * f(u, v)
                nodes += 1
            else:
                total = total + w * (f(u, v) + f(v, u))
                nodes += 2
            k += step
        s = total.shift(-level)
        if prev is not None:
            d = abs(s - prev)
            if prev_d is not None and not prev_d.is_zero() and not d.is_zero():
                est = d * d / prev_d
                floor = d.shift(-prec // 4)
                est = max(est, floor)
            else:
                est = d
            est = max(est, abs(s).shift(-wp + 8))
            result = QuadResult(s.with_prec(prec), est.with_prec(prec), level, nodes,
                                est <= tol * max(1, abs(s)))
            if level >= min_level and result.converged:
                return result
            prev_d = d
        prev = s
    assert result is not None
    return result
