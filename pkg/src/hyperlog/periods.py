"""Periods of the elliptic family ``y^2 = 2x^3 - 3x^2 + t^2``.

Covers the Gauss-Manin connection on the basis ``(dx/y, x dx/y)`` and the
second-order Picard-Fuchs operator obtained from it, the real roots of the
cubic, periods over the two vanishing cycles (AGM, with a quadrature
oracle), and the thimble integrals over ``t in [0, 1]``.

All periods are returned as positive reals (moduli); cycle orientation and
the factor ``i`` on the cycle vanishing at ``t = 1`` are dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import Polynomial, RationalFunction, RationalLike, as_rational
from .mpnum import MPReal, agm, asin, cos_sin, guard_bits, mpreal, pi
from .quad import QuadResult, QuadratureError, tanh_sinh

CYCLES = {
    "vanishing-at-1": "vanishing-at-1",
    "v1": "vanishing-at-1",
    "delta": "vanishing-at-1",
    "vanishing-at-0": "vanishing-at-0",
    "v0": "vanishing-at-0",
    "gamma": "vanishing-at-0",
}


class EliminationError(ArithmeticError):
    """The connection matrix does not yield a second-order equation."""


class RootCollisionError(ValueError):
    """Parameter at (or numerically indistinguishable from) a degenerate fiber."""


@dataclass(frozen=True)
class ConnectionMatrix:
    """``(nabla w1, nabla w2) = (w1, w2) A dt0``; entries are the
    coefficients of ``dt0``."""

    entries: tuple[tuple[RationalFunction, RationalFunction],
                   tuple[RationalFunction, RationalFunction]]
    basis: tuple[str, str] = ("dx/y", "x*dx/y")

    def scaled(self, c: RationalLike) -> "ConnectionMatrix":
        c = as_rational(c)
        return ConnectionMatrix(tuple(tuple(e * c for e in row) for row in self.entries),
                                self.basis)

    def __getitem__(self, ij: tuple[int, int]) -> RationalFunction:
        i, j = ij
        return self.entries[i][j]


def hesse_connection_matrix() -> ConnectionMatrix:
    """The Gauss-Manin connection of ``y^2 = 2x^3 - 3x^2 + t0``:
    ``A = 1/(6(t0 - t0^2)) [[t0, t0], [-1, -t0]]``."""
    t = RationalFunction.t()
    pref = 1 / (6 * (t - t * t))
    return ConnectionMatrix(((pref * t, pref * t), (pref * -1, pref * -t)))


def derive_picard_fuchs(A: ConnectionMatrix) -> tuple[RationalFunction, RationalFunction, RationalFunction]:
    """Coefficients ``(p2, p1, p0)`` of ``p2 u'' + p1 u' + p0 u = 0`` for the
    periods of the first basis form, with ``p2 = t0 - t0^2``.

    With ``D w1 = A11 w1 + A21 w2`` and ``D w2 = A12 w1 + A22 w2``, ``w2`` is
    eliminated between ``D w1`` and ``D^2 w1``."""
    a11, a12 = A[0, 0], A[0, 1]
    a21, a22 = A[1, 0], A[1, 1]
    if a21.is_zero():
        raise EliminationError("w1 and D(w1) are linearly dependent (A21 = 0)")
    # D^2 w1 = P w1 + Q w2
    P = a11.derivative() + a11 * a11 + a21 * a12
    Q = a11 * a21 + a21.derivative() + a21 * a22
    # D^2 w1 - (Q/A21) D w1 - (P - Q A11 / A21) w1 = 0
    c1 = -(Q / a21)
    c0 = -(P - Q * a11 / a21)
    t = RationalFunction.t()
    p2 = t - t * t
    return p2, p2 * c1, p2 * c0


# --------------------------------------------------------------------------
# roots of 2x^3 - 3x^2 + t^2

@dataclass(frozen=True)
class _Gaps:
    phi0: MPReal     # (2/3) asin t
    psi: MPReal      # pi/3 - phi0 = (2/3) acos t
    gamma_alpha: MPReal
    beta_alpha: MPReal
    gamma_beta: MPReal


def _gaps(t: MPReal, one_minus_t: MPReal, wp: int) -> _Gaps:
    """Root configuration from Viete's form ``x = 1/2 + cos(phi)``,
    ``phi in {phi0, phi0 + 2pi/3, phi0 + 4pi/3}``, ``phi0 = (2/3) asin t``.

    The gaps are ``sqrt3 sin(pi/3 + phi0)``, ``sqrt3 sin(phi0)`` and
    ``sqrt3 sin(psi)``; taking ``phi0`` from ``t`` near 0 and ``psi`` from
    ``1 - t`` near 1 keeps each gap accurate to full relative precision when
    two roots collide."""
    third_pi = pi(wp) / 3
    if t.shift(1) <= 1:
        phi0 = asin(t, wp) * Fraction(2, 3)
        psi = third_pi - phi0
    else:
        # acos t = 2 asin(sqrt((1-t)/2))
        psi = asin(one_minus_t.shift(-1).sqrt(), wp) * Fraction(4, 3)
        phi0 = third_pi - psi
    s3 = MPReal(3, wp).sqrt()
    _, s_phi = cos_sin(phi0, wp)
    _, s_psi = cos_sin(psi, wp)
    _, s_mid = cos_sin(third_pi + phi0, wp)
    return _Gaps(phi0, psi, s3 * s_mid, s3 * s_phi, s3 * s_psi)


def _parse_t(t, prec: int) -> tuple[MPReal, MPReal]:
    wp = prec + guard_bits(prec)
    if isinstance(t, MPReal):
        tv = t.with_prec(max(wp, t.prec))
        return tv, 1 - tv
    q = as_rational(t)
    return MPReal(q, wp), MPReal(1 - q, wp)


def cubic_roots(t: RationalLike | MPReal, prec: int) -> tuple[MPReal, MPReal, MPReal]:
    """Real roots ``alpha < beta < gamma`` of ``2x^3 - 3x^2 + t^2`` for
    ``0 < t < 1``."""
    tv, w = _parse_t(t, prec)
    if not (0 < tv < 1):
        raise RootCollisionError("t must lie strictly inside (0, 1)")
    wp = tv.prec
    g = _gaps(tv, w, wp)
    twothirds_pi = pi(wp) * Fraction(2, 3)
    half = Fraction(1, 2)
    c0, _ = cos_sin(g.phi0, wp)
    c1, _ = cos_sin(g.phi0 + twothirds_pi, wp)
    gamma_root = c0 + half
    alpha = c1 + half
    beta = gamma_root - g.gamma_beta
    return alpha.with_prec(prec), beta.with_prec(prec), gamma_root.with_prec(prec)


@dataclass(frozen=True)
class PeriodSpec:
    t: Fraction | MPReal
    cycle: str = "vanishing-at-1"

    def __init__(self, t, cycle: str = "vanishing-at-1") -> None:
        if cycle not in CYCLES:
            raise ValueError(f"unknown cycle {cycle!r}; use one of {sorted(CYCLES)}")
        tv = t if isinstance(t, MPReal) else as_rational(t)
        if not (0 < tv < 1):
            raise RootCollisionError("t must lie strictly inside (0, 1)")
        object.__setattr__(self, "t", tv)
        object.__setattr__(self, "cycle", CYCLES[cycle])


def _period_from_gaps(g: _Gaps, cycle: str, wp: int) -> MPReal:
    two = MPReal(2, wp)
    if cycle == "vanishing-at-1":
        m = agm(g.gamma_alpha.sqrt(), g.beta_alpha.sqrt(), wp)
    else:
        m = agm(g.gamma_alpha.sqrt(), g.gamma_beta.sqrt(), wp)
    return two.sqrt() * pi(wp) / m


def real_period(spec: PeriodSpec, prec: int) -> MPReal:
    """``|int dx/y|`` over the chosen vanishing cycle via the AGM.

    Over ``[beta, gamma]`` (vanishing at ``t = 1``) this is
    ``sqrt2 pi / agm(sqrt(gamma-alpha), sqrt(beta-alpha))``; over
    ``[alpha, beta]`` (vanishing at ``t = 0``)
    ``sqrt2 pi / agm(sqrt(gamma-alpha), sqrt(gamma-beta))``."""
    tv, w = _parse_t(spec.t, prec)
    wp = tv.prec
    return _period_from_gaps(_gaps(tv, w, wp), spec.cycle, wp).with_prec(prec)


def period_by_quadrature(spec: PeriodSpec, prec: int) -> QuadResult:
    """The same period as a direct tanh-sinh integral of ``2 dx/|y|``
    between the two roots (independent of the AGM)."""
    tv, w = _parse_t(spec.t, prec)
    wp = tv.prec
    g = _gaps(tv, w, wp)
    if spec.cycle == "vanishing-at-1":
        # x = beta + (gamma - beta) u:  x - alpha = (beta - alpha) + (gamma - beta) u
        def f(u, v):
            if u.is_zero() or v.is_zero():
                return MPReal(0, wp)
            return 2 / ((g.beta_alpha + g.gamma_beta * u) * u * v * 2).sqrt()
    else:
        # x = alpha + (beta - alpha) u:  gamma - x = (gamma - alpha) - (beta - alpha) u
        def f(u, v):
            if u.is_zero() or v.is_zero():
                return MPReal(0, wp)
            return 2 / ((g.gamma_alpha - g.beta_alpha * u) * u * v * 2).sqrt()
    return tanh_sinh(f, prec, endpoint_exponent=0.5)


def thimble_integral(cycle: str, prec: int,
                     period: Callable[[MPReal, MPReal], MPReal] | None = None) -> QuadResult:
    """``int_0^1 |int_{cycle_t} dx/y| dt`` by tanh-sinh quadrature over ``t``.

    ``period(t, 1-t)`` replaces the period function when given (used to
    check the quadrature on known integrands)."""
    cyc = CYCLES[cycle]
    wp = prec + guard_bits(prec) + 10

    def default(t: MPReal, w: MPReal) -> MPReal:
        return _period_from_gaps(_gaps(t, w, wp), cyc, wp)

    f = period or default

    def integrand(u: MPReal, v: MPReal) -> MPReal:
        if u.is_zero() or v.is_zero():
            return MPReal(0, wp)
        return f(u.with_prec(wp), v.with_prec(wp))

    res = tanh_sinh(integrand, prec)
    if not res.converged:
        raise QuadratureError(
            f"thimble quadrature did not converge ({res.achieved_digits:.1f} digits)", res)
    return res


def hypergeometric_period(spec: PeriodSpec, prec: int) -> MPReal:
    """``(2 pi / sqrt3) 2F1(1/6, 5/6; 1; z)`` with ``z = 1 - t^2`` for the
    cycle vanishing at 1 and ``z = t^2`` for the cycle vanishing at 0."""
    from .hyper import hyp2f1

    wp = prec + guard_bits(prec)
    t = spec.t
    if isinstance(t, MPReal):
        t2 = t.with_prec(wp) * t.with_prec(wp)
        z = 1 - t2 if spec.cycle == "vanishing-at-1" else t2
    else:
        z = 1 - t * t if spec.cycle == "vanishing-at-1" else t * t
    f = hyp2f1(Fraction(1, 6), Fraction(5, 6), 1, z, wp)
    return (pi(wp) * 2 / MPReal(3, wp).sqrt() * f).with_prec(prec)


# --------------------------------------------------------------------------
# the degeneration t -> 1

def _at_one_minus_s(p: Polynomial) -> list[Fraction]:
    """Coefficients in ``s`` of ``p(1 - s)``."""
    base = Polynomial((1, -1))
    acc = Polynomial()
    power = Polynomial.const(1)
    for c in p.coeffs:
        acc = acc + power * c
        power = power * base
    return list(acc.coeffs)


def degeneration_series(pf: tuple[RationalFunction, RationalFunction, RationalFunction],
                        n_terms: int) -> list[Fraction]:
    """Taylor coefficients in ``s = 1 - t0`` of the solution of
    ``p2 u'' + p1 u' + p0 u = 0`` that is analytic at ``t0 = 1`` with
    ``u(1) = 1`` (exponent 0 of a regular singular point)."""
    p2, p1, p0 = pf
    common = RationalFunction(p2.den * p1.den * p0.den)
    # d/dt0 = -d/ds flips the sign of the first-order coefficient
    a = _at_one_minus_s((p2 * common).num)
    b = [-c for c in _at_one_minus_s((p1 * common).num)]
    d = _at_one_minus_s((p0 * common).num)

    def coef(seq, k):
        return seq[k] if k < len(seq) else Fraction(0)

    if coef(a, 0) != 0:
        raise EliminationError("t0 = 1 is not a singular point of the operator")
    a1, b0 = coef(a, 1), coef(b, 0)
    if a1 == 0:
        raise EliminationError("t0 = 1 is not a regular singular point")
    c = [Fraction(1)]
    for m in range(n_terms - 1):
        rest = Fraction(0)
        for k in range(2, len(a)):
            i = m - k + 2
            if i >= 0:
                rest += a[k] * i * (i - 1) * c[i]
        for k in range(1, len(b)):
            i = m - k + 1
            if i >= 0:
                rest += b[k] * i * c[i]
        for k in range(len(d)):
            i = m - k
            if i >= 0:
                rest += d[k] * c[i]
        lead = (m + 1) * (a1 * m + b[0] if b else a1 * m)
        if lead == 0:
            raise EliminationError("resonant exponents: no analytic solution of this form")
        c.append(-rest / lead)
    return c


@dataclass(frozen=True)
class LimitEstimate:
    value: MPReal               # mean of the normalized samples
    estimates: tuple[MPReal, ...]
    spread: MPReal              # max deviation between the samples
    polynomial: MPReal          # plain Lagrange extrapolation of the raw periods in s


def limit_at_degeneration(ts, prec: int) -> LimitEstimate:
    """Extrapolate the period over the cycle vanishing at ``t = 1`` to ``t = 1``.

    Near ``t0 = t^2 = 1`` the period is ``K phi(1 - t0)`` with ``phi`` the
    analytic Frobenius solution of the derived Picard-Fuchs operator, so
    each sample gives ``K = period(t) / phi(1 - t^2)``. The plain
    polynomial extrapolation in ``s = 1 - t^2`` is reported alongside."""
    wp = prec + guard_bits(prec) + 10
    pf = derive_picard_fuchs(hesse_connection_matrix())
    ss, raw, est = [], [], []
    for t in ts:
        tq = as_rational(t)
        s = 1 - tq * tq
        if not 0 < s < 1:
            raise RootCollisionError("sample points must lie in (0, 1)")
        per = real_period(PeriodSpec(tq, "vanishing-at-1"), wp)
        n = int(wp / -math.log2(float(s))) + 12
        coeffs = degeneration_series(pf, n)
        acc = 0
        for cf in reversed(coeffs):
            acc = acc * s + cf
        ss.append(s)
        raw.append(per)
        est.append(per / MPReal(acc, wp))
    mean = sum(est[1:], est[0]) / len(est)
    spread = max(abs(e - mean) for e in est)
    # Lagrange interpolation evaluated at s = 0
    poly = MPReal(0, wp)
    for i, (si, vi) in enumerate(zip(ss, raw)):
        w = Fraction(1)
        for j, sj in enumerate(ss):
            if j != i:
                w *= sj / (sj - si)
        poly = poly + vi * w
    return LimitEstimate(mean.with_prec(prec), tuple(e.with_prec(prec) for e in est),
                         spread.with_prec(prec), poly.with_prec(prec))
