"""Integer relations (PSLQ) and the drivers built on them.

:func:`find_relation` runs PSLQ in fixed-point integer arithmetic and
confirms any relation it finds at twice the working precision.
:func:`discover_formula` turns a numerically evaluated 3F2 value plus
candidate algebraic numbers into a :class:`LogFormula`;
:func:`determine_constant` snaps a ratio onto a rational lattice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algexpr import (AlgExpr, I, LogFormula, Num, PI, TransTerm, as_expr,
                      conjugate_tree, eval_alg, eval_formula_rhs)
from .exact import HGTriple, PreconditionError, condition_holds
from .hyper import euler_transform_3f2
from .mpnum import MPComplex, MPReal, guard_bits

STATUSES = ("found", "none-below-bound", "precision-exhausted")

DEFAULT_MULTIPLIERS = ("1", "sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(6)")


@dataclass
class RelationReport:
    labels: list[str]
    found: tuple[int, ...] | None
    norm_bound_searched: int
    confirmation: MPReal | None      # |sum m_i v_i| at twice the precision
    status: str
    residual: MPReal | None = None   # the same at the search precision
    iterations: int = 0
    prec: int = 0

    def describe(self) -> str:
        if self.found is None:
            return f"{self.status} (no relation with max |m_i| <= {self.norm_bound_searched})"
        terms = [f"{m}*{lab}" for m, lab in zip(self.found, self.labels) if m]
        return " + ".join(terms) + " = 0"


def required_bits(n: int, max_norm: int) -> int:
    """Working precision demanded for an ``n``-vector searched up to
    ``max_norm``: ``4 (n+2)`` bits per decimal digit of the norm bound."""
    return max(32, math.ceil(4 * (n + 2) * math.log10(max(max_norm, 10))))


# --------------------------------------------------------------------------
# fixed-point PSLQ

def _pslq_core(x: list[int], prec: int, max_norm: int, max_iter: int
               ) -> tuple[list[int] | None, float, int, str]:
    """PSLQ on fixed-point inputs (``prec`` fractional bits).

    Returns ``(relation, euclidean_bound, iterations, status)``."""
    n = len(x)
    one = 1 << prec

    def mul(a, b):
        return (a * b) >> prec

    def div(a, b):
        return (a << prec) // b

    def rnd(a):
        return (a + (one >> 1)) >> prec

    tol = 1 << max(1, prec // 8)       # |y_j| below ~2^(-7prec/8)
    gam = math.isqrt(4 * one * one // 3)   # sqrt(4/3)

    # y = x / |x|; partial norms s_k
    s = [0] * n
    acc = 0
    for k in range(n - 1, -1, -1):
        acc += x[k] * x[k]
        s[k] = math.isqrt(acc)
    if s[0] == 0:
        raise ValueError("all inputs are zero")
    y = [div(v, s[0]) for v in x]
    s = [div(v, s[0]) for v in s]

    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    H = [[0] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = div(s[j + 1], s[j])
            elif s[j] and s[j + 1]:
                H[i][j] = -div(mul(y[i], y[j]), mul(s[j], s[j + 1]))

    def reduce_row(i: int, j: int) -> None:
        if H[j][j] == 0:
            return
        t = rnd(div(H[i][j], H[j][j]))
        if t == 0:
            return
        y[j] += t * y[i]
        for k in range(j + 1):
            H[i][k] -= t * H[j][k]
        for k in range(n):
            A[i][k] -= t * A[j][k]
            B[k][j] += t * B[k][i]

    for i in range(1, n):
        for j in range(i - 1, -1, -1):
            reduce_row(i, j)

    bound = 0.0
    limit = 1 << (prec - prec // 4)   # integer matrices larger than this mean lost precision
    for it in range(1, max_iter + 1):
        # exchange
        best, m = -1, 0
        g = one
        for i in range(n - 1):
            v = abs(mul(g, H[i][i]))
            if v > best:
                best, m = v, i
            g = mul(g, gam)
        y[m], y[m + 1] = y[m + 1], y[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]
        # restore lower-trapezoidal form
        if m < n - 2:
            t0 = math.isqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                return None, bound, it, "precision-exhausted"
            t1, t2 = div(H[m][m], t0), div(H[m][m + 1], t0)
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = mul(t1, t3) + mul(t2, t4)
                H[i][m + 1] = mul(t1, t4) - mul(t2, t3)
        for i in range(m + 1, n):
            for j in range(min(i - 1, m + 1), -1, -1):
                reduce_row(i, j)

        # relation?
        for j in range(n):
            if abs(y[j]) < tol:
                rel = [B[k][j] for k in range(n)]
                if max(abs(v) for v in rel) <= max_norm:
                    return rel, bound, it, "found"
        hmax = max(abs(H[i][i]) for i in range(n - 1))
        if hmax == 0:
            return None, bound, it, "precision-exhausted"
        bound = one / hmax
        if bound > max_norm * math.sqrt(n):
            return None, bound, it, "none-below-bound"
        if max(abs(v) for row in A for v in row) > limit:
            return None, bound, it, "precision-exhausted"
    return None, bound, max_iter, "precision-exhausted"


def _normalize(rel: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in rel:
        g = math.gcd(g, v)
    rel = [v // g for v in rel] if g > 1 else list(rel)
    for v in rel:
        if v:
            return tuple(rel) if v > 0 else tuple(-w for w in rel)
    return tuple(rel)


def _dot(rel: Sequence[int], values: Sequence[MPReal], prec: int) -> MPReal:
    acc = MPReal(0, prec)
    for m, v in zip(rel, values):
        if m:
            acc = acc + v.with_prec(prec) * m
    return abs(acc)


def find_relation(values: Sequence[MPReal], max_norm: int, prec: int, *,
                  labels: Sequence[str] | None = None,
                  refine: Callable[[int], Sequence[MPReal]] | None = None,
                  max_iter: int | None = None) -> RelationReport:
    """Search an integer vector ``m`` with ``sum m_i v_i = 0`` and
    ``max |m_i| <= max_norm``.

    The search runs at ``prec`` bits. A candidate relation is accepted only
    if its residual, recomputed from values at ``2 prec`` bits (``refine``,
    or the inputs themselves when they carry that many bits), shrinks by at
    least ``2^(prec/2)``.
    """
    n = len(values)
    labels = list(labels) if labels is not None else [f"v{i}" for i in range(n)]
    if n < 2:
        raise ValueError("need at least two values")
    if len(labels) != n:
        raise ValueError("labels and values differ in length")
    if max_norm < 1:
        raise ValueError("max_norm must be positive")
    if refine is None and min(v.prec for v in values) < 2 * prec:
        raise ValueError("values must carry 2*prec bits for confirmation (or pass refine)")

    def report(status, found=None, bound=0, conf=None, res=None, it=0):
        return RelationReport(labels, found, int(bound), conf, status, res, it, prec)

    need = required_bits(n, max_norm)
    if prec < need:
        return report("precision-exhausted")
    x = []
    for v in values:
        f = v.with_prec(prec + 8).to_fraction()
        x.append((f.numerator << prec) // f.denominator)
    if all(v == 0 for v in x):
        raise ValueError("all values are zero")
    if max_iter is None:
        max_iter = 50 * n * n * max(8, prec // 16)
    rel, bound, it, status = _pslq_core(x, prec, max_norm, max_iter)
    if status != "found":
        return report(status, bound=min(bound / math.sqrt(n), 10**18), it=it)

    rel = _normalize(rel)
    fine = list(refine(2 * prec)) if refine is not None else list(values)
    scale = max(abs(v) for v in fine)
    r1 = _dot(rel, values, prec)
    r2 = _dot(rel, fine, 2 * prec)
    eps2 = scale.with_prec(2 * prec).shift(-2 * prec + n + 16) * max(abs(m) for m in rel)
    shrinks = r2 <= max(r1.shift(-(prec // 2)), eps2)
    small = r1 <= scale.with_prec(prec) * MPReal(10, prec) ** (-int(0.6 * prec * math.log10(2)))
    if not (shrinks and small):
        return report("precision-exhausted", bound=max_norm, conf=r2, res=r1, it=it)
    return report("found", rel, max_norm, r2, r1, it)


# --------------------------------------------------------------------------
# formula discovery

@dataclass
class Discovery:
    formula: LogFormula | None
    relation: RelationReport
    check_digits: float | None = None
    labels: list[str] = field(default_factory=list)


def _as_term(c) -> TransTerm:
    if isinstance(c, TransTerm):
        return c
    return TransTerm("log", as_expr(c))


def _basis(terms: list[TransTerm], wp: int) -> list[tuple[str, MPReal, Callable]]:
    """Real basis functions derived from the candidate terms.

    Each item is ``(label, value, to_terms)`` with ``to_terms(coeff)``
    returning the ``(coeff, term)`` pairs that reproduce ``coeff * value``.
    A complex log contributes ``log|e|`` and ``arg e``, rebuilt from
    ``log e`` and ``log conj(e)``."""
    out = []
    for term in terms:
        v = term.ev(wp)
        if term.kind != "log" or v.im.is_zero() or abs(v.im) < abs(v).shift(-wp + 24):
            out.append((term.render(), v.re, lambda c, term=term: [(c, term)]))
            continue
        conj = TransTerm("log", conjugate_tree(term.arg))

        def re_part(c, term=term, conj=conj):
            return [(c / 2, term), (c / 2, conj)]

        def im_part(c, term=term, conj=conj):
            return [(c * _MINUS_HALF_I, term), (c * _HALF_I, conj)]

        out.append((f"Re {term.render()}", v.re, re_part))
        out.append((f"Im {term.render()}", v.im, im_part))
    return out


_HALF_I = Num(Fraction(1, 2)) * I
_MINUS_HALF_I = -_HALF_I


def discover_formula(triple: HGTriple, candidates: Sequence, prec: int, *,
                     prefactor: AlgExpr | str = "1",
                     multipliers: Sequence[str] = DEFAULT_MULTIPLIERS,
                     max_norm: int = 10**4, include_pi: bool = True) -> Discovery:
    """Look for ``pi * P * F = sum_j m_j mu_j term_j + m_pi * pi`` with small
    integers ``m``, ``F = 3F2(a, b, q; a+b, q+1; 1)``, radical multipliers
    ``mu`` and the candidate terms (a bare expression means its log).

    The search starts at norm bound 10 and grows tenfold up to
    ``max_norm``. Returns a :class:`Discovery` whose ``formula`` is None
    when nothing was found."""
    if not condition_holds(triple).holds:
        raise PreconditionError(f"the eligibility condition fails for {triple}")
    terms = [_as_term(c) for c in candidates]
    P = as_expr(prefactor)
    mus = [as_expr(m) for m in multipliers]
    n_est = 1 + len(mus) * (len(terms) + sum(t.kind == "log" for t in terms)) + int(include_pi)
    prec = max(prec, required_bits(n_est, max_norm))

    cache: dict[int, tuple[list[str], list[MPReal], list[Callable]]] = {}

    def build(p: int):
        if p in cache:
            return cache[p]
        wp = p + guard_bits(p) + 16
        for t in terms:
            if t.ev(wp).is_zero():
                raise ValueError(f"candidate {t.render()} evaluates to zero")
        F = euler_transform_3f2(triple.a, triple.b, triple.q, wp)
        lhs = eval_alg(P, wp).re * F * eval_alg(PI, wp).re
        labels, vals, makers = ["pi*P*F"], [lhs], [None]
        for lab, v, mk in _basis(terms, wp):
            for mu, mu_e in zip(multipliers, mus):
                labels.append(lab if mu == "1" else f"{mu}*{lab}")
                vals.append(v * eval_alg(mu_e, wp).re)
                makers.append((mk, mu_e))
        if include_pi:
            labels.append("pi")
            vals.append(eval_alg(PI, wp).re)
            makers.append("pi")
        cache[p] = (labels, [v.with_prec(p) for v in vals], makers)
        return cache[p]

    labels, vals, makers = build(prec)
    bound = 10
    rep = None
    while True:
        b = min(bound, max_norm)
        rep = find_relation(vals, b, max(prec, required_bits(len(vals), b)), labels=labels,
                            refine=lambda p: build(p)[1])
        if rep.status == "found" or b >= max_norm or rep.status == "precision-exhausted":
            break
        bound *= 10
    if rep.status != "found" or rep.found[0] == 0:
        return Discovery(None, rep, labels=labels)

    m0 = rep.found[0]
    rhs: list[tuple[AlgExpr, TransTerm]] = []
    for m, mk in zip(rep.found[1:], makers[1:]):
        if not m:
            continue
        # pi*P*F + sum m_j x_j = 0  ->  P*F = sum (-m_j/m0) x_j / pi
        ratio = Fraction(-m, m0)
        c = Num(ratio) if ratio > 0 else -Num(-ratio)
        if mk == "pi":
            rhs.append((c, TransTerm("one")))
        else:
            maker, mu_e = mk
            coeff = c if mu_e == Num(Fraction(1)) else c * mu_e
            rhs.extend(maker(coeff / PI))
    formula = LogFormula(triple, P, tuple(rhs))
    check = _check_digits(formula, 40)
    return Discovery(formula, rep, check, labels)


def _check_digits(f: LogFormula, digits: int) -> float:
    prec = int(digits * 3.33) + 32
    t = f.triple
    F = euler_transform_3f2(t.a, t.b, t.q, prec)
    lhs = f.lhs_factor(prec) * MPComplex(F, 0, prec)
    d = abs(lhs - eval_formula_rhs(f, prec))
    if d.is_zero():
        return prec * math.log10(2)
    return -math.log10(float(d / max(MPReal(1, prec), abs(lhs))))


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantFit:
    multiple: Fraction
    residual: MPReal


def determine_constant(value: MPReal, target: MPReal, lattice, prec: int) -> ConstantFit:
    """Nearest point of ``lattice * Z`` to ``value / target`` (ties away
    from zero) and the distance ``|value/target - multiple|``."""
    lattice = Fraction(lattice)
    if lattice <= 0:
        raise ValueError("lattice spacing must be positive")
    if target.is_zero():
        raise ValueError("target must be nonzero")
    wp = prec + guard_bits(prec)
    r = value.with_prec(wp) / target.with_prec(wp)
    idx = (r / lattice).to_fraction()
    k = math.floor(abs(idx) + Fraction(1, 2))
    if idx < 0:
        k = -k
    multiple = lattice * k
    return ConstantFit(multiple, abs(r - multiple).with_prec(prec))
