from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperlog.exact import (HGTriple, Polynomial, PreconditionError, RationalFunction,
                            as_rational, condition_holds, e_part_eligibility,
                            eligible_q_values, frac, fractional_sum, poly_gcd)

F = Fraction
NINE = [F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 4), F(1, 5), F(2, 5), F(3, 5), F(4, 5)]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=60)
nonint = rationals.filter(lambda x: x.denominator != 1)


@pytest.mark.parametrize("x, expected", [("5/2", F(1, 2)), ("-1/3", F(2, 3)), (2, F(0))])
def test_frac_examples(x, expected):
    assert frac(x) == expected


@given(nonint)
def test_frac_of_negation_sums_to_one(x):
    assert frac(x) + frac(-x) == 1


@given(rationals)
def test_frac_zero_iff_integer(x):
    assert (frac(x) == 0) == (x.denominator == 1)
    assert 0 <= frac(x) < 1


def test_as_rational_rejects_floats_and_decimals():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ValueError):
        as_rational("0.5")
    assert as_rational(" 3/9 ") == F(1, 3)


def test_condition_witnesses_for_main_triple():
    res = condition_holds(HGTriple("1/6", "5/6", "1/2"))
    assert res.holds
    assert res.witnesses == [(1, F(2)), (5, F(2))]
    t = HGTriple("1/6", "5/6", "1/2")
    # hand evaluation: 1/2 + 2/3 + 1/3 + 1/2
    assert fractional_sum(t, 1) == F(1, 2) + F(2, 3) + F(1, 3) + F(1, 2)


def test_condition_fails_for_q_one_seventh():
    assert not condition_holds(HGTriple("1/6", "5/6", "1/7")).holds


@pytest.mark.parametrize("a, b, q, name", [
    ("1", "1/2", "1/3", "a"), ("1/2", "-2", "1/3", "b"), ("1/2", "1/3", "1", "q"),
    ("1/2", "1/3", "3/2", "q-a"), ("1/2", "1/3", "4/3", "q-b"), ("1/2", "1/3", "11/6", "q-a-b"),
])
def test_triple_preconditions_name_the_failure(a, b, q, name):
    with pytest.raises(PreconditionError, match=rf"^{name} is an integer"):
        HGTriple(a, b, q)


@settings(max_examples=60, deadline=None)
@given(nonint, nonint, nonint)
def test_residue_pairing(a, b, q):
    try:
        t = HGTriple(a, b, q)
    except PreconditionError:
        return
    L = t.denominator_lcm
    sums = dict(condition_holds(t).witnesses)
    for s, v in sums.items():
        assert v + sums[L - s] == 4


def test_eligible_q_examples():
    assert eligible_q_values("1/6", "5/6", 5) == NINE
    assert eligible_q_values("1/6", "5/6", 60) == NINE
    assert eligible_q_values("1/6", "5/6", 1) == []


@pytest.mark.parametrize("l, d, dim, log_case", [(2, 1, 1, True), (6, 1, 0, False),
                                                 (12, 2, 0, False), (5, 1, 1, True),
                                                 (7, 1, 1, False), (1, 1, 0, False)])
def test_e_part(l, d, dim, log_case):
    r = e_part_eligibility(l, d)
    assert (r.dimension, r.log_case) == (dim, log_case)


def test_e_part_rejects_non_divisor():
    with pytest.raises(PreconditionError):
        e_part_eligibility(5, 2)


def test_condition_matches_log_case_up_to_60():
    for l in range(2, 61):
        for k in range(1, l):
            if math.gcd(k, l) != 1:
                continue
            try:
                t = HGTriple("1/6", "5/6", F(k, l))
            except PreconditionError:
                continue
            assert condition_holds(t).holds == e_part_eligibility(l, 1).log_case, (k, l)


polys = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                 min_size=1, max_size=4).map(Polynomial)


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_rational_function_cancellation(f, g, h):
    if g.is_zero() or h.is_zero():
        return
    r = RationalFunction(f, h)
    s = RationalFunction(g, h)
    assert (r * s) / s == r


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_polynomial_divmod_and_gcd_against_sympy(f, g):
    if g.is_zero():
        return
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree
    x = sympy.Symbol("x")
    fs = sympy.Poly(list(reversed(f.coeffs)) or [0], x, domain="QQ")
    gs = sympy.Poly(list(reversed(g.coeffs)), x, domain="QQ")
    expected = sympy.gcd(fs, gs).monic() if not f.is_zero() else gs.monic()
    got = poly_gcd(f, g)
    assert [F(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())] == list(got.monic().coeffs)


def test_rational_function_normal_form_and_derivative():
    t = RationalFunction.t()
    r = (2 * t * t - 2 * t) / (4 * t - 4)   # = t/2
    assert r == t * F(1, 2)
    assert r.den == Polynomial((1,))
    d = (1 / (t - t * t)).derivative()
    x = sympy.Symbol("x")
    expected = sympy.diff(1 / (x - x**2), x)
    for v in (F(1, 3), F(2, 7), F(-5, 2)):
        assert d(v) == F(str(sympy.nsimplify(expected.subs(x, sympy.Rational(v.numerator, v.denominator)))))
