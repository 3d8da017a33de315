from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel_err, to_mp
from hyperlog.algexpr import (Add, Div, EvaluationError, GammaFn, I, LogFormula, Mul, Neg, Num,
                              ParseError, PI, Pow, Root, Sub, TransTerm, Zeta, conjugate_tree,
                              eval_alg, eval_formula_rhs, parse, walk)
from hyperlog.catalog import builtin_entries
from hyperlog.exact import HGTriple
from hyperlog.mpnum import MPReal

P = 200


def test_eval_examples():
    v = eval_alg("2+sqrt(3)", P)
    assert v.im.is_zero()
    assert v.re.to_decimal(21) == "3.73205080756887729353"
    one = eval_alg("zeta(5)^5", P)
    assert abs(one - 1) < MPReal(1, P).shift(-P + 8)
    alpha = eval_alg("root(10, 1/24)", P).re
    assert alpha.to_decimal(6) == "0.727744"
    assert abs(alpha ** 10 * 24 - 1) < MPReal(1, P).shift(-P + 8)


def test_rational_literal_folding():
    assert parse("1/6") == Num(Fraction(1, 6))
    assert parse("4/2/3") == Div(Num(Fraction(2)), Num(Fraction(3)))
    assert parse("(1)/2") == Div(Num(Fraction(1)), Num(Fraction(2)))
    assert parse("1/6*pi") == Mul(Num(Fraction(1, 6)), PI)
    assert parse("2^-3") == Pow(Num(Fraction(2)), -3) == parse("2^(-3)")
    assert parse(" - 2 ^ 2 ") == Neg(Pow(Num(Fraction(2)), 2))


@pytest.mark.parametrize("text, pos", [("2+", 2), ("sqrt(3", 6), ("root(2 3)", 7),
                                       ("foo(1)", 0), ("(1))", 3), ("", 0), ("1/0", 3),
                                       ("2^x", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert ei.value.pos == pos


@pytest.mark.parametrize("text", ["sqrt(-2)", "root(4, 1-sqrt(2))", "1/(sqrt(2)*sqrt(2)-2)",
                                  "sqrt(i)", "gamma(i)", "(1-1)^(-1)"])
def test_domain_errors(text):
    with pytest.raises(EvaluationError):
        eval_alg(text, 128)


def test_odd_root_of_negative_is_rejected_too():
    # roots are positive-real only; roots of unity enter through zeta(n)
    with pytest.raises(EvaluationError):
        eval_alg("root(3, -8)", 64)


def _leaves():
    return st.one_of(
        st.fractions(min_value=0, max_value=50, max_denominator=12).map(Num),
        st.just(PI), st.just(I), st.integers(1, 12).map(Zeta))


def _trees():
    return st.recursive(
        _leaves(),
        lambda kids: st.one_of(
            st.builds(Add, kids, kids), st.builds(Sub, kids, kids),
            st.builds(Mul, kids, kids), st.builds(Div, kids, kids),
            st.builds(Neg, kids), st.builds(Pow, kids, st.integers(-3, 4)),
            st.builds(Root, st.integers(2, 5), kids), st.builds(GammaFn, kids)),
        max_leaves=10)


@settings(max_examples=200, deadline=None)
@given(_trees())
def test_render_parse_roundtrip(tree):
    assert parse(tree.render()) == tree


def _mp_eval(e):
    """Independent evaluation of a tree with mpmath (principal roots of
    positive reals only)."""
    if isinstance(e, Num):
        return mpmath.mpf(e.value.numerator) / e.value.denominator
    if e == PI:
        return mpmath.pi
    if e == I:
        return mpmath.mpc(0, 1)
    if isinstance(e, Zeta):
        return mpmath.exp(2j * mpmath.pi / e.n)
    if isinstance(e, Add):
        return _mp_eval(e.left) + _mp_eval(e.right)
    if isinstance(e, Sub):
        return _mp_eval(e.left) - _mp_eval(e.right)
    if isinstance(e, Mul):
        return _mp_eval(e.left) * _mp_eval(e.right)
    if isinstance(e, Div):
        return _mp_eval(e.left) / _mp_eval(e.right)
    if isinstance(e, Neg):
        return -_mp_eval(e.arg)
    if isinstance(e, Pow):
        return _mp_eval(e.base) ** e.exponent
    if isinstance(e, Root):
        return mpmath.root(mpmath.re(_mp_eval(e.arg)), e.n)
    if isinstance(e, GammaFn):
        return mpmath.gamma(mpmath.re(_mp_eval(e.arg)))
    raise TypeError(e)


def test_catalog_expressions_against_mpmath():
    for entry in builtin_entries():
        f = entry.formula
        trees = [f.prefactor] + [c for c, _ in f.rhs] + [t.arg for _, t in f.rhs if t.arg is not None]
        for tree in trees:
            with mpmath.workprec(400):
                expected = _mp_eval(tree)
                assert rel_err(eval_alg(tree, 200), expected) < mpmath.mpf(2) ** -185, tree.render()


def test_conjugation():
    for text in ["zeta(5)^2-zeta(5)^3", "(1+i*sqrt(2))/(zeta(20)^3+2)", "4*zeta(5)^4*i",
                 builtin_entries()[6].formula.rhs[1][1].arg.render()]:
        e = parse(text)
        a = eval_alg(conjugate_tree(e), P)
        b = eval_alg(e, P).conjugate()
        assert abs(a - b) < MPReal(1, P).shift(-P + 16)


def test_real_detection_for_real_entries():
    for entry in builtin_entries():
        if entry.lhs_kind != "real":
            continue
        for _, term in entry.formula.rhs:
            if term.arg is not None:
                v = eval_alg(term.arg, P)
                assert abs(v.im) < MPReal(1, P).shift(-P + 16)


def test_precision_refinement_stability():
    for entry in builtin_entries():
        for tree in [entry.formula.prefactor] + [c for c, _ in entry.formula.rhs]:
            lo, hi = eval_alg(tree, 128), eval_alg(tree, 256)
            assert abs(lo - hi) <= max(MPReal(1, 256), abs(hi)).shift(-122)


def test_formula_rhs_examples():
    t = HGTriple("1/6", "5/6", "1/2")
    main = LogFormula(t, Num(Fraction(1)), ((parse("3*sqrt(3)/(2*pi)"), TransTerm("log", parse("2+sqrt(3)"))),))
    v = eval_formula_rhs(main, P)
    assert v.re.to_decimal(20) == "1.0891154139428481968"
    # both renderings of the simplified product agree
    a = LogFormula(t, Num(Fraction(1)), ((parse("3"), TransTerm(
        "log", parse("((1+sqrt(3))/(1-sqrt(3)))*((-1+sqrt(3))/(-1-sqrt(3)))^(-1)"))),))
    b = LogFormula(t, Num(Fraction(1)), ((parse("6"), TransTerm("log", parse("2+sqrt(3)"))),))
    assert abs(eval_formula_rhs(a, P) - eval_formula_rhs(b, P)) < MPReal(1, P).shift(-P + 10)
    # constant term 4 pi i zeta^2 has modulus 4 pi
    c = LogFormula(t, Num(Fraction(1)), ((parse("4*zeta(5)^2"), TransTerm("pi_i")),))
    assert abs(abs(eval_formula_rhs(c, P)) - 4 * eval_alg(PI, P).re) < MPReal(1, P).shift(-P + 8)


def test_log_of_zero_and_bad_terms():
    t = HGTriple("1/6", "5/6", "1/2")
    f = LogFormula(t, Num(Fraction(1)), ((Num(Fraction(1)), TransTerm("log", parse("1-1"))),))
    with pytest.raises(EvaluationError):
        eval_formula_rhs(f, 64)
    with pytest.raises(ValueError):
        TransTerm("sin", parse("1"))
    with pytest.raises(ValueError):
        TransTerm("pi_i", parse("1"))


def test_formula_dict_roundtrip():
    for entry in builtin_entries():
        d = entry.formula.to_dict()
        assert LogFormula.from_dict(d) == entry.formula
