from __future__ import annotations

import json
from dataclasses import replace
from fractions import Fraction

import jsonschema
import mpmath
import pytest

from conftest import rel_err
from hyperlog.algexpr import LogFormula, Num, TransTerm, parse
from hyperlog.catalog import (CATALOG_ENV, CatalogEntry, VerificationError, builtin_entries,
                              conjugate_pairing, export_catalog, gamma_quotient, get_entry,
                              load_catalog, verify_all, verify_entry)

REPORT_SCHEMA = {
    "type": "object",
    "required": ["id", "pass", "digits_requested", "achieved", "delta_decimal_string",
                 "lhs", "rhs", "f_quadrature", "f_series", "method_agreement_digits",
                 "branch_sensitive"],
    "properties": {
        "id": {"type": "string"},
        "pass": {"type": "boolean"},
        "digits_requested": {"type": "integer", "minimum": 10},
        "achieved": {"type": "number", "minimum": 0},
        "delta_decimal_string": {"type": "string"},
        "lhs": {"type": "string"},
        "rhs": {"type": "string"},
        "method_agreement_digits": {"type": "number"},
        "branch_sensitive": {"type": "boolean"},
    },
}

ENTRY_SCHEMA = {
    "type": "object",
    "required": ["id", "triple", "prefactor", "rhs"],
    "properties": {
        "id": {"type": "string"},
        "triple": {"type": "object", "required": ["a", "b", "q"],
                   "additionalProperties": {"type": "string"}},
        "prefactor": {"type": "string"},
        "rhs": {"type": "array", "items": {"type": "object"}},
        "lhs_kind": {"enum": ["real", "complex"]},
    },
}


def test_builtin_ids_and_triples():
    entries = builtin_entries()
    ids = [e.id for e in entries]
    assert ids == ["l2-q12", "l3-q13", "l3-q23", "l4-q14", "l4-q34",
                   "l5-k1", "l5-k2", "l5-k3", "l5-k4"]
    for e in entries:
        assert (e.triple.a, e.triple.b) == (Fraction(1, 6), Fraction(5, 6))
    assert [e.lhs_kind for e in entries] == ["real"] * 5 + ["complex"] * 4


@pytest.mark.parametrize("entry", builtin_entries(), ids=lambda e: e.id)
def test_every_entry_verifies(entry):
    v = verify_entry(entry, 30)
    assert v.passed, v.notes
    assert v.achieved >= 30
    assert v.method_agreement >= 25
    jsonschema.validate(v.report(), REPORT_SCHEMA)


def test_worked_example_value_matches_mpmath():
    v = verify_entry(get_entry("l2-q12"), 40)
    with mpmath.workprec(300):
        ref = mpmath.hyp3f2(mpmath.mpf(1) / 6, mpmath.mpf(5) / 6, 0.5, 1, 1.5, 1)
    assert rel_err(v.f_quadrature, ref) < mpmath.mpf(10) ** -40


def test_corrupted_coefficient_fails_with_expected_delta():
    good = get_entry("l2-q12")
    bad_rhs = ((parse("7*sqrt(3)/(4*pi)"), TransTerm("log", parse("2+sqrt(3)"))),)
    bad = replace(good, id="bad", formula=replace(good.formula, rhs=bad_rhs))
    v = verify_entry(bad, 30)
    assert not v.passed
    assert v.delta.to_decimal(10) == "0.1815192357"


def test_rhs_failure_names_the_side():
    good = get_entry("l2-q12")
    broken = replace(good, formula=replace(
        good.formula, rhs=((Num(Fraction(1)), TransTerm("log", parse("sqrt(-1)"))),)))
    with pytest.raises(VerificationError) as ei:
        verify_entry(broken, 20)
    assert ei.value.side == "right-hand side"
    assert ei.value.entry_id == "l2-q12"


def test_digits_floor():
    with pytest.raises(ValueError):
        verify_entry(get_entry("l2-q12"), 5)


def test_json_roundtrip_and_schema(tmp_path):
    text = export_catalog()
    data = json.loads(text)
    for d in data:
        jsonschema.validate(d, ENTRY_SCHEMA)
    path = tmp_path / "cat.json"
    path.write_text(text)
    assert load_catalog(path) == builtin_entries()
    assert [CatalogEntry.from_dict(d) for d in data] == builtin_entries()


def test_env_override(tmp_path, monkeypatch):
    only = [builtin_entries()[0].to_dict()]
    only[0]["id"] = "custom"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(only))
    monkeypatch.setenv(CATALOG_ENV, str(path))
    assert [e.id for e in load_catalog()] == ["custom"]
    monkeypatch.delenv(CATALOG_ENV)
    assert len(load_catalog()) == 9


@pytest.mark.parametrize("payload, msg", [
    ({"id": "x"}, "missing"),
    ({"not": "a list"}, "JSON list"),
])
def test_bad_catalog_files(tmp_path, payload, msg):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(payload if msg == "JSON list" else [payload]))
    with pytest.raises(ValueError, match=msg):
        load_catalog(path)


def test_duplicate_ids_rejected(tmp_path):
    d = builtin_entries()[0].to_dict()
    path = tmp_path / "c.json"
    path.write_text(json.dumps([d, d]))
    with pytest.raises(ValueError, match="unique"):
        load_catalog(path)


def test_unknown_entry():
    with pytest.raises(KeyError):
        get_entry("nope")


def test_parallel_matches_serial():
    entries = builtin_entries()[:3]
    serial = verify_all(20, entries, jobs=1)
    parallel = verify_all(20, entries, jobs=2)
    assert serial == parallel
    assert serial["all_pass"] and serial["total"] == 3


def test_conjugate_pairing():
    for check in conjugate_pairing(30):
        assert float(check.prefactor_mismatch) < 1e-30
        assert float(check.f_imag) < 1e-30
    values = [float(c.f_value) for c in conjugate_pairing(20)]
    assert values == sorted(values)
    assert values[0] == pytest.approx(0.7398, abs=1e-4)


def test_gamma_quotients():
    a = [gamma_quotient(k, 200) for k in range(1, 5)]
    with mpmath.workprec(300):
        for k, v in enumerate(a, 1):
            c = mpmath.mpf(k) / 5
            ref = mpmath.gamma(c + mpmath.mpf(1) / 6) * mpmath.gamma(c + mpmath.mpf(5) / 6) / mpmath.gamma(c) ** 2
            assert rel_err(v, ref) < mpmath.mpf(2) ** -190
    assert float(a[0] * a[3]) == pytest.approx(0.0764, abs=1e-4)
    assert float(a[1] * a[2]) == pytest.approx(0.1397, abs=1e-4)
