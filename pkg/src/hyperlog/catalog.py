"""Built-in log formulas for 3F2(1/6, 5/6, q; 1, q+1; 1) and their verifier.

Each entry states ``prefactor * lhs_scale * F = sum coeff_j * term_j`` with
``F = 3F2(a, b, q; a+b, q+1; 1)``. The catalog is built in code, can be
exported to JSON and reloaded (``HYPERLOG_CATALOG`` points at an override
file).
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algexpr import (EvaluationError, LogFormula, branch_margin, conjugate_tree,
                      eval_alg,
                      eval_formula_rhs, parse)
from .exact import HGTriple
from .hyper import HGSpec, euler_transform_details, sum_series
from .mpnum import MPComplex, MPReal, guard_bits

CATALOG_ENV = "HYPERLOG_CATALOG"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    formula: LogFormula
    source: str = ""

    @property
    def lhs_kind(self) -> str:
        return self.formula.lhs_kind

    @property
    def triple(self) -> HGTriple:
        return self.formula.triple

    def to_dict(self) -> dict:
        d = {"id": self.id}
        d.update(self.formula.to_dict())
        d["source"] = self.source
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogEntry":
        for key in ("id", "triple", "prefactor", "rhs"):
            if key not in d:
                raise ValueError(f"catalog entry missing field {key!r}")
        if d.get("lhs_kind", "real") not in ("real", "complex"):
            raise ValueError(f"entry {d['id']}: lhs_kind must be 'real' or 'complex'")
        return cls(d["id"], LogFormula.from_dict(d), d.get("source", ""))


def _entry(id_: str, q: str, prefactor: str, rhs: list[tuple[str, str, str | None]],
           lhs_scale: str | None = None, lhs_kind: str = "real", source: str = "") -> CatalogEntry:
    d = {
        "id": id_,
        "triple": {"a": "1/6", "b": "5/6", "q": q},
        "prefactor": prefactor,
        "lhs_scale": lhs_scale,
        "rhs": [{"coeff": c, "kind": k, "arg": a} for c, k, a in rhs],
        "lhs_kind": lhs_kind,
        "source": source,
    }
    return CatalogEntry.from_dict(d)


# pieces shared by the l = 3 and l = 4 entries
_L3_A_PLUS = "(1-1/root(3,4))^2+(1+sqrt(3)/root(3,4))^2"
_L3_A_MINUS = "(1-1/root(3,4))^2+(1-sqrt(3)/root(3,4))^2"
_L3_B = "3/(3+root(3,2)+3*root(3,4))"
_L4_LOG = "(root(4,243)-root(4,27)+sqrt(2))/(root(4,243)-root(4,27)-sqrt(2))"
_L4_ACOS = "(root(4,243)+root(4,27))/(2*sqrt(5+3*sqrt(3)))"
_ALPHA = "root(10,24)"   # alpha = 1/root(10, 24); powers below are written on this


def _l5_e(j: int) -> str:
    """``e_j = (y - sqrt3 (x-1)) / (y + sqrt3 (x-1))`` at the point
    ``x = alpha^2 w^2``, ``y = sqrt2 alpha^3 w^3 + (sqrt2/4) alpha^-3 w^-3``,
    ``w = zeta20 * zeta5^(2j)``."""
    x = f"{_ALPHA}^(-2)*zeta(20)^2*zeta(5)^{(4 * j) % 5}"
    y = (f"sqrt(2)*{_ALPHA}^(-3)*zeta(20)^3*zeta(5)^{j % 5}"
         f"+sqrt(2)/4*{_ALPHA}^3*zeta(20)^(-3)*zeta(5)^{(4 * j) % 5}")
    return f"({y}-sqrt(3)*({x}-1))/({y}+sqrt(3)*({x}-1))"


def _z(n: int) -> str:
    n %= 5
    return "1" if n == 0 else f"zeta(5)^{n}"


def _l5_entry(k: int) -> CatalogEntry:
    c = Fraction(k, 5)
    g1, g2 = c + Fraction(1, 6), c + Fraction(5, 6)
    scale = f"2*pi*gamma({g1})*gamma({g2})/gamma({c})^2/{k}"
    z2 = _z(2 * k)
    rhs = [(f"{z2}-1", "log", _l5_e(0)),
           (f"{z2}-{_z(3 * k)}", "log", _l5_e(1)),
           (f"{z2}-{_z(k)}", "log", _l5_e(2)),
           (f"{z2}-{_z(4 * k)}", "log", _l5_e(3)),
           (f"4*{z2}", "pi_i", None)]
    return _entry(f"l5-k{k}", str(c), f"5/({z2}-1)", rhs, lhs_scale=scale,
                  lhs_kind="complex", source=f"fibration y^2 = 2x^3 - 3x^2 + t^5, k = {k}")


def builtin_entries() -> list[CatalogEntry]:
    l3_src = "fibration y^2 = 2x^3 - 3x^2 + t^3"
    l4_src = "fibration y^2 = 2x^3 - 3x^2 + t^4"
    entries = [
        _entry("l2-q12", "1/2", "1",
               [("3*sqrt(3)/(2*pi)", "log", "2+sqrt(3)")],
               source="fibration y^2 = 2x^3 - 3x^2 + t^2 (worked example)"),
        _entry("l3-q13", "1/3", "1",
               [("sqrt(3)*root(3,2)/(2*pi)", "log", _L3_A_PLUS),
                ("-sqrt(3)*root(3,2)/(2*pi)", "log", _L3_A_MINUS),
                ("-root(3,2)/pi", "atan", _L3_B)], source=l3_src),
        _entry("l3-q23", "2/3", "1",
               [("sqrt(3)*root(3,4)/(3*pi)", "log", _L3_A_PLUS),
                ("-sqrt(3)*root(3,4)/(3*pi)", "log", _L3_A_MINUS),
                ("2*root(3,4)/(3*pi)", "atan", _L3_B)], source=l3_src),
        _entry("l4-q14", "1/4", "2*pi/root(4,1728)",
               [("1/2", "log", _L4_LOG), ("-1", "acos", _L4_ACOS)], source=l4_src),
        _entry("l4-q34", "3/4", "7*sqrt(3)/9*2*pi/root(4,1728)",
               [("1/2", "log", _L4_LOG), ("1", "acos", _L4_ACOS)], source=l4_src),
    ]
    entries += [_l5_entry(k) for k in range(1, 5)]
    return entries


def export_catalog(entries: list[CatalogEntry] | None = None) -> str:
    entries = builtin_entries() if entries is None else entries
    return json.dumps([e.to_dict() for e in entries], indent=2) + "\n"


def load_catalog(path: str | os.PathLike | None = None) -> list[CatalogEntry]:
    """Catalog from ``path``, else from ``$HYPERLOG_CATALOG``, else built in."""
    if path is None:
        path = os.environ.get(CATALOG_ENV) or None
    if path is None:
        return builtin_entries()
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ValueError("catalog file must hold a JSON list of entries")
    entries = [CatalogEntry.from_dict(d) for d in data]
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("catalog ids must be unique")
    return entries


def get_entry(entry_id: str, entries: list[CatalogEntry] | None = None) -> CatalogEntry:
    for e in entries if entries is not None else load_catalog():
        if e.id == entry_id:
            return e
    raise KeyError(f"no catalog entry {entry_id!r}")


# --------------------------------------------------------------------------
# verification

class VerificationError(RuntimeError):
    def __init__(self, entry_id: str, side: str, cause: Exception) -> None:
        super().__init__(f"{entry_id}: evaluation of the {side} failed: {cause}")
        self.entry_id = entry_id
        self.side = side


@dataclass
class Verification:
    id: str
    passed: bool
    digits_requested: int
    achieved: float
    delta: MPReal
    lhs: MPComplex
    rhs: MPComplex
    f_quadrature: MPReal
    f_series: MPReal
    method_agreement: float
    branch_sensitive: bool = False
    notes: list[str] = field(default_factory=list)

    def report(self) -> dict:
        return {
            "id": self.id,
            "pass": self.passed,
            "digits_requested": self.digits_requested,
            "achieved": round(self.achieved, 2),
            "delta_decimal_string": self.delta.to_decimal(6),
            "lhs": self.lhs.to_decimal(min(self.digits_requested, 40)),
            "rhs": self.rhs.to_decimal(min(self.digits_requested, 40)),
            "f_quadrature": self.f_quadrature.to_decimal(min(self.digits_requested, 40)),
            "f_series": self.f_series.to_decimal(min(self.digits_requested, 40)),
            "method_agreement_digits": round(self.method_agreement, 2),
            "branch_sensitive": self.branch_sensitive,
        }


def _digits_of(err: MPReal, scale: MPReal, cap: float) -> float:
    """``-log10(err / max(1, scale))`` clipped to ``[0, cap]``."""
    if err.is_zero():
        return cap
    r = err / max(MPReal(1, err.prec), scale)
    x = float(r)
    d = -math.log10(x) if x > 0 else -r.mag * math.log10(2)
    return min(cap, max(0.0, d))


def verify_entry(entry: CatalogEntry, digits: int) -> Verification:
    """Evaluate both sides of ``entry`` and compare them to ``digits``
    significant digits (relative to ``max(1, |LHS|)``)."""
    if digits < 10:
        raise ValueError("digits must be at least 10")
    f = entry.formula
    t = f.triple
    prec = int(digits * 4) + 16
    prec += guard_bits(prec)
    cap = prec * math.log10(2)
    try:
        quad = euler_transform_details(t.a, t.b, t.q, prec)
        series = sum_series(HGSpec((t.a, t.b, t.q), (t.a + t.b, t.q + 1), 1), prec)
        scale = f.lhs_factor(prec)
    except (ArithmeticError, ValueError) as exc:
        raise VerificationError(entry.id, "left-hand side", exc) from exc
    try:
        rhs = eval_formula_rhs(f, prec)
        margin = branch_margin(f, prec)
    except (EvaluationError, ValueError, ArithmeticError) as exc:
        raise VerificationError(entry.id, "right-hand side", exc) from exc

    F = quad.value
    lhs = scale * MPComplex(F, 0, prec)
    delta = abs(lhs - rhs)
    lhs_abs = abs(lhs)
    tol = MPReal(Fraction(1, 10**digits), prec) * max(MPReal(1, prec), lhs_abs)
    notes = []
    agree = _digits_of(abs(F - series.value), abs(F), cap)
    passed = delta < tol and quad.converged
    if not quad.converged:
        notes.append(f"quadrature not converged ({quad.achieved_digits:.1f} digits)")
    if f.lhs_kind == "real" and not rhs.im.is_zero():
        if abs(rhs.im) > MPReal(1, prec).shift(-prec + 16) * max(MPReal(1, prec), lhs_abs):
            passed = False
            notes.append("right-hand side of a real entry has a non-negligible imaginary part")
    sensitive = margin is not None and margin < MPReal(1, prec).shift(-(prec // 2))
    if sensitive:
        passed = False
        notes.append("a log argument lies within 2^-(prec/2) of the branch cut")
    return Verification(entry.id, passed, digits, _digits_of(delta, lhs_abs, cap), delta,
                        lhs, rhs, F, series.value, agree, sensitive, notes)


def _verify_report(args: tuple[dict, int]) -> dict:
    d, digits = args
    return verify_entry(CatalogEntry.from_dict(d), digits).report()


def verify_all(digits: int, entries: list[CatalogEntry] | None = None, jobs: int = 1) -> dict:
    """Verify every entry; the result is ordered by catalog order."""
    entries = load_catalog() if entries is None else entries
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_verify_report, [(e.to_dict(), digits) for e in entries]))
    else:
        reports = [verify_entry(e, digits).report() for e in entries]
    return {
        "digits_requested": digits,
        "passed": sum(r["pass"] for r in reports),
        "total": len(reports),
        "all_pass": all(r["pass"] for r in reports),
        "entries": reports,
    }


@dataclass(frozen=True)
class PairingCheck:
    k: int
    prefactor_mismatch: MPReal   # |conj(prefactor_k) - prefactor_(5-k)|
    f_imag: MPReal               # |Im f_k| with f_k recovered from the right-hand side
    f_value: MPReal


def conjugate_pairing(digits: int = 30) -> list[PairingCheck]:
    """Conjugation structure of the l = 5 family.

    The prefactor ``5/(zeta^(2k)-1)`` of entry ``k`` is the conjugate of
    that of entry ``5-k`` (checked on the conjugated expression tree), and
    the right-hand side divided by the prefactor is the real number
    ``f_k``."""
    prec = int(digits * 4) + 16
    entries = {e.id: e for e in builtin_entries()}
    out = []
    for k in range(1, 5):
        a, b = entries[f"l5-k{k}"].formula, entries[f"l5-k{5 - k}"].formula
        mismatch = abs(eval_alg(conjugate_tree(a.prefactor), prec) - eval_alg(b.prefactor, prec))
        f_k = eval_formula_rhs(a, prec) / eval_alg(a.prefactor, prec)
        out.append(PairingCheck(k, mismatch, abs(f_k.im), f_k.re))
    return out


def gamma_quotient(k: int, prec: int) -> MPReal:
    """``A_k = Gamma(k/5+1/6) Gamma(k/5+5/6) / Gamma(k/5)^2``."""
    c = Fraction(k, 5)
    e = parse(f"gamma({c + Fraction(1, 6)})*gamma({c + Fraction(5, 6)})/gamma({c})^2")
    return eval_alg(e, prec).re
