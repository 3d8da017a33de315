"""Command-line interface: ``hyperlog check | eval | verify | discover | periods``.

Exit codes: 0 success, 1 verification failure (or nothing found),
2 usage/parse error, 3 violated precondition.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .algexpr import ParseError, TransTerm, parse
from .exact import HGTriple, PreconditionError, as_rational, condition_holds, eligible_q_values

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    digits: int = 60
    output: str = "text"
    catalog: str | None = None

    def __post_init__(self) -> None:
        if self.digits < 10:
            raise UsageError("--digits must be at least 10")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output!r}")

    @property
    def prec(self) -> int:
        return math.ceil(self.digits * math.log2(10)) + 8

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(ns.command, getattr(ns, "digits", 60),
                   "json" if getattr(ns, "json", False) else "text",
                   getattr(ns, "catalog", None) or os.environ.get("HYPERLOG_CATALOG") or None)


def _rational(s: str) -> Fraction:
    try:
        return as_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {s!r}") from exc


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# --------------------------------------------------------------------------

def cmd_check(ns, cfg: RunConfig) -> int:
    a, b = _rational(ns.a), _rational(ns.b)
    if ns.q is None and ns.max_den is None:
        raise UsageError("check needs --q or --max-den")
    if ns.q is not None:
        t = HGTriple(a, b, _rational(ns.q))
        res = condition_holds(t)
        payload = {"a": str(t.a), "b": str(t.b), "q": str(t.q), "holds": res.holds,
                   "witnesses": [{"s": s, "sum": str(v)} for s, v in res.witnesses]}
        lines = [f"triple {t}: condition {'holds' if res.holds else 'fails'}"]
        lines += [f"  s={s}: fractional sum = {v}" for s, v in res.witnesses]
        _emit(cfg, payload, "\n".join(lines))
        return EXIT_OK if res.holds else EXIT_FAIL
    qs = eligible_q_values(a, b, ns.max_den)
    payload = {"a": str(a), "b": str(b), "max_den": ns.max_den, "eligible_q": [str(q) for q in qs]}
    _emit(cfg, payload, f"eligible q ({len(qs)}): " + ", ".join(str(q) for q in qs))
    return EXIT_OK if qs else EXIT_FAIL


def cmd_eval(ns, cfg: RunConfig) -> int:
    from .hyper import (HGSpec, euler_transform_details, hyp2f1, sum_series)

    prec = cfg.prec
    d = cfg.digits
    if ns.function == "2F1":
        if ns.c is None:
            raise UsageError("2F1 needs --c")
        a, b, c = _rational(ns.a), _rational(ns.b), _rational(ns.c)
        x = _rational(ns.x)
        v = hyp2f1(a, b, c, x, prec)
        payload = {"function": "2F1", "a": str(a), "b": str(b), "c": str(c), "x": str(x),
                   "value": v.to_decimal(d)}
        _emit(cfg, payload, f"2F1({a}, {b}; {c}; {x}) = {v.to_decimal(d)}")
        return EXIT_OK
    t = HGTriple(_rational(ns.a), _rational(ns.b), _rational(ns.q))
    t0 = time.perf_counter()
    series = sum_series(HGSpec((t.a, t.b, t.q), (t.a + t.b, t.q + 1), 1), prec)
    t1 = time.perf_counter()
    quad = euler_transform_details(t.a, t.b, t.q, prec)
    t2 = time.perf_counter()
    diff = abs(series.value - quad.value)
    agree = d if diff.is_zero() else min(d, -math.log10(float(diff / max(1, abs(quad.value)))))
    payload = {
        "function": "3F2", "a": str(t.a), "b": str(t.b), "q": str(t.q),
        "series": series.value.to_decimal(d), "series_terms": series.terms,
        "series_seconds": f"{t1 - t0:.3f}",
        "euler_transform": quad.value.to_decimal(d), "quadrature_levels": quad.levels,
        "euler_seconds": f"{t2 - t1:.3f}", "agreement_digits": f"{agree:.1f}",
    }
    text = (f"3F2({t.a}, {t.b}, {t.q}; {t.a + t.b}, {t.q + 1}; 1)\n"
            f"  series (Levin u, {series.terms} terms): {series.value.to_decimal(d)}\n"
            f"  Euler transform (tanh-sinh):      {quad.value.to_decimal(d)}\n"
            f"  agreement: {agree:.1f} digits")
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_verify(ns, cfg: RunConfig) -> int:
    from .catalog import get_entry, load_catalog, verify_all

    entries = load_catalog(cfg.catalog)
    if ns.id:
        entries = [get_entry(i, entries) for i in ns.id]
    elif not ns.all:
        raise UsageError("verify needs --all or --id")
    report = verify_all(cfg.digits, entries, jobs=ns.jobs)
    if cfg.output == "json":
        print(json.dumps(report["entries"], indent=2))
    else:
        for r in report["entries"]:
            flag = "PASS" if r["pass"] else "FAIL"
            extra = " (branch-sensitive)" if r["branch_sensitive"] else ""
            print(f"{flag} {r['id']:8s} delta={r['delta_decimal_string']} "
                  f"achieved={r['achieved']} digits{extra}")
        print(f"{report['passed']}/{report['total']} pass at {cfg.digits} digits")
    return EXIT_OK if report["all_pass"] else EXIT_FAIL


def _split_candidates(s: str) -> list:
    """Comma-separated expressions; ``atan(E)``/``acos(E)`` become those
    terms, anything else is taken as the argument of a log."""
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    terms = []
    for c in (c.strip() for c in out):
        if not c:
            continue
        for kind in ("atan", "acos", "log"):
            if c.startswith(kind + "(") and c.endswith(")"):
                terms.append(TransTerm(kind, parse(c[len(kind) + 1:-1])))
                break
        else:
            terms.append(TransTerm("log", parse(c)))
    if not terms:
        raise UsageError("no candidates given")
    return terms


def cmd_discover(ns, cfg: RunConfig) -> int:
    from .pslq import discover_formula

    t = HGTriple(_rational(ns.a), _rational(ns.b), _rational(ns.q))
    cands = _split_candidates(ns.candidates)
    res = discover_formula(t, cands, cfg.prec, prefactor=parse(ns.prefactor),
                           max_norm=ns.max_norm)
    rel = res.relation
    payload = {
        "triple": {"a": str(t.a), "b": str(t.b), "q": str(t.q)},
        "status": rel.status,
        "relation": None if rel.found is None else list(rel.found),
        "labels": rel.labels,
        "norm_bound_searched": rel.norm_bound_searched,
        "confirmation_residual": None if rel.confirmation is None else rel.confirmation.to_decimal(6),
        "formula": None if res.formula is None else res.formula.to_dict(),
        "check_digits": None if res.check_digits is None else f"{res.check_digits:.1f}",
    }
    if res.formula is None:
        text = f"no formula: {rel.describe()}"
    else:
        text = (f"relation: {rel.describe()}\nformula:  {res.formula.render()}\n"
                f"confirmed: residual {rel.confirmation.to_decimal(6)} at {2 * rel.prec} bits; "
                f"formula holds to {res.check_digits:.1f} digits")
    _emit(cfg, payload, text)
    return EXIT_OK if res.formula is not None else EXIT_FAIL


def cmd_periods(ns, cfg: RunConfig) -> int:
    from .periods import PeriodSpec, hypergeometric_period, real_period

    spec = PeriodSpec(_rational(ns.t), ns.cycle)
    p = real_period(spec, cfg.prec)
    ref = hypergeometric_period(spec, cfg.prec)
    diff = abs(p - ref)
    agree = cfg.digits if diff.is_zero() else min(cfg.digits, -math.log10(float(diff / p)))
    z = "1-t^2" if spec.cycle == "vanishing-at-1" else "t^2"
    payload = {"t": str(spec.t), "cycle": spec.cycle, "period": p.to_decimal(cfg.digits),
               "hypergeometric": ref.to_decimal(cfg.digits), "agreement_digits": f"{agree:.1f}"}
    text = (f"period over the cycle {spec.cycle} at t={spec.t}: {p.to_decimal(cfg.digits)}\n"
            f"(2pi/sqrt3) 2F1(1/6, 5/6; 1; {z}):          {ref.to_decimal(cfg.digits)}\n"
            f"agreement: {agree:.1f} digits")
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_export_catalog(ns, cfg: RunConfig) -> int:
    from .catalog import export_catalog, load_catalog

    text = export_catalog(load_catalog(cfg.catalog))
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=60, help="decimal digits (default 60)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="hyperlog",
                                description="Log formulas for 3F2(a, b, q; a+b, q+1; 1).")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="eligibility condition")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--q")
    g.add_argument("--max-den", type=int)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("eval", parents=[common], help="evaluate 3F2 (both methods) or 2F1")
    e.add_argument("function", choices=["3F2", "2F1"])
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--q", help="3F2: third upper parameter")
    e.add_argument("--c", help="2F1: lower parameter")
    e.add_argument("--x", default="1", help="2F1: argument in [0, 1] (default 1)")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", parents=[common], help="verify catalog identities")
    g = v.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--id", action="append")
    v.add_argument("--catalog", help="catalog JSON file (overrides HYPERLOG_CATALOG)")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("discover", parents=[common], help="search a log formula by PSLQ")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.add_argument("--q", required=True)
    d.add_argument("--candidates", required=True,
                   help='comma-separated, e.g. "2+sqrt(3)" or "atan(1/2),5"')
    d.add_argument("--prefactor", default="1",
                   help="algebraic factor P in pi*P*F (default 1)")
    d.add_argument("--max-norm", type=int, default=10**4)
    d.set_defaults(func=cmd_discover)

    r = sub.add_parser("periods", parents=[common], help="periods of y^2 = 2x^3 - 3x^2 + t^2")
    r.add_argument("--t", required=True)
    r.add_argument("--cycle", default="v1", help="v1 (vanishing at 1) or v0 (vanishing at 0)")
    r.set_defaults(func=cmd_periods)

    x = sub.add_parser("export-catalog", parents=[common], help="write the catalog as JSON")
    x.add_argument("--catalog")
    x.add_argument("--output", "-o")
    x.set_defaults(func=cmd_export_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns)
        if ns.command == "eval" and ns.function == "3F2" and ns.q is None:
            raise UsageError("3F2 needs --q")
        return ns.func(ns, cfg)
    except (UsageError, ParseError) as exc:
        print(f"hyperlog: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"hyperlog: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except KeyError as exc:
        print(f"hyperlog: error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError) as exc:
        print(f"hyperlog: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
