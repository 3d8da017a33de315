from __future__ import annotations

from fractions import Fraction

import mpmath
from hyperlog.mpnum import MPComplex, MPReal

# criterion number -> (passed, message); filled by the acceptance tests
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def to_mp(x):
    """Convert an MPReal/MPComplex to an mpmath number (exactly)."""
    if isinstance(x, MPComplex):
        return mpmath.mpc(to_mp(x.re), to_mp(x.im))
    f = x.to_fraction()
    with mpmath.workprec(max(4000, x.prec + 64)):
        return mpmath.mpf(f.numerator) / f.denominator


def rel_err(x, expected) -> mpmath.mpf:
    """``|x - expected| / max(1, |expected|)`` in mpmath at generous precision."""
    with mpmath.workprec(4000):
        e = mpmath.mpmathify(expected) if not isinstance(expected, Fraction) else \
            mpmath.mpf(expected.numerator) / expected.denominator
        return abs(to_mp(x) - e) / max(1, abs(e))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
